use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible scalars: {0}")]
    IncompatibleScalars(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("parameter dictionary mismatch: {0}")]
    DictionaryMismatch(String),
    #[error("non-abelian group: characters must be supplied explicitly")]
    NeedExplicitIrreps,
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("elements belong to different algebras")]
    IncompatibleElements,
    #[error("truncation exceeded: degree {needed} above bound {bound}")]
    TruncationExceeded { needed: usize, bound: usize },
    #[error("function is not invariant under the group")]
    NotInvariant,
    #[error("degree cap exceeded: {0}")]
    DegreeCapExceeded(String),
    #[error("illegal shift: {0}")]
    IllegalShift(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("map is not melys along {0}")]
    NotMelys(String),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("classification failure: {0}")]
    ClassificationFailure(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
