//! Category O: truncated Verma modules, contravariant forms, singular
//! vectors and the regular/aspherical tests.

mod analysis;
mod gram;
mod verma;

pub use analysis::{
    aspherical_candidates, aspherical_test, aspherical_witness, irreducibles, is_regular_truncated,
    simple_trivial_dims, singular_vectors, AsphericalWitness,
};
pub use gram::GramBlock;
pub use verma::{euler_lowest_eigenvalue, GradedModule};
