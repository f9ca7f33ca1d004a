//! Functional equations `D(f m f^s) = b(s) m f^s`, the `f^s` twist, and
//! modules on the line: localization, composition series, shift functors
//! and the Jacquet functor at the origin.

mod jacquet;
mod line;
mod solver;
mod twist;

pub use jacquet::{jacquet_line, FreeLineModule, JacquetModule, JacquetPiece, LineOModule};
pub use line::{
    generation_by_roots, rational_line_kappa, roots_meeting, shift_functor_line, CompositionSeries,
    LineFactor, LineModule,
};
pub use solver::{
    apply_untwisted, bfunction, bfunction_polynomial, BFunctionOptions, BFunctionResult,
};
pub use twist::{check_invariant, TwistedElement, TwistedModule};
