//! Exact computations with rational Cherednik algebras of complex
//! reflection groups: PBW normal forms, Dunkl operators, standard modules
//! and their contravariant forms, Bernstein-Sato type functional equations,
//! and tests on equivariant maps between representations.

pub mod bfun;
pub mod cato;
pub mod chered;
pub mod error;
pub mod exactfield;
pub mod melys;
pub mod refgroup;

pub use error::{Error, Result};
