//! Equivariant polynomial maps between linear representations: the melys
//! conditions, pulled back parameters, the classification onto irreducible
//! targets, the factorization through power maps, and stabilizer strata.

mod classify;
mod map;
mod rep;
mod strata;

pub use classify::{
    classify_irreducible_melys, factor_linear_melys, FactorBlock, IrreducibleClass,
    MelysFactorization,
};
pub use map::{EquivariantMap, MelysReport, MelysWitness};
pub use rep::{linear_form, subgroup, LinearRep, RepReflection};
pub use strata::{stabilizer_strata, Stratum};
