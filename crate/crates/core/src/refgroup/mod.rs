//! Finite complex reflection groups, their hyperplane data, characters and
//! the parameters of the associated Cherednik algebras.

mod character;
mod group;
mod parameter;

pub(crate) use character::conductor_of;
pub use character::{characters, Character};
pub use group::{Hyperplane, ReflectionDatum, ReflectionGroup, DEFAULT_SIZE_CAP};
pub use parameter::{scalar_field_for, CParameter, Parameter};
