//! Exactly solvable and perturbative interaction models.

pub mod jc;
pub mod perturbation;

pub use jc::{JcConfig, Ramp};
pub use perturbation::HarmonicPerturbation;
