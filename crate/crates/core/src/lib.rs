//! Haar-averaged work and work fluctuations of random quantum batteries.
//!
//! Every numerical routine is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the scalar to `f64`.

pub mod adiabatic;
pub mod battery;
pub mod ensembles;
pub mod error;
pub mod haar_analytics;
pub mod linalg;
pub mod mc;
pub mod models;
pub mod s4;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type PhaseSpectrum64 = spectrum::PhaseSpectrum<f64>;
