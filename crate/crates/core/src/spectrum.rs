//! Eigenphase lists of unitaries and the phase sums built from them.

use crate::error::{Error, Result};
use crate::scalar::{cis, Complex, Real};

/// Eigenphases `theta_k` of a unitary, `lambda_k = e^{i theta_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpectrum<T> {
    phases: Vec<T>,
}

impl<T: Real> PhaseSpectrum<T> {
    pub fn new(phases: Vec<T>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::Domain("phase spectrum must be non-empty".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("phase spectrum has non-finite entries".into()));
        }
        Ok(Self { phases })
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = Complex<T>> + '_ {
        self.phases.iter().map(|&t| cis(t))
    }

    /// `Σ_k e^{i m θ_k}`, i.e. `tr K^m`.
    pub fn power_sum(&self, m: i32) -> Complex<T> {
        let m = T::lit(m as f64);
        self.phases
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &t| acc + cis(m * t))
    }

    /// `a = tr K · tr K† = |Σ e^{iθ}|²`.
    pub fn trace_modulus_sq(&self) -> T {
        self.power_sum(1).norm_sqr()
    }

    pub fn shifted(&self, c: T) -> Self {
        Self {
            phases: self.phases.iter().map(|&t| t + c).collect(),
        }
    }
}

impl<T: Real> TryFrom<Vec<T>> for PhaseSpectrum<T> {
    type Error = Error;

    fn try_from(v: Vec<T>) -> Result<Self> {
        Self::new(v)
    }
}
