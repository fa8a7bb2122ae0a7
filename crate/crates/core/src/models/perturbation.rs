//! Second-order Dyson expansion and harmonic drives.

use crate::error::{Error, Result};
use crate::linalg::{default_tol, ComplexMatrix};
use crate::scalar::{cis, Complex, Real};

/// `n trA² − (trA)²`, i.e. `n²ΔA²` in the completely mixed state.
pub fn mixed_state_spread<T: Real>(a_op: &ComplexMatrix<T>) -> Result<T> {
    a_op.require_hermitian(default_tol())?;
    let n = T::from_count(a_op.dim());
    let tr = a_op.trace().re;
    let tr_sq = a_op.trace_product(a_op).re;
    // Cauchy–Schwarz keeps this non-negative; clip round-off
    Ok((n * tr_sq - tr * tr).max(T::zero()))
}

/// `⟨W⟩_V = (n trA² − (trA)²)/(n² − 1) · (E₀ − trH₀/n)`.
pub fn dyson2_avg_work<T: Real>(a_op: &ComplexMatrix<T>, e0: T, tr_h0: T, n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain("Dyson work needs n >= 2".into()));
    }
    if a_op.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a_op.dim(),
        });
    }
    let nf = T::from_count(n);
    Ok(mixed_state_spread(a_op)? / (nf * nf - T::one()) * (e0 - tr_h0 / nf))
}

/// `H₁(t) = V̂e^{iωt} + V̂†e^{−iωt}` switched on at `t₀`.
#[derive(Debug, Clone)]
pub struct HarmonicPerturbation<T: Real> {
    v0: ComplexMatrix<T>,
    omega: T,
    t0: T,
    eigenvalues: Vec<Complex<T>>,
    /// `Σσ_k² = tr(V̂V̂†)`
    singular_sq_sum: T,
}

impl<T: Real> HarmonicPerturbation<T> {
    pub fn new(v0: ComplexMatrix<T>, omega: T, t0: T) -> Result<Self> {
        if !omega.is_finite() || !t0.is_finite() {
            return Err(Error::Domain("non-finite drive parameter".into()));
        }
        let eigenvalues = v0.eigenvalues()?;
        let singular_sq_sum = v0.frobenius_norm().powi(2);
        Ok(Self {
            v0,
            omega,
            t0,
            eigenvalues,
            singular_sq_sum,
        })
    }

    pub fn v0(&self) -> &ComplexMatrix<T> {
        &self.v0
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn dim(&self) -> usize {
        self.v0.dim()
    }

    /// `f(t, ω) = 2 sin((t − t₀)ω/2)/ω`, tending to `t − t₀` at `ω = 0`.
    pub fn f(&self, t: T) -> T {
        let dt = t - self.t0;
        if self.omega == T::zero() {
            dt
        } else {
            T::lit(2.0) * (dt * self.omega / T::lit(2.0)).sin() / self.omega
        }
    }

    /// Mid-point phase `φ = (t + t₀)ω/2`.
    fn phase(&self, t: T) -> T {
        (t + self.t0) * self.omega / T::lit(2.0)
    }
}

/// `A(t) = ∫_{t₀}^t H₁ dt′ = f(t,ω)(V̂e^{iφ} + V̂†e^{−iφ})`.
pub fn harmonic_a_operator<T: Real>(pert: &HarmonicPerturbation<T>, t: T) -> ComplexMatrix<T> {
    let f = pert.f(t);
    let w = cis(pert.phase(t));
    let a = pert.v0.scale(w);
    a.add_ref(&a.dagger()).scale_real(f)
}

/// Dimensionless factor `(n trA² − (trA)²)/(n² − 1)` of the harmonic drive,
/// from the eigenvalues `λ_k` and singular values `σ_k` of `V̂`:
///
/// `2f²/(n²−1) [n Σ Re(λ_k² e^{2iφ}) + n Σ σ_k² − 2 (Σ Re(λ_k e^{iφ}))²]`.
pub fn harmonic_avg_work<T: Real>(pert: &HarmonicPerturbation<T>, t: T) -> Result<T> {
    let n = pert.dim();
    if n < 2 {
        return Err(Error::Domain("harmonic work needs n >= 2".into()));
    }
    let nf = T::from_count(n);
    let f = pert.f(t);
    let w = cis(pert.phase(t));
    let w2 = w * w;
    let s1 = pert.eigenvalues.iter().fold(T::zero(), |acc, l| acc + (*l * w).re);
    let s2 = pert
        .eigenvalues
        .iter()
        .fold(T::zero(), |acc, l| acc + (*l * *l * w2).re);
    let bracket = nf * s2 + nf * pert.singular_sq_sum - T::lit(2.0) * s1 * s1;
    Ok((T::lit(2.0) * f * f / (nf * nf - T::one()) * bracket).max(T::zero()))
}

/// [`harmonic_avg_work`] times `E₀ − trH₀/n`.
pub fn harmonic_battery_work<T: Real>(pert: &HarmonicPerturbation<T>, t: T, e0: T, tr_h0: T) -> Result<T> {
    let nf = T::from_count(pert.dim());
    Ok(harmonic_avg_work(pert, t)? * (e0 - tr_h0 / nf))
}

/// Local maxima of `samples` (strictly above both neighbours), as indices.
pub fn local_maxima(samples: &[f64]) -> Vec<usize> {
    (1..samples.len().saturating_sub(1))
        .filter(|&i| samples[i] > samples[i - 1] && samples[i] >= samples[i + 1])
        .collect()
}
