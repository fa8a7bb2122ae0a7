//! Seeded Haar sampling.

use nalgebra as na;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{Complex, Real};
use crate::spectrum::PhaseSpectrum;

/// Counter-based seed: draw `stream_index` of experiment `seed`.
///
/// Each `(seed, stream_index)` pair owns an independent ChaCha20 stream, so a
/// sample never depends on which other samples were drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededRng {
    pub seed: u64,
    pub stream_index: u64,
}

impl SeededRng {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }

    pub fn with_index(&self, stream_index: u64) -> Self {
        Self::new(self.seed, stream_index)
    }
}

fn ginibre<T: Real, R: rand::Rng>(n: usize, rng: &mut R) -> na::DMatrix<Complex<T>> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    na::DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(T::lit(re * scale), T::lit(im * scale))
    })
}

/// Haar unitary from an explicit generator.
pub fn haar_unitary_from<T: Real, R: rand::Rng>(n: usize, rng: &mut R) -> Result<ComplexMatrix<T>> {
    if n == 0 {
        return Err(Error::Domain("haar_unitary needs n >= 1".into()));
    }
    let qr = ginibre::<T, R>(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let m = d.norm_sqr().sqrt();
        if m > T::zero() {
            col *= d / Complex::new(m, T::zero());
        }
    }
    ComplexMatrix::from_inner(q)
}

/// Haar-distributed `n × n` unitary (CUE).
pub fn haar_unitary<T: Real>(n: usize, rng: &SeededRng) -> Result<ComplexMatrix<T>> {
    haar_unitary_from(n, &mut rng.rng())
}

/// Eigenphases of a CUE draw.
pub fn cue_phases<T: Real>(n: usize, rng: &SeededRng) -> Result<PhaseSpectrum<T>> {
    Ok(haar_unitary::<T>(n, rng)?.eig_unitary()?.phases)
}

/// Checks `p_i ≥ 0` and `Σ p_i = 1` within `tol`.
pub fn check_probabilities<T: Real>(p: &[T], tol: T) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities("empty vector".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < -tol) {
        return Err(Error::InvalidProbabilities(format!(
            "entry {} is negative or not finite",
            x.to_f64_lossy()
        )));
    }
    let total = p.iter().fold(T::zero(), |a, &b| a + b);
    if (total - T::one()).abs() > tol {
        return Err(Error::InvalidProbabilities(format!(
            "entries sum to {}",
            total.to_f64_lossy()
        )));
    }
    Ok(())
}

/// `G diag(p) G†` with Haar `G`.
pub fn random_state_fixed_spectrum<T: Real>(p: &[T], rng: &SeededRng) -> Result<ComplexMatrix<T>> {
    check_probabilities(p, crate::linalg::default_tol())?;
    let n = p.len();
    let g = haar_unitary::<T>(n, rng)?;
    let d: Vec<Complex<T>> = p.iter().map(|&x| Complex::new(x, T::zero())).collect();
    let rho = g.scale_columns(&d).mul(&g.dagger());
    // exact Hermiticity, so downstream traces carry no round-off imaginary part
    Ok(rho.add_ref(&rho.dagger()).scale_real(T::lit(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_is_a_phase() {
        let u = haar_unitary::<f64>(1, &SeededRng::new(1, 0)).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-14);
        assert!(haar_unitary::<f64>(0, &SeededRng::new(1, 0)).is_err());
    }

    #[test]
    fn unitarity_n50() {
        let u = haar_unitary::<f64>(50, &SeededRng::new(2, 0)).unwrap();
        assert!(u.unitary_residual() < 1e-10);
    }

    #[test]
    fn deterministic_and_stream_separated() {
        let a = haar_unitary::<f64>(4, &SeededRng::new(7, 3)).unwrap();
        let b = haar_unitary::<f64>(4, &SeededRng::new(7, 3)).unwrap();
        let c = haar_unitary::<f64>(4, &SeededRng::new(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn cue_phases_shape() {
        let ph = cue_phases::<f64>(8, &SeededRng::new(3, 0)).unwrap();
        assert_eq!(ph.len(), 8);
        let pi = std::f64::consts::PI;
        assert!(ph.phases().iter().all(|&t| t > -pi && t <= pi));
    }

    #[test]
    fn fixed_spectrum_state() {
        let rho = random_state_fixed_spectrum(&[1.0 / 3.0; 3], &SeededRng::new(4, 0)).unwrap();
        let diff = rho.sub_ref(&ComplexMatrix::identity(3).scale_real(1.0 / 3.0));
        assert!(diff.frobenius_norm() < 1e-14);

        let p = [0.5_f64, 0.3, 0.2];
        let rho = random_state_fixed_spectrum(&p, &SeededRng::new(5, 0)).unwrap();
        assert!(rho.is_density(1e-9));
        let purity = rho.trace_product(&rho).re;
        assert!((purity - 0.38).abs() < 1e-10);
        let ev = rho.eig_hermitian().unwrap().values;
        for (a, b) in ev.iter().zip([0.2, 0.3, 0.5]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn invalid_probabilities() {
        let r = SeededRng::new(0, 0);
        assert!(matches!(
            random_state_fixed_spectrum(&[0.7, 0.7], &r),
            Err(Error::InvalidProbabilities(_))
        ));
        assert!(random_state_fixed_spectrum(&[1.2, -0.2], &r).is_err());
    }
}
