//! Closed-form Haar averages of work and its fluctuations.

use crate::battery::real_part;
use crate::error::{Error, Result};
use crate::linalg::{default_tol, ComplexMatrix};
use crate::scalar::{Complex, Real};
use crate::spectrum::PhaseSpectrum;

fn require_n_ge_2(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Domain(format!("formula needs n >= 2, got n = {n}")))
    } else {
        Ok(())
    }
}

/// Scalars of `(ρ, H₀)` entering every closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary<T> {
    pub n: usize,
    pub e0: T,
    pub tr_h0: T,
    pub tr_h0_sq: T,
    pub purity: T,
    /// `ΔH₀² = tr(H₀²)/n − (trH₀)²/n²`
    pub delta_h0_sq: T,
}

impl<T: Real> SpectralSummary<T> {
    pub fn new(rho: &ComplexMatrix<T>, h0: &ComplexMatrix<T>) -> Result<Self> {
        rho.require_same_dim(h0)?;
        let n = rho.dim();
        let nf = T::from_count(n);
        let tr_h0 = h0.trace().re;
        let tr_h0_sq = h0.trace_product(h0).re;
        let delta = tr_h0_sq / nf - tr_h0 * tr_h0 / (nf * nf);
        Ok(Self {
            n,
            e0: real_part(rho.trace_product(h0), h0.frobenius_norm())?,
            tr_h0,
            tr_h0_sq,
            purity: rho.trace_product(rho).re,
            delta_h0_sq: delta.max(T::zero()),
        })
    }

    /// `E₀ − trH₀/n`, the energy above the completely mixed state.
    pub fn excess_energy(&self) -> T {
        self.e0 - self.tr_h0 / T::from_count(self.n)
    }
}

/// `⟨W⟩_ρ`, identically zero.
pub fn avg_work_over_states<T: Real>() -> T {
    T::zero()
}

/// `⟨W⟩_{H₀}`, identically zero.
pub fn avg_work_over_h0<T: Real>() -> T {
    T::zero()
}

/// `ΔW²_ρ = 2(n trρ² − 1)/(n(n²−1)) · (trH₀² − tr(H₀K†H₀K))`.
pub fn var_work_over_states<T: Real>(purity: T, h0: &ComplexMatrix<T>, k: &ComplexMatrix<T>) -> Result<T> {
    let n = h0.dim();
    require_n_ge_2(n)?;
    h0.require_same_dim(k)?;
    let nf = T::from_count(n);
    let rotated = k.dagger().mul(h0).mul(k);
    let cross = real_part(h0.trace_product(&rotated), h0.frobenius_norm().powi(2))?;
    let tr_h0_sq = h0.trace_product(h0).re;
    let two = T::lit(2.0);
    let v = two * (nf * purity - T::one()) / (nf * (nf * nf - T::one())) * (tr_h0_sq - cross);
    Ok(v.max(T::zero()))
}

/// `ΔW²_{H₀} = 2n/(n²−1) · ΔH₀² · tr(ρ² − ρρ_t)`.
pub fn var_work_over_h0<T: Real>(
    summary: &SpectralSummary<T>,
    rho: &ComplexMatrix<T>,
    rho_t: &ComplexMatrix<T>,
) -> Result<T> {
    require_n_ge_2(summary.n)?;
    rho.require_same_dim(rho_t)?;
    let overlap = real_part(rho.trace_product(rho_t), T::one())?;
    let purity = rho.trace_product(rho).re;
    Ok((h0_prefactor(summary) * (purity - overlap)).max(T::zero()))
}

fn h0_prefactor<T: Real>(s: &SpectralSummary<T>) -> T {
    let nf = T::from_count(s.n);
    T::lit(2.0) * nf / (nf * nf - T::one()) * s.delta_h0_sq
}

/// Loschmidt form `2n/(n²−1) · ΔH₀² · trρ² · (1 − L_t)`.
///
/// Equals [`var_work_over_h0`] whenever `trρ_t² = trρ²` (unitary evolution).
pub fn var_work_over_h0_loschmidt<T: Real>(summary: &SpectralSummary<T>, echo: T) -> Result<T> {
    require_n_ge_2(summary.n)?;
    Ok((h0_prefactor(summary) * summary.purity * (T::one() - echo)).max(T::zero()))
}

/// Time-averaged `2n/(n²−1) · ΔH₀² · trρ² · (1 − tr ρ̄²)`.
pub fn time_avg_var_over_h0<T: Real>(summary: &SpectralSummary<T>, dephased_purity: T) -> Result<T> {
    require_n_ge_2(summary.n)?;
    let nf = T::from_count(summary.n);
    let tol = default_tol::<T>();
    if dephased_purity < T::one() / nf - tol || dephased_purity > summary.purity + tol {
        return Err(Error::Domain(format!(
            "dephased purity {} outside [1/n, trρ²]",
            dephased_purity.to_f64_lossy()
        )));
    }
    Ok((h0_prefactor(summary) * summary.purity * (T::one() - dephased_purity)).max(T::zero()))
}

/// `Q = n − |Σ_k e^{iθ_k}|² = −2 Σ_{j<k} cos(θ_j − θ_k)`.
pub fn q_factor<T: Real>(phases: &PhaseSpectrum<T>) -> T {
    T::from_count(phases.len()) - phases.trace_modulus_sq()
}

/// `Q̃ = Σ_{j<k} cos(θ_j − θ_k)` through ratio products of neighbouring
/// eigenvalues, `λ_j/λ_k = Π_{i=k}^{j−1} r_i` with `r_i = λ_{i+1}/λ_i`.
pub fn q_factor_ratio_form<T: Real>(phases: &PhaseSpectrum<T>) -> Result<T> {
    let n = phases.len();
    require_n_ge_2(n)?;
    let lambda: Vec<Complex<T>> = phases.eigenvalues().collect();
    let ratios: Vec<Complex<T>> = lambda.windows(2).map(|w| w[1] * w[0].conj()).collect();
    let mut total = T::zero();
    for k in 0..n {
        let mut prod = Complex::new(T::one(), T::zero());
        for r in &ratios[k..] {
            prod *= r;
            // prod + prod⁻¹ = 2 Re(prod) on the unit circle
            total += prod.re;
        }
    }
    Ok(total)
}

/// `⟨W⟩_V = (E₀ − trH₀/n)(n/(n+1) + Q/(n²−1))`.
pub fn avg_work_over_interaction<T: Real>(e0: T, tr_h0: T, n: usize, q: T) -> Result<T> {
    require_n_ge_2(n)?;
    let nf = T::from_count(n);
    Ok((e0 - tr_h0 / nf) * (nf / (nf + T::one()) + q / (nf * nf - T::one())))
}

/// Large-`n` form `(E₀ − trH₀/n)(1 + Q/n²)`.
pub fn avg_work_over_interaction_large_n<T: Real>(e0: T, tr_h0: T, n: usize, q: T) -> T {
    let nf = T::from_count(n);
    (e0 - tr_h0 / nf) * (T::one() + q / (nf * nf))
}

/// `(λ₊, λ₋)` of the 2-fold twirl of `K ⊗ K†`.
pub fn twirl2_coefficients<T: Real>(k: &ComplexMatrix<T>) -> Result<(T, T)> {
    let n = k.dim();
    require_n_ge_2(n)?;
    k.require_unitary(default_tol())?;
    let a = k.trace().norm_sqr();
    let b = T::from_count(n);
    let nf = T::from_count(n);
    Ok(((a + b) / (nf * (nf + T::one())), (a - b) / (nf * (nf - T::one()))))
}

/// Swap on `C^n ⊗ C^n`.
pub fn swap_operator<T: Real>(n: usize) -> ComplexMatrix<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    ComplexMatrix::from_fn(n * n, |r, c| {
        let (i, j) = (r / n, r % n);
        if c == j * n + i {
            one
        } else {
            zero
        }
    })
}

/// `(Π₊, Π₋) = ((I ± SWAP)/2)`.
pub fn twirl2_projectors<T: Real>(n: usize) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let id = ComplexMatrix::identity(n * n);
    let swap = swap_operator(n);
    let half = T::lit(0.5);
    (id.add_ref(&swap).scale_real(half), id.sub_ref(&swap).scale_real(half))
}

/// `λ₊Π₊ + λ₋Π₋`.
pub fn twirl2_exact<T: Real>(k: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let (lp, lm) = twirl2_coefficients(k)?;
    let (pp, pm) = twirl2_projectors(k.dim());
    Ok(pp.scale_real(lp).add_ref(&pm.scale_real(lm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{cue_phases, haar_unitary, SeededRng};
    use crate::linalg::pauli;

    type M = ComplexMatrix<f64>;

    fn ph(v: &[f64]) -> PhaseSpectrum<f64> {
        PhaseSpectrum::new(v.to_vec()).unwrap()
    }

    fn direct_pair_sum(p: &PhaseSpectrum<f64>) -> f64 {
        let t = p.phases();
        let mut s = 0.0;
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                s += (t[i] - t[j]).cos();
            }
        }
        s
    }

    #[test]
    fn states_variance_examples() {
        let h = pauli::z::<f64>();
        let x = pauli::x::<f64>();
        assert!((var_work_over_states(1.0, &h, &x).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(var_work_over_states(0.5, &h, &x).unwrap(), 0.0);
        assert_eq!(var_work_over_states(1.0, &h, &M::identity(2)).unwrap(), 0.0);
        assert!(var_work_over_states(1.0, &M::identity(1), &M::identity(1)).is_err());
    }

    #[test]
    fn h0_variance_examples() {
        let h = pauli::z::<f64>();
        let rho = M::basis_projector(2, 0);
        let rho_t = M::basis_projector(2, 1);
        let s = SpectralSummary::new(&rho, &h).unwrap();
        assert!((var_work_over_h0(&s, &rho, &rho_t).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(var_work_over_h0(&s, &rho, &rho).unwrap(), 0.0);
        assert!((var_work_over_h0_loschmidt(&s, 0.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);

        let flat = SpectralSummary::new(&rho, &M::identity(2).scale_real(3.0)).unwrap();
        assert_eq!(flat.delta_h0_sq, 0.0);
        assert_eq!(var_work_over_h0(&flat, &rho, &rho_t).unwrap(), 0.0);
    }

    #[test]
    fn time_averaged_examples() {
        let n = 4;
        let h = M::diag_real(&[0.0, 1.0, 2.0, 3.0]);
        let rho = M::basis_projector(n, 0);
        let s = SpectralSummary::new(&rho, &h).unwrap();
        assert_eq!(time_avg_var_over_h0(&s, 1.0).unwrap(), 0.0);
        let expected = 2.0 * 4.0 / 15.0 * s.delta_h0_sq * (1.0 - 0.25);
        assert!((time_avg_var_over_h0(&s, 0.25).unwrap() - expected).abs() < 1e-14);
        assert!(time_avg_var_over_h0(&s, 0.1).is_err());
    }

    #[test]
    fn q_factor_examples() {
        assert!((q_factor(&ph(&[0.3; 5])) + 20.0).abs() < 1e-12);
        let pi = std::f64::consts::PI;
        assert!((q_factor(&ph(&[0.0, pi])) - 2.0).abs() < 1e-12);
        assert!((q_factor_ratio_form(&ph(&[1.1; 6])).unwrap() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_form_matches_double_sum() {
        for seed in 0..5 {
            let p = cue_phases::<f64>(20, &SeededRng::new(seed, 0)).unwrap();
            let r = q_factor_ratio_form(&p).unwrap();
            assert!((r - direct_pair_sum(&p)).abs() < 1e-9);
            assert!((-2.0 * r - q_factor(&p)).abs() < 1e-9);
        }
    }

    #[test]
    fn avg_work_examples() {
        assert_eq!(avg_work_over_interaction(1.5, 3.0, 2, 0.7).unwrap(), 0.0);
        let n = 5;
        let q_id = -((n * (n - 1)) as f64);
        assert!(avg_work_over_interaction(2.0, 1.0, n, q_id).unwrap().abs() < 1e-14);
        let w = avg_work_over_interaction::<f64>(2.0, 5.0, n, 0.0).unwrap();
        assert!((w - 1.0 * 5.0 / 6.0).abs() < 1e-14);
        assert!(avg_work_over_interaction(2.0, 1.0, 1, 0.0).is_err());
        assert!((avg_work_over_interaction_large_n::<f64>(2.0, 5.0, 5, 0.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn twirl_coefficients_examples() {
        let (lp, lm) = twirl2_coefficients(&M::identity(3)).unwrap();
        assert!((lp - 1.0).abs() < 1e-14 && (lm - 1.0).abs() < 1e-14);
        assert!(
            twirl2_exact(&M::identity(3))
                .unwrap()
                .sub_ref(&M::identity(9))
                .frobenius_norm()
                < 1e-13
        );
        // traceless
        let (lp, lm) = twirl2_coefficients(&pauli::z::<f64>()).unwrap();
        assert!((lp - 1.0 / 3.0).abs() < 1e-14 && (lm + 1.0).abs() < 1e-14);
    }

    #[test]
    fn swap_and_projectors() {
        let n = 3;
        let swap = swap_operator::<f64>(n);
        assert_eq!(swap.mul(&swap), M::identity(9));
        let (pp, pm) = twirl2_projectors::<f64>(n);
        assert!((pp.trace().re - 6.0).abs() < 1e-14);
        assert!((pm.trace().re - 3.0).abs() < 1e-14);
        let a = haar_unitary::<f64>(n, &SeededRng::new(1, 0)).unwrap();
        let b = haar_unitary::<f64>(n, &SeededRng::new(2, 0)).unwrap();
        let ab = a.kron(&b).unwrap();
        let ba = b.kron(&a).unwrap();
        assert!(swap.mul(&ab).mul(&swap).sub_ref(&ba).frobenius_norm() < 1e-13);
    }
}
