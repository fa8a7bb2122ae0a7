//! Jaynes–Cummings battery with couplings `g(t) = g₀e^{Mt}`, `Δ(t) = Δ₀e^{Mt}`.

use crate::error::{Error, Result};
use crate::haar_analytics::{avg_work_over_interaction, q_factor};
use crate::linalg::{pauli, ComplexMatrix, ResourceGuard};
use crate::scalar::{wrap_phase, Complex, Real};
use crate::spectrum::PhaseSpectrum;

/// Time dependence shared by coupling and detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ramp<T> {
    /// `e^{Mt}` with `M ≠ 0`.
    Exponential { rate: T },
    /// Constant coupling, the `M → 0` limit.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcConfig<T> {
    /// Field frequency `ω`.
    pub omega: T,
    /// Atomic frequency `Ω`.
    pub big_omega: T,
    pub g0: T,
    pub ramp: Ramp<T>,
    pub t0: T,
    /// Number of field modes `R`; the phase list has `n = 2R` entries.
    pub r_modes: usize,
}

impl<T: Real> JcConfig<T> {
    /// Resonant (`Δ₀ = 0`) configuration.
    pub fn resonant(g0: T, ramp: Ramp<T>, t0: T, r_modes: usize) -> Result<Self> {
        let cfg = Self {
            omega: T::one(),
            big_omega: T::one(),
            g0,
            ramp,
            t0,
            r_modes,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_modes == 0 {
            return Err(Error::Domain("r_modes must be at least 1".into()));
        }
        if let Ramp::Exponential { rate } = self.ramp {
            if rate == T::zero() {
                return Err(Error::Domain("ramp rate M = 0 needs the constant ramp".into()));
            }
        }
        if !(self.g0.is_finite() && self.t0.is_finite() && self.omega.is_finite() && self.big_omega.is_finite()) {
            return Err(Error::Domain("non-finite model parameter".into()));
        }
        Ok(())
    }

    /// `n = 2R`.
    pub fn dim(&self) -> usize {
        2 * self.r_modes
    }

    /// `Δ₀ = Ω − ω`.
    pub fn detuning(&self) -> T {
        self.big_omega - self.omega
    }

    fn growth(&self, t: T) -> T {
        match self.ramp {
            Ramp::Exponential { rate } => (rate * t).exp(),
            Ramp::Constant => T::one(),
        }
    }

    /// `∫_{t₀}^t e^{Mt′}dt′ = (e^{Mt} − e^{Mt₀})/M`, or `t − t₀` for a constant ramp.
    pub fn envelope(&self, t: T) -> Result<T> {
        if t < self.t0 {
            return Err(Error::Domain(format!(
                "t = {} precedes t0 = {}",
                t.to_f64_lossy(),
                self.t0.to_f64_lossy()
            )));
        }
        Ok(match self.ramp {
            Ramp::Exponential { rate } => ((rate * t).exp() - (rate * self.t0).exp()) / rate,
            Ramp::Constant => t - self.t0,
        })
    }

    /// Instantaneous `2×2` block on `{|e, r⟩, |g, r+1⟩}`.
    pub fn block_hamiltonian(&self, r: usize, t: T) -> ComplexMatrix<T> {
        let s = self.growth(t);
        let half_delta = self.detuning() * s / T::lit(2.0);
        let g = self.g0 * s * T::from_count(r + 1).sqrt();
        pauli::z::<T>()
            .scale_real(half_delta)
            .add_ref(&pauli::x::<T>().scale_real(g))
    }
}

/// `β_r(t) = (Δ₀²/4 + g₀²(r+1)) ((e^{Mt} − e^{Mt₀})/M)²`.
pub fn jc_beta<T: Real>(r: usize, t: T, cfg: &JcConfig<T>) -> Result<T> {
    cfg.validate()?;
    let e = cfg.envelope(t)?;
    let d = cfg.detuning();
    Ok((d * d / T::lit(4.0) + cfg.g0 * cfg.g0 * T::from_count(r + 1)) * e * e)
}

/// `α_t = g₀² ((e^{Mt} − e^{Mt₀})/M)² = β_{r+1} − β_r`.
pub fn jc_alpha<T: Real>(t: T, cfg: &JcConfig<T>) -> Result<T> {
    cfg.validate()?;
    let e = cfg.envelope(t)?;
    Ok(cfg.g0 * cfg.g0 * e * e)
}

/// Phases `(+β_0, −β_0, +β_1, −β_1, …)` for `r = 0..R−1`.
pub fn jc_phases<T: Real>(t: T, cfg: &JcConfig<T>, guard: &ResourceGuard) -> Result<PhaseSpectrum<T>> {
    cfg.validate()?;
    guard.check(cfg.dim())?;
    let mut phases = Vec::with_capacity(cfg.dim());
    for r in 0..cfg.r_modes {
        let b = jc_beta(r, t, cfg)?;
        phases.push(b);
        phases.push(-b);
    }
    PhaseSpectrum::new(phases)
}

/// Unitary block `cos β · I − i sin β (n̂·σ)` whose eigenphases are `±β_r`,
/// with `n̂ ∝ (g₀√(r+1), 0, Δ₀/2)`.
pub fn jc_stone_block<T: Real>(r: usize, t: T, cfg: &JcConfig<T>) -> Result<ComplexMatrix<T>> {
    let beta = jc_beta(r, t, cfg)?;
    let gx = cfg.g0 * T::from_count(r + 1).sqrt();
    let dz = cfg.detuning() / T::lit(2.0);
    let norm = (gx * gx + dz * dz).sqrt();
    if norm == T::zero() {
        return Ok(ComplexMatrix::identity(2));
    }
    let axis = pauli::x::<T>()
        .scale_real(gx / norm)
        .add_ref(&pauli::z::<T>().scale_real(dz / norm));
    Ok(ComplexMatrix::identity(2)
        .scale_real(beta.cos())
        .sub_ref(&axis.scale(Complex::new(T::zero(), beta.sin()))))
}

/// `Q̃(α) = Σ_{1≤i<j≤n} cos(α(i − j)) = ½(sin²(nα/2)/sin²(α/2) − n)`.
///
/// `α` is reduced modulo `2π` first; on exact multiples of `2π` the removable
/// singularity is replaced by its limit `n(n−1)/2`.
pub fn q_tilde_closed<T: Real>(alpha: T, n: usize) -> T {
    let nf = T::from_count(n);
    let delta = wrap_phase(alpha);
    let half = T::lit(0.5);
    let s = (delta * half).sin();
    if s == T::zero() {
        return nf * (nf - T::one()) * half;
    }
    let num = (nf * delta * half).sin();
    half * (num * num / (s * s) - nf)
}

/// The csc/cot expression for `Q̃(α)` as printed, without reduction or limit handling.
pub fn q_tilde_csc_form<T: Real>(alpha: T, n: usize) -> T {
    let nf = T::from_count(n);
    let two = T::lit(2.0);
    let pi = T::pi();
    let h = alpha / two;
    let csc = T::one() / h.sin();
    let cot = h.cos() / h.sin();
    let tail = (alpha - two * alpha * nf - pi) / two;
    T::lit(0.25)
        * (((alpha - pi) / two).cos() * csc - ((alpha - pi) / two).sin() * cot * csc - csc * tail.cos()
            + cot * csc * tail.sin()
            - two * nf)
}

/// `Q̃` in the variable `z = α/2π`: `¼ csc²(πz)(n cos 2πz − cos 2πnz − n + 1)`.
pub fn q_tilde_z_form<T: Real>(z: T, n: usize) -> T {
    let nf = T::from_count(n);
    let pi = T::pi();
    let two_pi_z = T::two_pi() * z;
    let s = (pi * z).sin();
    T::lit(0.25) * (nf * two_pi_z.cos() - (nf * two_pi_z).cos() - nf + T::one()) / (s * s)
}

/// `Σ_{j<k} cos(θ_j − θ_k)` of the JC phases `{±β_r}` in closed form.
///
/// With `β_r = c + (r+1)α` and `c = Δ₀²T²/4`, `Σ_k e^{iθ_k} = 2 Σ_{r=1}^{R} cos(c + rα)`.
pub fn jc_pair_sum<T: Real>(t: T, cfg: &JcConfig<T>) -> Result<T> {
    cfg.validate()?;
    let e = cfg.envelope(t)?;
    let alpha = cfg.g0 * cfg.g0 * e * e;
    let d = cfg.detuning();
    let c = d * d * e * e / T::lit(4.0);
    let r = T::from_count(cfg.r_modes);
    let half = T::lit(0.5);
    let delta = wrap_phase(alpha);
    let s = (delta * half).sin();
    // cos(c + rα) = cos(c + rδ) for integer r
    let cos_sum = if s == T::zero() {
        r * (c + (r + T::one()) * delta * half).cos()
    } else {
        (r * delta * half).sin() * (c + (r + T::one()) * delta * half).cos() / s
    };
    let trace_sq = T::lit(4.0) * cos_sum * cos_sum;
    Ok(half * (trace_sq - T::from_count(cfg.dim())))
}

/// `W₀ = (E₀ − trH₀/n) n/(n+1)`.
pub fn jc_w0<T: Real>(n: usize, e0: T, tr_h0: T) -> T {
    let nf = T::from_count(n);
    (e0 - tr_h0 / nf) * nf / (nf + T::one())
}

/// `W₁ = 2(E₀ − trH₀/n)/(n² − 1)`.
pub fn jc_w1<T: Real>(n: usize, e0: T, tr_h0: T) -> T {
    let nf = T::from_count(n);
    T::lit(2.0) * (e0 - tr_h0 / nf) / (nf * nf - T::one())
}

/// `⟨W(t)⟩_V = W₀ − Q̃ W₁` with `Q̃` the pair sum of the JC phases.
pub fn jc_average_work<T: Real>(t: T, cfg: &JcConfig<T>, e0: T, tr_h0: T) -> Result<T> {
    let n = cfg.dim();
    if n < 2 {
        return Err(Error::Domain("JC work needs n >= 2".into()));
    }
    let q_tilde = jc_pair_sum(t, cfg)?;
    Ok(jc_w0(n, e0, tr_h0) - q_tilde * jc_w1(n, e0, tr_h0))
}

/// Same quantity through the phase list and the generic average-work formula.
pub fn jc_average_work_via_phases<T: Real>(
    t: T,
    cfg: &JcConfig<T>,
    e0: T,
    tr_h0: T,
    guard: &ResourceGuard,
) -> Result<T> {
    let phases = jc_phases(t, cfg, guard)?;
    avg_work_over_interaction(e0, tr_h0, cfg.dim(), q_factor(&phases))
}

/// Time `t_k` at which `α(t_k) = 2πk`.
pub fn jc_revival_times<T: Real>(k: u32, cfg: &JcConfig<T>) -> Result<T> {
    cfg.validate()?;
    if k == 0 {
        return Ok(cfg.t0);
    }
    if cfg.g0 == T::zero() {
        return Err(Error::Domain("no revivals without coupling".into()));
    }
    let g = cfg.g0.abs();
    let root = (T::two_pi() * T::lit(k as f64)).sqrt();
    match cfg.ramp {
        Ramp::Constant => Ok(cfg.t0 + root / g),
        Ramp::Exponential { rate } => {
            let arg = (g * (rate * cfg.t0).exp() + root * rate) / g;
            if arg <= T::zero() {
                return Err(Error::Domain(format!(
                    "revival {k} is never reached for M = {}",
                    rate.to_f64_lossy()
                )));
            }
            Ok(arg.ln() / rate)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rate: f64, r: usize) -> JcConfig<f64> {
        JcConfig::resonant(0.8, Ramp::Exponential { rate }, 0.2, r).unwrap()
    }

    fn ladder_sum(alpha: f64, n: usize) -> f64 {
        let mut s = 0.0;
        for i in 1..=n {
            for j in i + 1..=n {
                s += (alpha * (i as f64 - j as f64)).cos();
            }
        }
        s
    }

    #[test]
    fn beta_and_alpha_basics() {
        let c = cfg(0.3, 3);
        assert_eq!(jc_beta(0, 0.2, &c).unwrap(), 0.0);
        assert_eq!(jc_alpha(0.2, &c).unwrap(), 0.0);
        let e = ((0.3_f64 * 1.5).exp() - (0.3_f64 * 0.2).exp()) / 0.3;
        assert!((jc_beta(0, 1.5, &c).unwrap() - 0.64 * e * e).abs() < 1e-14);
        for r in 0..5 {
            let d = jc_beta(r + 1, 1.5, &c).unwrap() - jc_beta(r, 1.5, &c).unwrap();
            assert!((d - jc_alpha(1.5, &c).unwrap()).abs() < 1e-12);
        }
        assert!(jc_beta(0, 0.1, &c).is_err());
        let flat = JcConfig::<f64>::resonant(0.8, Ramp::Constant, 0.2, 2).unwrap();
        assert!((jc_beta(1, 1.2, &flat).unwrap() - 0.64 * 2.0).abs() < 1e-14);
        assert!(JcConfig::resonant(0.8, Ramp::Exponential { rate: 0.0 }, 0.0, 1).is_err());
    }

    #[test]
    fn closed_forms_agree_with_ladder() {
        for n in [2, 10, 25] {
            for i in 1..40 {
                let a = 0.173 * i as f64;
                let direct = ladder_sum(a, n);
                assert!((q_tilde_closed(a, n) - direct).abs() < 1e-9);
                assert!((q_tilde_z_form(a / std::f64::consts::TAU, n) - direct).abs() < 1e-8);
            }
        }
        assert_eq!(q_tilde_closed(0.0_f64, 7), 21.0);
        assert!((q_tilde_closed(std::f64::consts::PI, 2) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn revival_round_trip() {
        let c = cfg(0.4, 2);
        let mut prev = c.t0;
        for k in 1..=5 {
            let tk = jc_revival_times(k, &c).unwrap();
            assert!(tk > prev);
            prev = tk;
            let a = jc_alpha(tk, &c).unwrap();
            assert!((a - std::f64::consts::TAU * k as f64).abs() < 1e-9);
        }
        let flat = JcConfig::<f64>::resonant(0.8, Ramp::Constant, 0.2, 2).unwrap();
        let t1 = jc_revival_times(3, &flat).unwrap();
        assert!((t1 - 0.2 - (std::f64::consts::TAU * 3.0).sqrt() / 0.8).abs() < 1e-12);
        // decaying ramp saturates before large k
        let decay = cfg(-2.0, 1);
        assert!(jc_revival_times(50, &decay).is_err());
    }

    #[test]
    fn pair_sum_routes_agree() {
        let guard = ResourceGuard::default();
        let mut c = cfg(0.25, 4);
        for &det in &[0.0, 0.7] {
            c.big_omega = c.omega + det;
            for i in 0..30 {
                let t = 0.2 + 0.11 * i as f64;
                let a = jc_average_work(t, &c, 100.0, 720.0).unwrap();
                let b = jc_average_work_via_phases(t, &c, 100.0, 720.0, &guard).unwrap();
                assert!((a - b).abs() < 1e-9, "t={t} det={det}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn block_commutes_across_times() {
        let mut c = cfg(0.5, 3);
        c.big_omega = 1.9;
        let a = c.block_hamiltonian(2, 0.3);
        let b = c.block_hamiltonian(2, 1.7);
        assert!(a.commutator(&b).frobenius_norm() < 1e-10);
    }
}
