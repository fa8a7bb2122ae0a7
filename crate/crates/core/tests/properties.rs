mod common;

use proptest::prelude::*;
use rqb_core::adiabatic::{adiabatic_var_work, adiabatic_var_work_factored, AdiabaticSpec};
use rqb_core::battery::loschmidt_echo;
use rqb_core::battery::{work_commutator_forms, work_direct};
use rqb_core::ensembles::{cue_phases, haar_unitary, SeededRng};
use rqb_core::haar_analytics::{
    q_factor, q_factor_ratio_form, var_work_over_h0, var_work_over_h0_loschmidt, SpectralSummary,
};
use rqb_core::linalg::{Conjugation, ResourceGuard};
use rqb_core::mc::Welford;
use rqb_core::models::jc::{q_tilde_closed, q_tilde_csc_form};
use rqb_core::spectrum::PhaseSpectrum;
use rqb_core::ComplexMatrix64 as M;

fn phases_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 2..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_invariant_under_global_phase(phases in phases_strategy(), c in -7.0f64..7.0) {
        let s = PhaseSpectrum::new(phases).unwrap();
        prop_assert!((q_factor(&s) - q_factor(&s.shifted(c))).abs() < 1e-9);
    }

    #[test]
    fn q_ratio_form_matches_direct(phases in phases_strategy()) {
        let s = PhaseSpectrum::new(phases).unwrap();
        let q = q_factor(&s);
        prop_assert!((q_factor_ratio_form(&s).unwrap() + q / 2.0).abs() < 1e-9);
        let n = s.len() as f64;
        prop_assert!(q >= n - n * n - 1e-9 && q <= n + 1e-9);
    }

    #[test]
    fn q_tilde_closed_matches_printed_form(alpha in 0.05f64..6.2, n in 2usize..40) {
        let scale = (n * n) as f64;
        prop_assert!((q_tilde_closed(alpha, n) - q_tilde_csc_form(alpha, n)).abs() < 1e-8 * scale);
    }

    #[test]
    fn kron_is_associative(seed in any::<u64>(), n in 1usize..4) {
        let a = haar_unitary::<f64>(n, &SeededRng::new(seed, 0)).unwrap();
        let b = haar_unitary::<f64>(n + 1, &SeededRng::new(seed, 1)).unwrap();
        let c = haar_unitary::<f64>(2, &SeededRng::new(seed, 2)).unwrap();
        let left = a.kron(&b).unwrap().kron(&c).unwrap();
        let right = a.kron(&b.kron(&c).unwrap()).unwrap();
        prop_assert!(left.sub_ref(&right).frobenius_norm() < 1e-12);
        let all = M::kron_all(&[&a, &b, &c], &ResourceGuard::default()).unwrap();
        prop_assert!(all.sub_ref(&left).frobenius_norm() < 1e-12);
    }

    #[test]
    fn haar_draws_are_unitary(seed in any::<u64>(), index in any::<u64>(), n in 1usize..9) {
        let u = haar_unitary::<f64>(n, &SeededRng::new(seed, index)).unwrap();
        prop_assert!(u.is_unitary(1e-10));
        let again = haar_unitary::<f64>(n, &SeededRng::new(seed, index)).unwrap();
        prop_assert_eq!(u, again);
    }

    #[test]
    fn eig_unitary_reconstructs(seed in any::<u64>(), n in 1usize..7) {
        let u = haar_unitary::<f64>(n, &SeededRng::new(seed, 0)).unwrap();
        let e = u.eig_unitary().unwrap();
        prop_assert!(e.reconstruct().sub_ref(&u).frobenius_norm() < 1e-9);
        let ph = e.phases.phases();
        prop_assert!(ph.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn work_forms_agree(seed in any::<u64>(), n in 2usize..6) {
        let (rho, h0, k) = common::battery(n, seed);
        let w = work_direct(&rho, &h0, &k).unwrap();
        let (a, b, c) = work_commutator_forms(&rho, &h0, &k).unwrap();
        for v in [a, b, c] {
            prop_assert!((v - w).abs() < 1e-10);
        }
    }

    #[test]
    fn loschmidt_form_equals_overlap_form(seed in any::<u64>(), n in 2usize..6) {
        let (rho, h0, k) = common::battery(n, seed);
        let rho_t = rho.conjugate_rotate(&k, Conjugation::GxGdag).unwrap();
        let s = SpectralSummary::new(&rho, &h0).unwrap();
        let echo = loschmidt_echo(&rho, &rho_t).unwrap();
        let a = var_work_over_h0(&s, &rho, &rho_t).unwrap();
        let b = var_work_over_h0_loschmidt(&s, echo).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn adiabatic_variance_forms_agree(
        d in prop::collection::vec(1usize..4, 1..5),
        raw in prop::collection::vec(0.0f64..1.0, 4),
        gaps in prop::collection::vec(0.1f64..2.0, 4),
    ) {
        let r = d.len();
        let n: usize = d.iter().sum();
        prop_assume!(n >= 2);
        let norm: f64 = raw[..r].iter().zip(&d).map(|(p, d)| p * *d as f64).sum();
        prop_assume!(norm > 1e-3);
        let p: Vec<f64> = raw[..r].iter().map(|x| x / norm).collect();
        let eps: Vec<f64> = gaps[..r].iter().scan(-1.0, |acc, g| { *acc += g; Some(*acc) }).collect();
        let spec = AdiabaticSpec::new(p, eps, d).unwrap();
        let v = adiabatic_var_work(&spec).unwrap();
        prop_assert!((v.exact - adiabatic_var_work_factored(&spec).unwrap()).abs() < 1e-10);
        prop_assert!(v.exact >= -1e-12);
        prop_assert!(spec.c() >= 0.0);
    }

    #[test]
    fn welford_merge_matches_sequential(xs in prop::collection::vec(-1e3f64..1e3, 2..200), split in 0usize..200) {
        let split = split.min(xs.len());
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..split].iter().for_each(|&x| a.push(x));
        xs[split..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        prop_assert_eq!(m.count, all.count);
        prop_assert!((m.mean - all.mean).abs() < 1e-9);
        prop_assert!((m.variance() - all.variance()).abs() < 1e-6 * all.variance().max(1.0));
    }
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn haar_entries_follow_beta_law_and_are_invariant() {
    // |U₀₀|² ~ Beta(1, n−1), so the CDF is 1 − (1 − x)^{n−1}
    let n = 4;
    let samples = 4000;
    let v = haar_unitary::<f64>(n, &SeededRng::new(999, 0)).unwrap();
    let mut plain = Vec::with_capacity(samples);
    let mut rotated = Vec::with_capacity(samples);
    for i in 0..samples as u64 {
        let u = haar_unitary::<f64>(n, &SeededRng::new(5, i)).unwrap();
        plain.push(u.get(0, 0).norm_sqr());
        rotated.push(v.mul(&u).get(0, 0).norm_sqr());
    }
    let cdf = |x: f64| 1.0 - (1.0 - x).powi(n as i32 - 1);
    // 1% critical value 1.63/√N
    let critical = 1.63 / (samples as f64).sqrt();
    let d_plain = ks_statistic(plain, cdf);
    let d_rot = ks_statistic(rotated, cdf);
    assert!(d_plain < critical, "D = {d_plain}");
    assert!(d_rot < critical, "D = {d_rot}");
}

#[test]
fn cue_trace_moment() {
    // E|trU|² = 1 for n ≥ 1
    let n = 6;
    let samples = 20_000u64;
    let mut w = Welford::default();
    for i in 0..samples {
        w.push(cue_phases::<f64>(n, &SeededRng::new(8, i)).unwrap().trace_modulus_sq());
    }
    let stderr = (w.variance() / samples as f64).sqrt();
    assert!((w.mean - 1.0).abs() < 3.0 * stderr, "{} ± {stderr}", w.mean);
}
