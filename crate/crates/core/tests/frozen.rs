//! Pinned values: seeded draws, MC estimates and hand-evaluated closed forms.

use rqb_core::adiabatic::{adiabatic_avg_work, adiabatic_var_work, AdiabaticSpec};
use rqb_core::ensembles::{haar_unitary, SeededRng};
use rqb_core::haar_analytics::{avg_work_over_interaction, twirl2_coefficients, var_work_over_states};
use rqb_core::linalg::pauli;
use rqb_core::mc::estimate;
use rqb_core::models::jc::{jc_average_work, q_tilde_closed};
use rqb_core::models::{JcConfig, Ramp};
use rqb_core::s4::{fluct_statistic_m, projector_dimension, Irrep};
use rqb_core::spectrum::PhaseSpectrum;
use rqb_core::ComplexMatrix64 as M;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn seeded_haar_draw() {
    let u = haar_unitary::<f64>(3, &SeededRng::new(42, 7)).unwrap();
    assert!(close(u.get(0, 0).re, -0.9114750089630531, 1e-12));
    assert!(close(u.get(0, 0).im, 0.0005818802511782763, 1e-12));
    assert!(close(u.get(1, 2).re, -0.11531156073271509, 1e-12));
    assert!(close(u.get(1, 2).im, -0.3693676361203814, 1e-12));
}

#[test]
fn seeded_estimate() {
    // |U₀₀|² at n = 2 is uniform on [0, 1]
    let r = estimate(|s| Ok(haar_unitary::<f64>(2, s)?.get(0, 0).norm_sqr()), 4096, 42).unwrap();
    assert!(close(r.mean, 0.4998989384575094, 1e-12));
    assert!(close(r.variance, 0.08404313851517196, 1e-12));
    assert_eq!(r.samples, 4096);
}

#[test]
fn qubit_closed_forms() {
    let k = pauli::x::<f64>();
    let z = pauli::z::<f64>();
    // pure qubit, H₀ = Z, K = X: 2(2−1)/(2·3)·(2 + 2)
    assert!(close(var_work_over_states(1.0, &z, &k).unwrap(), 4.0 / 3.0, 1e-14));
    // trX = 0: λ₊ = 2/6, λ₋ = −2/2
    let (lp, lm) = twirl2_coefficients(&k).unwrap();
    assert!(close(lp, 1.0 / 3.0, 1e-14) && close(lm, -1.0, 1e-14));
    // Q = 2 at n = 2: (1 − 0)(2/3 + 2/3)
    assert!(close(
        avg_work_over_interaction(1.0, 0.0, 2, 2.0).unwrap(),
        4.0 / 3.0,
        1e-14
    ));
    assert!(close(q_tilde_closed(std::f64::consts::PI, 2), -1.0, 1e-14));
}

#[test]
fn jc_reference_point() {
    let cfg = JcConfig::<f64>::resonant(1.0, Ramp::Constant, 0.0, 1).unwrap();
    // α = π/2 at t = √(π/2): 40/3 sin²(π/2)
    let t = std::f64::consts::FRAC_PI_2.sqrt();
    assert!(close(
        jc_average_work(t, &cfg, 100.0, 180.0).unwrap(),
        40.0 / 3.0,
        1e-12
    ));
}

#[test]
fn adiabatic_reference_point() {
    let spec = AdiabaticSpec::<f64>::new(vec![0.5, 0.25], vec![0.0, 1.0], vec![1, 2]).unwrap();
    // E₀ = 0.5, trH₀ = 2
    assert!(close(adiabatic_avg_work(&spec), 0.5 - 2.0 / 3.0, 1e-14));
    // (3·0.375 − 1)(3·2 − 4)/(9·8)
    assert!(close(
        adiabatic_var_work(&spec).unwrap().exact,
        0.125 * 2.0 / 72.0,
        1e-14
    ));
}

#[test]
fn signatures_and_dimensions() {
    let s = fluct_statistic_m(&PhaseSpectrum::new(vec![0.0; 5]).unwrap());
    assert_eq!(s.as_array(), [1.0, 0.2, 0.04]);
    let dims: Vec<u64> = Irrep::ALL.iter().map(|&r| projector_dimension(r, 3)).collect();
    assert_eq!(dims, vec![15, 0, 45, 9, 12]);
    assert_eq!(M::identity(3).trace().re, 3.0);
}
