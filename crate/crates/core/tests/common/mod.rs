#![allow(dead_code)]

use rqb_core::ensembles::{haar_unitary, random_state_fixed_spectrum, SeededRng};
use rqb_core::ComplexMatrix64 as M;

/// Descending populations `p_i ∝ n − i`.
pub fn linear_populations(n: usize) -> Vec<f64> {
    let total = (n * (n + 1) / 2) as f64;
    (0..n).map(|i| (n - i) as f64 / total).collect()
}

/// Unequally spaced levels `ε_i = i + 0.3 i²`.
pub fn levels(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 + 0.3 * (i * i) as f64).collect()
}

/// Generic `(ρ, H₀, K)` at dimension `n`, none commuting with another.
pub fn battery(n: usize, seed: u64) -> (M, M, M) {
    let rho = random_state_fixed_spectrum(&linear_populations(n), &SeededRng::new(seed, 0)).unwrap();
    let h0 = M::diag_real(&levels(n));
    let k = haar_unitary::<f64>(n, &SeededRng::new(seed, 1)).unwrap();
    (rho, h0, k)
}
