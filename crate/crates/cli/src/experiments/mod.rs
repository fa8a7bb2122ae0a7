//! Experiment drivers. Each turns a validated [`Config`] into tables.

pub mod adiabatic;
pub mod concentration;
pub mod cue;
pub mod jc;
pub mod perturbation;
pub mod verify;

use rqb_core::linalg::MAX_DIM_ENV;

use crate::config::{Config, Experiment};
use crate::error::{CliError, CliResult};
use crate::output::Table;

/// Largest CUE dimension without an `RQB_MAX_DIM` override.
pub const CUE_MAX_N: usize = 500;
/// Largest dimension of experiments built on the fourth tensor power.
pub const S4_MAX_N: usize = 6;
/// Samples per `n` for the histogram experiments.
pub const MAX_SAMPLES: u64 = 10_000;

/// Dimension cap: `RQB_MAX_DIM` when set, `default` otherwise.
pub fn dim_cap(default: usize) -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

pub(crate) fn check_dims(n_list: &[usize], cap: usize) -> CliResult<()> {
    match n_list.iter().find(|&&n| n > cap) {
        Some(n) => Err(CliError::Guard(format!(
            "n = {n} exceeds the cap {cap}; set {MAX_DIM_ENV} to raise it"
        ))),
        None => Ok(()),
    }
}

pub(crate) fn check_samples(samples: u64) -> CliResult<()> {
    if samples > MAX_SAMPLES {
        return Err(CliError::Guard(format!(
            "samples = {samples} exceeds the cap {MAX_SAMPLES}"
        )));
    }
    Ok(())
}

/// SplitMix64 finaliser over `(seed, a, b)`, giving independent sub-seeds.
pub fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fixed-width bins on `[lo, hi]`; values outside are clamped into the end bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize, values: &[f64]) -> Self {
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for &v in values {
            let i = ((v - lo) / width).floor();
            let i = if i < 0.0 { 0 } else { (i as usize).min(bins - 1) };
            counts[i] += 1;
        }
        Self { lo, hi, counts }
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + width * i as f64, self.lo + width * (i + 1) as f64)
    }

    /// First bin with the largest count.
    pub fn modal_bin(&self) -> usize {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        self.counts.iter().position(|&c| c == max).unwrap_or(0)
    }
}

/// `steps + 1` equally spaced times on `[t0, t_max]`.
pub(crate) fn time_grid(t0: f64, t_max: f64, steps: u64) -> Vec<f64> {
    let dt = (t_max - t0) / steps as f64;
    (0..=steps).map(|i| t0 + dt * i as f64).collect()
}

/// Runs the experiment named in `config`. No files are touched.
pub fn execute(config: &Config, seed: u64) -> CliResult<Vec<Table>> {
    match config.experiment()? {
        Experiment::FigCue => cue::run(config, seed),
        Experiment::FigConcentration => concentration::run(config, seed),
        Experiment::FigJc => jc::run(config),
        Experiment::FigPerturbation => perturbation::run(config, seed),
        Experiment::AdiabaticTable => adiabatic::run(config, seed),
        Experiment::VerifyAll => verify::run(config, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_edges_and_clamping() {
        let h = Histogram::new(-1.0, 1.0, 4, &[-2.0, -0.6, 0.0, 0.1, 0.99, 1.0]);
        assert_eq!(h.counts, vec![2, 0, 2, 2]);
        assert_eq!(h.edges(1), (-0.5, 0.0));
        assert_eq!(h.modal_bin(), 0);
    }

    #[test]
    fn mixed_seeds_differ() {
        assert_ne!(mix_seed(1, 2, 0), mix_seed(1, 0, 2));
        assert_ne!(mix_seed(1, 2, 3), mix_seed(2, 2, 3));
        assert_eq!(mix_seed(5, 6, 7), mix_seed(5, 6, 7));
    }

    #[test]
    fn grid_endpoints() {
        let g = time_grid(1.0, 3.0, 4);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[4], 3.0);
    }
}
