//! Histogram of `q = Q/n²` over CUE draws.

use rayon::prelude::*;
use rqb_core::ensembles::{cue_phases, SeededRng};
use rqb_core::haar_analytics::q_factor;
use rqb_core::mc::Welford;

use super::{check_dims, check_samples, dim_cap, mix_seed, Histogram, CUE_MAX_N};
use crate::config::Config;
use crate::error::CliResult;
use crate::output::Table;

pub const DEFAULT_BINS: u64 = 51;

/// Per-`n` summary of the `q` sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CueSummary {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub histogram: Histogram,
}

/// `q = Q/n²` for `samples` CUE draws; draw `i` uses stream `i` of a per-`n` seed.
pub fn q_samples(n: usize, samples: u64, seed: u64) -> CliResult<Vec<f64>> {
    let sub = mix_seed(seed, n as u64, 0);
    let nsq = (n * n) as f64;
    let qs = (0..samples)
        .into_par_iter()
        .map(|i| Ok(q_factor(&cue_phases::<f64>(n, &SeededRng::new(sub, i))?) / nsq))
        .collect::<rqb_core::Result<Vec<f64>>>()?;
    Ok(qs)
}

pub fn summarize(n: usize, qs: &[f64], bins: usize) -> CueSummary {
    let mut w = Welford::default();
    qs.iter().for_each(|&q| w.push(q));
    CueSummary {
        n,
        mean: w.mean,
        stderr: (w.variance() / w.count as f64).sqrt(),
        histogram: Histogram::new(-1.0, 1.0, bins, qs),
    }
}

pub fn run(config: &Config, seed: u64) -> CliResult<Vec<Table>> {
    let n_list = config.usize_list("n_list")?;
    let samples = config.u64("samples")?;
    let bins = config.u64_or("bins", DEFAULT_BINS)? as usize;
    check_dims(&n_list, dim_cap(CUE_MAX_N))?;
    check_samples(samples)?;

    let mut hist = Table::new("fig-cue", vec!["n", "bin_left", "bin_right", "count"]);
    let mut summary = Table::new(
        "fig-cue_summary",
        vec![
            "n",
            "samples",
            "mean",
            "stderr",
            "expected_mean",
            "modal_left",
            "modal_right",
        ],
    );
    for &n in &n_list {
        let s = summarize(n, &q_samples(n, samples, seed)?, bins);
        for (i, &c) in s.histogram.counts.iter().enumerate() {
            let (l, r) = s.histogram.edges(i);
            hist.push(vec![n.into(), l.into(), r.into(), c.into()]);
        }
        let (ml, mr) = s.histogram.edges(s.histogram.modal_bin());
        // E[Q] = n − E|trU|² = n − 1
        let expected = (n as f64 - 1.0) / (n * n) as f64;
        summary.push(vec![
            n.into(),
            samples.into(),
            s.mean.into(),
            s.stderr.into(),
            expected.into(),
            ml.into(),
            mr.into(),
        ]);
    }
    hist.notes.push("statistic = Q/n^2 with Q = n - |tr U|^2".into());
    Ok(vec![hist, summary])
}
