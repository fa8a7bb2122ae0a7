//! Distribution of the normalised fourth-moment signatures over CUE draws.

use rayon::prelude::*;
use rqb_core::ensembles::{cue_phases, SeededRng};
use rqb_core::s4::{fluct_statistic_m, FluctSignatures};

use super::{check_dims, check_samples, dim_cap, mix_seed, Histogram, CUE_MAX_N};
use crate::config::Config;
use crate::error::CliResult;
use crate::output::Table;

pub const DEFAULT_BINS: u64 = 50;

pub fn signatures(n: usize, samples: u64, seed: u64) -> CliResult<Vec<FluctSignatures<f64>>> {
    let sub = mix_seed(seed, n as u64, 1);
    let out = (0..samples)
        .into_par_iter()
        .map(|i| Ok(fluct_statistic_m(&cue_phases::<f64>(n, &SeededRng::new(sub, i))?)))
        .collect::<rqb_core::Result<Vec<_>>>()?;
    Ok(out)
}

pub fn run(config: &Config, seed: u64) -> CliResult<Vec<Table>> {
    let n_list = config.usize_list("n_list")?;
    let samples = config.u64("samples")?;
    let bins = config.u64_or("bins", DEFAULT_BINS)? as usize;
    check_dims(&n_list, dim_cap(CUE_MAX_N))?;
    check_samples(samples)?;

    let mut table = Table::new(
        "fig-concentration",
        vec!["n", "signature", "bin_left", "bin_right", "count"],
    );
    for &n in &n_list {
        let sigs = signatures(n, samples, seed)?;
        for (k, label) in FluctSignatures::<f64>::LABELS.iter().enumerate() {
            let values: Vec<f64> = sigs.iter().map(|s| s.as_array()[k]).collect();
            let h = Histogram::new(0.0, 1.0, bins, &values);
            for (i, &c) in h.counts.iter().enumerate() {
                let (l, r) = h.edges(i);
                table.push(vec![n.into(), (*label).into(), l.into(), r.into(), c.into()]);
            }
        }
    }
    table.notes.push("signatures are divided by n^4".into());
    Ok(vec![table])
}
