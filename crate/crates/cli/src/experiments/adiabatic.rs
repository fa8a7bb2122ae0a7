//! Adiabatic work, variance and bound for a configured spectrum.

use rqb_core::adiabatic::{
    adiabatic_avg_work, adiabatic_var_work, adiabatic_work_bound, adiabatic_work_sample, AdiabaticSpec,
};
use rqb_core::ensembles::haar_unitary;
use rqb_core::mc::estimate;

use super::mix_seed;
use super::verify::{table, Check, DEFAULT_SIGMA};
use crate::config::Config;
use crate::error::CliResult;
use crate::output::Table;

pub fn spec(config: &Config) -> CliResult<AdiabaticSpec<f64>> {
    Ok(AdiabaticSpec::new(
        config.f64_list("adiabatic.populations")?,
        config.f64_list("adiabatic.energies")?,
        config.usize_list("adiabatic.degeneracies")?,
    )?)
}

pub fn run(config: &Config, seed: u64) -> CliResult<Vec<Table>> {
    let spec = spec(config)?;
    let n = spec.dim();
    let samples = config.u64("samples")?;
    let var_samples = config.u64_or("variance_samples", samples)?;
    let mu = adiabatic_avg_work(&spec);
    let var = adiabatic_var_work(&spec)?;
    let sample = |s: &_| adiabatic_work_sample(&spec, &haar_unitary::<f64>(n, s)?);
    let avg_mc = estimate(sample, samples, mix_seed(seed, n as u64, 10))?;
    let var_mc = estimate(
        |s| Ok((sample(s)? - mu).powi(2)),
        var_samples,
        mix_seed(seed, n as u64, 11),
    )?;

    let mc = |name: &str, analytic, r| Check {
        name: name.into(),
        analytic,
        mc: Some(r),
        sigma: DEFAULT_SIGMA,
    };
    let exact_only = |name: &str, analytic| Check {
        name: name.into(),
        analytic,
        mc: None,
        sigma: DEFAULT_SIGMA,
    };
    let mut checks = vec![
        mc("avg_work", mu, avg_mc),
        mc("var_exact", var.exact, var_mc),
        exact_only("var_large_n", var.large_n),
    ];
    // the bound is only stated for E0 >= 0
    if let Ok(b) = adiabatic_work_bound(&spec) {
        checks.push(exact_only("bound", b));
    }
    checks.push(exact_only("c", spec.c()));
    let mut t = table("adiabatic-table", &checks);
    t.notes.push(format!("n = {n}"));
    Ok(vec![t])
}
