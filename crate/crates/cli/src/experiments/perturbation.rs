//! Second-order work of a harmonically driven battery against time.

use rqb_core::ensembles::{haar_unitary, SeededRng};
use rqb_core::linalg::{ComplexMatrix, Conjugation};
use rqb_core::models::perturbation::{harmonic_battery_work, local_maxima};
use rqb_core::models::HarmonicPerturbation;
use rqb_core::Complex;

use super::{mix_seed, time_grid};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::Table;

/// Drive amplitude `V̂` of the configured kind at dimension `n`.
pub fn drive(kind: &str, n: usize, scale: f64, seed: u64) -> CliResult<ComplexMatrix<f64>> {
    match kind {
        "hermitian" => {
            let levels: Vec<f64> = (0..n).map(|k| scale * (k + 1) as f64 / n as f64).collect();
            let g = haar_unitary::<f64>(n, &SeededRng::new(mix_seed(seed, n as u64, 2), 0))?;
            Ok(ComplexMatrix::diag_real(&levels).conjugate_rotate(&g, Conjugation::GxGdag)?)
        }
        "nilpotent" => Ok(ComplexMatrix::from_fn(n, |i, j| {
            let v = if j == i + 1 { scale } else { 0.0 };
            Complex::new(v, 0.0)
        })),
        other => Err(CliError::Config(format!("unknown perturbation.kind `{other}`"))),
    }
}

pub fn run(config: &Config, seed: u64) -> CliResult<Vec<Table>> {
    let e0 = config.f64("battery.e0")?;
    let per_n = config.f64("battery.tr_h0_per_n")?;
    let kind = config.str("perturbation.kind")?;
    let omega = config.f64("perturbation.omega")?;
    let t0 = config.f64_or("perturbation.t0", 0.0)?;
    let scale = config.f64_or("perturbation.scale", 1.0)?;
    let t_max = config.f64("time.t_max")?;
    let steps = config.u64("time.steps")?;
    let mut tables = Vec::new();
    for n in config.usize_list("n_list")? {
        let pert = HarmonicPerturbation::new(drive(kind, n, scale, seed)?, omega, t0)?;
        let tr_h0 = per_n * n as f64;
        let baseline = e0 - tr_h0 / n as f64;
        let times = time_grid(t0, t_max, steps);
        let work = times
            .iter()
            .map(|&t| harmonic_battery_work(&pert, t, e0, tr_h0))
            .collect::<rqb_core::Result<Vec<f64>>>()?;
        let mut t = Table::new(format!("fig-perturbation_n{n}"), vec!["t", "work", "baseline"]);
        for (&time, &w) in times.iter().zip(&work) {
            t.push(vec![time.into(), w.into(), baseline.into()]);
        }
        // maxima of |work| so a negative excess energy still marks the peaks
        let magnitude: Vec<f64> = work.iter().map(|w| w.abs()).collect();
        let maxima: Vec<String> = local_maxima(&magnitude)
            .into_iter()
            .map(|i| format!("{:.16e}", times[i]))
            .collect();
        t.notes.push(format!("n = {n}"));
        t.notes.push(format!("maxima = [{}]", maxima.join(", ")));
        tables.push(t);
    }
    Ok(tables)
}
