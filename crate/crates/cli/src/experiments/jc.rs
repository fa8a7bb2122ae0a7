//! Average work of the Jaynes–Cummings battery against time.

use rqb_core::models::jc::{jc_average_work, jc_revival_times};
use rqb_core::models::{JcConfig, Ramp};

use super::time_grid;
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::Table;

/// Revivals listed per table, at most.
const MAX_REVIVALS: u32 = 1000;

pub fn model(config: &Config, n: usize) -> CliResult<JcConfig<f64>> {
    let ramp = match config.str("jc.ramp")? {
        "constant" => Ramp::Constant,
        "exponential" => Ramp::Exponential {
            rate: config.f64("jc.rate")?,
        },
        other => return Err(CliError::Config(format!("unknown jc.ramp `{other}`"))),
    };
    let cfg = JcConfig {
        omega: config.f64_or("jc.omega", 1.0)?,
        big_omega: config.f64_or("jc.big_omega", 1.0)?,
        g0: config.f64("jc.g0")?,
        ramp,
        t0: config.f64_or("jc.t0", 0.0)?,
        r_modes: n / 2,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Revival times inside `(t0, t_max]`.
pub fn revivals(cfg: &JcConfig<f64>, t_max: f64) -> Vec<f64> {
    (1..=MAX_REVIVALS)
        .map_while(|k| jc_revival_times(k, cfg).ok().filter(|&t| t <= t_max))
        .collect()
}

pub fn run(config: &Config) -> CliResult<Vec<Table>> {
    let e0 = config.f64("battery.e0")?;
    let per_n = config.f64("battery.tr_h0_per_n")?;
    let t_max = config.f64("time.t_max")?;
    let steps = config.u64("time.steps")?;
    let mut tables = Vec::new();
    for n in config.usize_list("n_list")? {
        let cfg = model(config, n)?;
        let tr_h0 = per_n * n as f64;
        let baseline = e0 - tr_h0 / n as f64;
        let mut t = Table::new(format!("fig-jc_n{n}"), vec!["t", "work", "baseline"]);
        for time in time_grid(cfg.t0, t_max, steps) {
            let w = jc_average_work(time, &cfg, e0, tr_h0)?;
            t.push(vec![time.into(), w.into(), baseline.into()]);
        }
        let rev: Vec<String> = revivals(&cfg, t_max).iter().map(|r| format!("{r:.16e}")).collect();
        t.notes.push(format!("n = {n}"));
        t.notes.push(format!("revivals = [{}]", rev.join(", ")));
        tables.push(t);
    }
    Ok(tables)
}
