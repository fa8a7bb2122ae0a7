//! Seeded experiment runner writing plot-ready CSV tables.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{Config, Diagnostic, Experiment};
pub use error::{CliError, CliResult};
pub use output::{Cell, Table};

/// Command-line overrides of a config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub const DEFAULT_OUTPUT: &str = "results";

/// Applies `overrides` and checks the result; diagnostics become a config error.
pub fn prepare(mut config: Config, overrides: &Overrides) -> CliResult<Config> {
    if let Some(seed) = overrides.seed {
        let seed =
            i64::try_from(seed).map_err(|_| CliError::Config(format!("seed {seed} exceeds the TOML integer range")))?;
        config.set("seed", toml::Value::Integer(seed));
    }
    let diagnostics = config.validate();
    if !diagnostics.is_empty() {
        let lines: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
        return Err(CliError::Config(lines.join("; ")));
    }
    Ok(config)
}

/// Tables of a prepared config, computed on a pool of `jobs` threads.
pub fn compute(config: &Config, jobs: Option<usize>) -> CliResult<Vec<Table>> {
    let seed = config.u64("seed")?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    pool.install(|| experiments::execute(config, seed))
}

/// Output directory: `--out`, then the `output` key, then [`DEFAULT_OUTPUT`].
pub fn output_dir(config: &Config, overrides: &Overrides) -> PathBuf {
    overrides
        .out
        .clone()
        .or_else(|| config.str("output").ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
}

/// Full run: validate, compute, write tables and manifest. Returns the files written.
pub fn run(config: Config, overrides: &Overrides) -> CliResult<Vec<PathBuf>> {
    let config = prepare(config, overrides)?;
    let tables = compute(&config, overrides.jobs)?;
    let seed = config.u64("seed")?;
    output::write_all(&output_dir(&config, overrides), &config, seed, &tables)
}

/// Runs the config at `path`.
pub fn run_path(path: &Path, overrides: &Overrides) -> CliResult<Vec<PathBuf>> {
    run(Config::from_path(path)?, overrides)
}
