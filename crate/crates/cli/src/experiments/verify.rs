//! Analytic closed forms against Monte-Carlo estimates.

use rqb_core::adiabatic::{adiabatic_avg_work, adiabatic_var_work, adiabatic_work_sample, AdiabaticSpec};
use rqb_core::battery::work_direct;
use rqb_core::ensembles::{haar_unitary, random_state_fixed_spectrum, SeededRng};
use rqb_core::haar_analytics::{
    avg_work_over_interaction, q_factor, var_work_over_h0, var_work_over_states, SpectralSummary,
};
use rqb_core::linalg::Conjugation;
use rqb_core::mc::{estimate, EstimatorResult};
use rqb_core::models::perturbation::dyson2_avg_work;
use rqb_core::ComplexMatrix64 as M;

use super::mix_seed;
use crate::config::Config;
use crate::error::CliResult;
use crate::output::{Cell, Table};

pub const DEFAULT_N_LIST: [usize; 4] = [2, 3, 4, 6];
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_VARIANCE_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SIGMA: f64 = 3.0;
/// Spectral scale of the small drive in the Dyson check.
pub const SMALL_DRIVE: f64 = 0.01;

pub const HEADER: [&str; 6] = ["check", "analytic", "mc_mean", "mc_stderr", "z_score", "pass"];

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub analytic: f64,
    pub mc: Option<EstimatorResult>,
    pub sigma: f64,
}

impl Check {
    pub fn z_score(&self) -> Option<f64> {
        self.mc.map(|r| r.z_score(self.analytic))
    }

    /// `None` for analytic-only rows.
    pub fn pass(&self) -> Option<bool> {
        self.z_score().map(|z| z.abs() <= self.sigma)
    }

    pub fn row(&self) -> Vec<Cell> {
        vec![
            self.name.clone().into(),
            self.analytic.into(),
            self.mc.map(|r| r.mean).into(),
            self.mc.map(|r| r.stderr_mean).into(),
            self.z_score().into(),
            self.pass().map_or(Cell::Empty, Cell::Bool),
        ]
    }
}

pub fn table(name: &str, checks: &[Check]) -> Table {
    let mut t = Table::new(name, HEADER.to_vec());
    for c in checks {
        t.push(c.row());
    }
    t
}

/// Descending populations `p_i ∝ n − i`.
pub fn linear_populations(n: usize) -> Vec<f64> {
    let total = (n * (n + 1) / 2) as f64;
    (0..n).map(|i| (n - i) as f64 / total).collect()
}

/// Unequally spaced levels `ε_i = i + 0.3 i²`.
pub fn levels(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 + 0.3 * (i * i) as f64).collect()
}

/// Blocks of sizes `1, 2, 3, …`, the last one truncated to fill `n`.
pub fn staircase(n: usize) -> Vec<usize> {
    let mut d = Vec::new();
    let mut left = n;
    while left > 0 {
        let next = (d.len() + 1).min(left);
        d.push(next);
        left -= next;
    }
    d
}

/// Staircase degeneracies, levels `ε_i`, populations `∝ R − i` with `Σp_id_i = 1`.
pub fn adiabatic_fixture(n: usize) -> CliResult<AdiabaticSpec<f64>> {
    let d = staircase(n);
    let r = d.len();
    let raw: Vec<f64> = (0..r).map(|i| (r - i) as f64).collect();
    let norm: f64 = raw.iter().zip(&d).map(|(p, &d)| p * d as f64).sum();
    let p = raw.iter().map(|x| x / norm).collect();
    Ok(AdiabaticSpec::new(p, levels(r), d)?)
}

/// Generic `(ρ, H₀, K)` and a weak Hermitian drive at dimension `n`.
struct Fixture {
    rho: M,
    h0: M,
    k: M,
    drive: M,
}

impl Fixture {
    fn new(n: usize, seed: u64) -> CliResult<Self> {
        let s = |i: u64| SeededRng::new(mix_seed(seed, n as u64, 100 + i), 0);
        let rho = random_state_fixed_spectrum(&linear_populations(n), &s(0))?;
        let h0 = M::diag_real(&levels(n));
        let k = haar_unitary::<f64>(n, &s(1))?;
        let spread: Vec<f64> = (0..n).map(|i| SMALL_DRIVE * (i + 1) as f64 / n as f64).collect();
        let drive = M::diag_real(&spread).conjugate_rotate(&haar_unitary::<f64>(n, &s(2))?, Conjugation::GxGdag)?;
        Ok(Self { rho, h0, k, drive })
    }
}

fn rotate(x: &M, r: &SeededRng) -> rqb_core::Result<M> {
    let g = haar_unitary::<f64>(x.dim(), r)?;
    x.conjugate_rotate(&g, Conjugation::GxGdag)
}

/// Sample counts and tolerance of a run.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub samples: u64,
    pub variance_samples: u64,
    pub sigma: f64,
}

/// Every check at dimension `n`, in a fixed order.
pub fn checks_for(n: usize, seed: u64, budget: Budget) -> CliResult<Vec<Check>> {
    let f = Fixture::new(n, seed)?;
    let (rho, h0, k) = (&f.rho, &f.h0, &f.k);
    let summary = SpectralSummary::new(rho, h0)?;
    let rho_t = rho.conjugate_rotate(k, Conjugation::GxGdag)?;
    let q = q_factor(&k.eig_unitary()?.phases);
    let k_small = f.drive.exp_minus_i(1.0)?;
    let spec = adiabatic_fixture(n)?;
    let mu_ad = adiabatic_avg_work(&spec);

    let Budget {
        samples,
        variance_samples: vs,
        sigma,
    } = budget;
    let sub = |idx: u64| mix_seed(seed, n as u64, idx);
    let mut out = Vec::new();
    let mut push = |name: &str, analytic: f64, mc: EstimatorResult| {
        out.push(Check {
            name: format!("{name}_n{n}"),
            analytic,
            mc: Some(mc),
            sigma,
        });
    };

    push(
        "avg_work_states",
        0.0,
        estimate(|s| work_direct(&rotate(rho, s)?, h0, k), samples, sub(0))?,
    );
    push(
        "var_work_states",
        var_work_over_states(summary.purity, h0, k)?,
        estimate(|s| Ok(work_direct(&rotate(rho, s)?, h0, k)?.powi(2)), vs, sub(1))?,
    );
    push(
        "avg_work_h0",
        0.0,
        estimate(|s| work_direct(rho, &rotate(h0, s)?, k), samples, sub(2))?,
    );
    push(
        "var_work_h0",
        var_work_over_h0(&summary, rho, &rho_t)?,
        estimate(|s| Ok(work_direct(rho, &rotate(h0, s)?, k)?.powi(2)), vs, sub(3))?,
    );
    push(
        "avg_work_interaction",
        avg_work_over_interaction(summary.e0, summary.tr_h0, n, q)?,
        estimate(|s| work_direct(rho, h0, &rotate(k, s)?), samples, sub(4))?,
    );
    push(
        "dyson2_small_drive",
        dyson2_avg_work(&f.drive, summary.e0, summary.tr_h0, n)?,
        estimate(
            |s| {
                let g = haar_unitary::<f64>(n, s)?;
                let k_g = k_small.conjugate_rotate(&g, Conjugation::GxGdag)?;
                let a_g = f.drive.conjugate_rotate(&g, Conjugation::GxGdag)?;
                // first-order response i tr([A,ρ]H₀) has zero Haar mean; subtracting it
                // leaves second-order noise only
                let linear = -a_g.commutator(rho).trace_product(h0).im;
                Ok(work_direct(rho, h0, &k_g)? - linear)
            },
            samples,
            sub(5),
        )?,
    );
    push(
        "avg_work_adiabatic",
        mu_ad,
        estimate(
            |s| adiabatic_work_sample(&spec, &haar_unitary::<f64>(n, s)?),
            samples,
            sub(6),
        )?,
    );
    push(
        "var_work_adiabatic",
        adiabatic_var_work(&spec)?.exact,
        estimate(
            |s| Ok((adiabatic_work_sample(&spec, &haar_unitary::<f64>(n, s)?)? - mu_ad).powi(2)),
            vs,
            sub(7),
        )?,
    );
    Ok(out)
}

pub fn budget(config: &Config) -> CliResult<Budget> {
    Ok(Budget {
        samples: config.u64_or("samples", DEFAULT_SAMPLES)?,
        variance_samples: config.u64_or("variance_samples", DEFAULT_VARIANCE_SAMPLES)?,
        sigma: config.f64_or("sigma", DEFAULT_SIGMA)?,
    })
}

pub fn run(config: &Config, seed: u64) -> CliResult<Vec<Table>> {
    let n_list = if config.contains("n_list") {
        config.usize_list("n_list")?
    } else {
        DEFAULT_N_LIST.to_vec()
    };
    let budget = budget(config)?;
    let mut checks = Vec::new();
    for n in n_list {
        checks.extend(checks_for(n, seed, budget)?);
    }
    let passed = checks.iter().filter(|c| c.pass() == Some(true)).count();
    let mut t = table("verify-all", &checks);
    t.notes.push(format!("passed = {passed}/{}", checks.len()));
    Ok(vec![t])
}
