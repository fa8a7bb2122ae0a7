//! Monte-Carlo Haar averaging.
//!
//! Samples are grouped into fixed-size shards that depend only on the sample
//! count. Shards run on the current rayon pool and are merged left to right,
//! so results are bit-identical for any thread count.

use nalgebra as na;
use rayon::prelude::*;

use crate::ensembles::{haar_unitary_from, SeededRng};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ResourceGuard};
use crate::scalar::Complex;

/// Samples per shard.
pub const SHARD_SIZE: u64 = 512;

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise combination of two disjoint accumulators.
    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }
}

/// Output of [`estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub variance: f64,
    pub stderr_mean: f64,
    pub samples: u64,
    pub seed: u64,
}

impl EstimatorResult {
    fn from_welford(w: &Welford, seed: u64) -> Self {
        let variance = w.variance();
        Self {
            mean: w.mean,
            variance,
            stderr_mean: (variance / w.count as f64).sqrt(),
            samples: w.count,
            seed,
        }
    }

    /// `(mean − target) / stderr`; zero when both the gap and stderr vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let gap = self.mean - target;
        if self.stderr_mean > 0.0 {
            gap / self.stderr_mean
        } else if gap.abs() <= 1e-12 * target.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY * gap.signum()
        }
    }

    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        self.z_score(target).abs() <= k
    }
}

fn shard_ranges(n_samples: u64) -> Vec<(u64, u64)> {
    (0..n_samples.div_ceil(SHARD_SIZE))
        .map(|s| (s * SHARD_SIZE, ((s + 1) * SHARD_SIZE).min(n_samples)))
        .collect()
}

/// Mean, variance and standard error of `sampler` over `n_samples` draws.
///
/// Draw `i` receives `SeededRng::new(seed, i)`.
pub fn estimate<F>(sampler: F, n_samples: u64, seed: u64) -> Result<EstimatorResult>
where
    F: Fn(&SeededRng) -> Result<f64> + Sync + Send,
{
    if n_samples < 2 {
        return Err(Error::TooFewSamples(n_samples as usize));
    }
    let shards: Vec<Welford> = shard_ranges(n_samples)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut w = Welford::default();
            for i in lo..hi {
                w.push(sampler(&SeededRng::new(seed, i))?);
            }
            Ok(w)
        })
        .collect::<Result<_>>()?;
    let total = shards.iter().fold(Welford::default(), |acc, w| acc.merge(w));
    Ok(EstimatorResult::from_welford(&total, seed))
}

/// Same contract as [`estimate`], forced onto a single thread.
pub fn estimate_serial<F>(sampler: F, n_samples: u64, seed: u64) -> Result<EstimatorResult>
where
    F: Fn(&SeededRng) -> Result<f64> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Domain(e.to_string()))?;
    pool.install(|| estimate(sampler, n_samples, seed))
}

#[derive(Debug, Clone)]
struct VecWelford {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl VecWelford {
    fn new(len: usize) -> Self {
        Self {
            count: 0,
            mean: vec![0.0; len],
            m2: vec![0.0; len],
        }
    }

    fn push(&mut self, xs: &[f64]) {
        self.count += 1;
        let c = self.count as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(&mut self.m2).zip(xs) {
            let delta = x - *m;
            *m += delta / c;
            *s += delta * (x - *m);
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other.clone();
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / n;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        self.count = count;
        self
    }
}

/// Entrywise MC estimate of `⟨G^{⊗k} X G^{†⊗k}⟩`.
#[derive(Debug, Clone)]
pub struct TwirlEstimate {
    pub mean: ComplexMatrix<f64>,
    /// Per-entry standard error, `sqrt((Var re + Var im) / N)`.
    pub stderr: na::DMatrix<f64>,
    pub samples: u64,
    pub seed: u64,
}

fn integer_root(dim: usize, k: u32) -> Option<usize> {
    let guess = (dim as f64).powf(1.0 / k as f64).round() as usize;
    (guess.max(1).saturating_sub(1)..=guess + 1).find(|c| c.checked_pow(k) == Some(dim))
}

/// `k_order`-fold twirl of `x` over Haar `G`.
pub fn twirl_estimate(
    k_order: u32,
    x: &ComplexMatrix<f64>,
    n_samples: u64,
    seed: u64,
    guard: &ResourceGuard,
) -> Result<TwirlEstimate> {
    if k_order != 2 && k_order != 4 {
        return Err(Error::Domain(format!("twirl order must be 2 or 4, got {k_order}")));
    }
    if n_samples < 2 {
        return Err(Error::TooFewSamples(n_samples as usize));
    }
    let dim = x.dim();
    guard.check(dim)?;
    let n = integer_root(dim, k_order)
        .ok_or_else(|| Error::Domain(format!("dimension {dim} is not an n^{k_order} power")))?;
    let len = 2 * dim * dim;
    let shards: Vec<VecWelford> = shard_ranges(n_samples)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = VecWelford::new(len);
            let mut buf = vec![0.0; len];
            for i in lo..hi {
                let g = haar_unitary_from::<f64, _>(n, &mut SeededRng::new(seed, i).rng())?;
                let factors = vec![&g; k_order as usize];
                let gk = ComplexMatrix::kron_all(&factors, guard)?;
                let y = gk.mul(x).mul(&gk.dagger());
                for (slot, z) in buf.chunks_exact_mut(2).zip(y.inner().iter()) {
                    slot[0] = z.re;
                    slot[1] = z.im;
                }
                acc.push(&buf);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let total = shards.iter().fold(VecWelford::new(len), |acc, w| acc.merge(w));
    let count = total.count as f64;
    let var = |i: usize| total.m2[i] / (count - 1.0);
    // nalgebra storage is column-major, matching the iteration order above
    let mean = na::DMatrix::from_iterator(
        dim,
        dim,
        (0..dim * dim).map(|e| Complex::new(total.mean[2 * e], total.mean[2 * e + 1])),
    );
    let stderr = na::DMatrix::from_iterator(
        dim,
        dim,
        (0..dim * dim).map(|e| ((var(2 * e) + var(2 * e + 1)) / count).sqrt()),
    );
    Ok(TwirlEstimate {
        mean: ComplexMatrix::from_inner(mean)?,
        stderr,
        samples: total.count,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sampler() {
        let r = estimate(|_| Ok(2.5), 1000, 1).unwrap();
        assert_eq!(r.mean, 2.5);
        assert_eq!(r.variance, 0.0);
        assert_eq!(r.samples, 1000);
        assert!(estimate(|_| Ok(1.0), 1, 1).is_err());
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 - 3.0).collect();
        let mut w = Welford::default();
        xs.iter().for_each(|&x| w.push(x));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((w.mean - mean).abs() < 1e-12);
        assert!((w.variance() - var).abs() < 1e-10);

        let (a, b) = xs.split_at(317);
        let mut wa = Welford::default();
        let mut wb = Welford::default();
        a.iter().for_each(|&x| wa.push(x));
        b.iter().for_each(|&x| wb.push(x));
        let m = wa.merge(&wb);
        assert!((m.mean - mean).abs() < 1e-12);
        assert!((m.variance() - var).abs() < 1e-10);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        use rand::Rng;
        let sampler = |r: &SeededRng| Ok(r.rng().random::<f64>());
        let serial = estimate_serial(sampler, 10_000, 42).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let par = pool.install(|| estimate(sampler, 10_000, 42)).unwrap();
        assert_eq!(serial, par);
        assert!(serial.within_sigma(0.5, 3.0));
    }

    #[test]
    fn identity_twirl_is_exact() {
        let x = ComplexMatrix::identity(9);
        let t = twirl_estimate(2, &x, 16, 3, &ResourceGuard::default()).unwrap();
        assert!(t.mean.sub_ref(&x).frobenius_norm() < 1e-12);
        assert!(twirl_estimate(3, &x, 16, 3, &ResourceGuard::default()).is_err());
        assert!(twirl_estimate(2, &ComplexMatrix::identity(8), 16, 3, &ResourceGuard::default()).is_err());
    }

    #[test]
    fn z_score_edge_cases() {
        let r = EstimatorResult {
            mean: 1.0,
            variance: 0.0,
            stderr_mean: 0.0,
            samples: 10,
            seed: 0,
        };
        assert_eq!(r.z_score(1.0), 0.0);
        assert!(r.z_score(0.0).is_infinite());
    }
}
