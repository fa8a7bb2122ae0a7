//! Adiabatic random batteries on iso-degenerate Hamiltonian families.
//!
//! The projectors `Π^i` are consecutive diagonal blocks of sizes `d_i`, and
//! the state is `ρ = Σ p_i Π^i` with `Σ p_i d_i = 1`.

use crate::error::{Error, Result};
use crate::linalg::{default_tol, ComplexMatrix};
use crate::scalar::Real;

/// Populations, ascending energies and degeneracies of `(ρ, H₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticSpec<T: Real> {
    populations: Vec<T>,
    energies: Vec<T>,
    degeneracies: Vec<usize>,
}

impl<T: Real> AdiabaticSpec<T> {
    pub fn new(populations: Vec<T>, energies: Vec<T>, degeneracies: Vec<usize>) -> Result<Self> {
        let r = populations.len();
        if r == 0 {
            return Err(Error::Domain("adiabatic spec needs at least one level".into()));
        }
        for len in [energies.len(), degeneracies.len()] {
            if len != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: len,
                });
            }
        }
        if degeneracies.contains(&0) {
            return Err(Error::Domain("degeneracies must be positive".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("energies must be finite".into()));
        }
        if energies.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("energies must be strictly ascending".into()));
        }
        if populations.iter().any(|p| !p.is_finite() || *p < T::zero()) {
            return Err(Error::InvalidProbabilities(
                "populations must be finite and non-negative".into(),
            ));
        }
        let norm = populations
            .iter()
            .zip(&degeneracies)
            .fold(T::zero(), |acc, (p, d)| acc + *p * T::from_count(*d));
        let n = degeneracies.iter().sum::<usize>();
        if (norm - T::one()).abs() > default_tol::<T>() * T::from_count(n) {
            return Err(Error::InvalidProbabilities(format!(
                "sum p_i d_i = {} != 1",
                norm.to_f64_lossy()
            )));
        }
        Ok(Self {
            populations,
            energies,
            degeneracies,
        })
    }

    pub fn populations(&self) -> &[T] {
        &self.populations
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn degeneracies(&self) -> &[usize] {
        &self.degeneracies
    }

    /// Number of distinct levels `R`.
    pub fn levels(&self) -> usize {
        self.populations.len()
    }

    /// Hilbert-space dimension `n = Σ d_i`.
    pub fn dim(&self) -> usize {
        self.degeneracies.iter().sum()
    }

    fn d(&self, i: usize) -> T {
        T::from_count(self.degeneracies[i])
    }

    /// `E₀ = tr(ρH₀) = Σ p_i ε_i d_i`.
    pub fn e0(&self) -> T {
        (0..self.levels()).fold(T::zero(), |acc, i| {
            acc + self.populations[i] * self.energies[i] * self.d(i)
        })
    }

    /// `trH₀ = Σ ε_i d_i`.
    pub fn tr_h0(&self) -> T {
        (0..self.levels()).fold(T::zero(), |acc, i| acc + self.energies[i] * self.d(i))
    }

    /// `trH₀² = Σ ε_i² d_i`.
    pub fn tr_h0_sq(&self) -> T {
        (0..self.levels()).fold(T::zero(), |acc, i| acc + self.energies[i].powi(2) * self.d(i))
    }

    /// `trρ² = Σ p_i² d_i`.
    pub fn purity(&self) -> T {
        (0..self.levels()).fold(T::zero(), |acc, i| acc + self.populations[i].powi(2) * self.d(i))
    }

    /// `c = (Σ d_i² − n)/n`.
    pub fn c(&self) -> T {
        let n = self.dim();
        let sq = self.degeneracies.iter().map(|d| d * d).sum::<usize>();
        T::from_count(sq - n) / T::from_count(n)
    }

    /// Half-open index range of block `i`.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.degeneracies[..i].iter().sum::<usize>();
        start..start + self.degeneracies[i]
    }

    /// Diagonal `ρ = Σ p_i Π^i`.
    pub fn rho(&self) -> ComplexMatrix<T> {
        ComplexMatrix::diag_real(&self.expand(&self.populations))
    }

    /// Diagonal `H₀ = Σ ε_i Π^i`.
    pub fn h0(&self) -> ComplexMatrix<T> {
        ComplexMatrix::diag_real(&self.expand(&self.energies))
    }

    fn expand(&self, per_level: &[T]) -> Vec<T> {
        per_level
            .iter()
            .zip(&self.degeneracies)
            .flat_map(|(v, d)| std::iter::repeat_n(*v, *d))
            .collect()
    }
}

/// `⟨W⟩_ad = E₀ − Σ_{ij} p_i ε_j d_i d_j / n`.
pub fn adiabatic_avg_work<T: Real>(spec: &AdiabaticSpec<T>) -> T {
    let n = T::from_count(spec.dim());
    let r = spec.levels();
    let mut mixed = T::zero();
    for i in 0..r {
        for j in 0..r {
            mixed += spec.populations[i] * spec.energies[j] * spec.d(i) * spec.d(j);
        }
    }
    spec.e0() - mixed / n
}

/// `W_U = Σ_{ij} p_i ε_j (d_i δ_ij − tr(Π^i U Π^j U†))`.
pub fn adiabatic_work_sample<T: Real>(spec: &AdiabaticSpec<T>, u: &ComplexMatrix<T>) -> Result<T> {
    let n = spec.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.dim(),
        });
    }
    let r = spec.levels();
    let blocks: Vec<_> = (0..r).map(|i| spec.block(i)).collect();
    let mut w = T::zero();
    for i in 0..r {
        for j in 0..r {
            // tr(Π^i U Π^j U†) = Σ_{a∈i, b∈j} |U_ab|²
            let mut overlap = T::zero();
            for a in blocks[i].clone() {
                for b in blocks[j].clone() {
                    overlap += u.get(a, b).norm_sqr();
                }
            }
            let diag = if i == j { spec.d(i) } else { T::zero() };
            w += spec.populations[i] * spec.energies[j] * (diag - overlap);
        }
    }
    Ok(w)
}

/// Exact and large-`n` Haar variance of [`adiabatic_work_sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticVariance<T> {
    pub exact: T,
    /// `E₀²/n²`
    pub large_n: T,
}

/// Four-index sum
/// `Σ p_i ε_j p_k ε_l [d_id_jd_kd_l/(n²−1) − d_id_kd_lδ_lj/(n(n²−1))
///  − d_jd_kd_lδ_ki/(n(n²−1)) + d_kd_lδ_kiδ_lj/(n²−1) − d_id_jd_kd_l/n²]`.
pub fn adiabatic_var_work<T: Real>(spec: &AdiabaticSpec<T>) -> Result<AdiabaticVariance<T>> {
    let n = spec.dim();
    if n < 2 {
        return Err(Error::Domain("adiabatic variance needs n >= 2".into()));
    }
    let nf = T::from_count(n);
    let m = nf * nf - T::one();
    let r = spec.levels();
    let (p, e) = (&spec.populations, &spec.energies);
    let mut exact = T::zero();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let (di, dj, dk, dl) = (spec.d(i), spec.d(j), spec.d(k), spec.d(l));
                    let all = di * dj * dk * dl;
                    let mut term = all / m - all / (nf * nf);
                    if l == j {
                        term -= di * dk * dl / (nf * m);
                    }
                    if k == i {
                        term -= dj * dk * dl / (nf * m);
                    }
                    if k == i && l == j {
                        term += dk * dl / m;
                    }
                    exact += p[i] * e[j] * p[k] * e[l] * term;
                }
            }
        }
    }
    let e0 = spec.e0();
    Ok(AdiabaticVariance {
        exact,
        large_n: e0 * e0 / (nf * nf),
    })
}

/// Factored form `(n trρ² − 1)(n trH₀² − (trH₀)²) / (n²(n²−1))` of the exact variance.
pub fn adiabatic_var_work_factored<T: Real>(spec: &AdiabaticSpec<T>) -> Result<T> {
    let n = spec.dim();
    if n < 2 {
        return Err(Error::Domain("adiabatic variance needs n >= 2".into()));
    }
    let nf = T::from_count(n);
    let tr = spec.tr_h0();
    let num = (nf * spec.purity() - T::one()) * (nf * spec.tr_h0_sq() - tr * tr);
    Ok(num / (nf * nf * (nf * nf - T::one())))
}

/// `E₀(1 + c) − trH₀/n`, defined for `E₀ ≥ 0`.
pub fn adiabatic_work_bound<T: Real>(spec: &AdiabaticSpec<T>) -> Result<T> {
    let e0 = spec.e0();
    if e0 < T::zero() {
        return Err(Error::Domain("work bound requires E0 >= 0".into()));
    }
    Ok(e0 * (T::one() + spec.c()) - spec.tr_h0() / T::from_count(spec.dim()))
}
