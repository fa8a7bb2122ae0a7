//! Permutation operators on `(C^n)^{⊗4}`, the `S₄` isotypic projectors and
//! the fourth-moment quantities built on them.

use crate::battery::real_part;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ResourceGuard};
use crate::scalar::{Complex, Real};
use crate::spectrum::PhaseSpectrum;

/// A permutation of the four tensor slots: slot `p` moves to `self.0[p]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perm4(pub [usize; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(map: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &m in &map {
            if m >= 4 || seen[m] {
                return Err(Error::Domain(format!("{map:?} is not a permutation of 0..4")));
            }
            seen[m] = true;
        }
        Ok(Self(map))
    }

    /// Builds from disjoint cycles written with 1-based slots, e.g. `&[&[1, 2], &[3, 4]]`.
    pub fn from_cycles(cycles: &[&[usize]]) -> Result<Self> {
        let mut map = [0, 1, 2, 3];
        for c in cycles {
            for (i, &from) in c.iter().enumerate() {
                let to = c[(i + 1) % c.len()];
                if !(1..=4).contains(&from) || !(1..=4).contains(&to) {
                    return Err(Error::Domain("cycle entries must be in 1..=4".into()));
                }
                map[from - 1] = to - 1;
            }
        }
        Self::new(map)
    }

    pub fn apply(&self, p: usize) -> usize {
        self.0[p]
    }

    /// `(self ∘ other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self([0, 1, 2, 3].map(|p| self.0[other.0[p]]))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0; 4];
        for p in 0..4 {
            inv[self.0[p]] = p;
        }
        Self(inv)
    }

    /// Disjoint cycles (fixed points included), each starting at its smallest slot.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4 {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.0[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.0[p];
            }
            out.push(cycle);
        }
        out
    }

    pub fn class(&self) -> ConjugacyClass {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        match lens.as_slice() {
            [1, 1, 1, 1] => ConjugacyClass::Identity,
            [1, 1, 2] => ConjugacyClass::Transposition,
            [2, 2] => ConjugacyClass::DoubleTransposition,
            [1, 3] => ConjugacyClass::ThreeCycle,
            _ => ConjugacyClass::FourCycle,
        }
    }

    /// All 24 permutations in lexicographic order of their maps.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        if let Ok(p) = Self::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Conjugacy classes of `S₄`, in character-table column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConjugacyClass {
    Identity,
    Transposition,
    DoubleTransposition,
    ThreeCycle,
    FourCycle,
}

impl ConjugacyClass {
    pub const ALL: [ConjugacyClass; 5] = [
        Self::Identity,
        Self::Transposition,
        Self::DoubleTransposition,
        Self::ThreeCycle,
        Self::FourCycle,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn size(self) -> usize {
        [1, 6, 3, 8, 6][self.index()]
    }

    pub fn label(self) -> &'static str {
        ["e", "(12)", "(12)(34)", "(123)", "(1234)"][self.index()]
    }
}

/// Irreducible representations of `S₄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Irrep {
    Trivial,
    Sign,
    Standard,
    StandardSign,
    TwoDim,
}

impl Irrep {
    pub const ALL: [Irrep; 5] = [
        Self::Trivial,
        Self::Sign,
        Self::Standard,
        Self::StandardSign,
        Self::TwoDim,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["trivial", "sign", "standard", "standard_sign", "two_dim"][self.index()]
    }

    /// Character row over [`ConjugacyClass::ALL`].
    pub fn characters(self) -> [i32; 5] {
        CHARACTER_TABLE[self.index()]
    }

    pub fn character(self, sigma: &Perm4) -> i32 {
        self.characters()[sigma.class().index()]
    }

    pub fn dimension(self) -> i32 {
        self.characters()[0]
    }
}

const CHARACTER_TABLE: [[i32; 5]; 5] = [
    [1, 1, 1, 1, 1],
    [1, -1, 1, 1, -1],
    [3, 1, -1, 0, -1],
    [3, -1, -1, 0, 1],
    [2, 0, 2, -1, 0],
];

/// Class members, sizes and characters of `S₄`.
#[derive(Debug, Clone)]
pub struct S4Structure {
    pub classes: Vec<(ConjugacyClass, Vec<Perm4>)>,
    pub characters: [[i32; 5]; 5],
}

impl S4Structure {
    pub fn new() -> Self {
        let all = Perm4::all();
        let classes = ConjugacyClass::ALL
            .iter()
            .map(|&c| (c, all.iter().copied().filter(|p| p.class() == c).collect()))
            .collect();
        Self {
            classes,
            characters: CHARACTER_TABLE,
        }
    }
}

impl Default for S4Structure {
    fn default() -> Self {
        Self::new()
    }
}

fn digits(index: usize, n: usize) -> [usize; 4] {
    [index / (n * n * n), (index / (n * n)) % n, (index / n) % n, index % n]
}

fn undigits(d: [usize; 4], n: usize) -> usize {
    ((d[0] * n + d[1]) * n + d[2]) * n + d[3]
}

/// Image of basis index `i` under `S(σ)`.
fn permute_index(sigma: &Perm4, i: usize, n: usize) -> usize {
    let d = digits(i, n);
    let mut out = [0; 4];
    for p in 0..4 {
        out[sigma.apply(p)] = d[p];
    }
    undigits(out, n)
}

/// `S(σ)|i₁i₂i₃i₄⟩`, with the content of slot `p` moved to slot `σ(p)`.
pub fn perm_operator<T: Real>(sigma: &Perm4, n: usize, guard: &ResourceGuard) -> Result<ComplexMatrix<T>> {
    let dim = guard.check_power(n, 4)?;
    let mut m = ComplexMatrix::zeros(dim);
    let one = Complex::new(T::one(), T::zero());
    for i in 0..dim {
        m.set(permute_index(sigma, i, n), i, one);
    }
    Ok(m)
}

/// `tr(S(σ)(A₁ ⊗ A₂ ⊗ A₃ ⊗ A₄))` as a product of traces over the cycles of `σ`.
pub fn perm_trace<T: Real>(sigma: &Perm4, factors: [&ComplexMatrix<T>; 4]) -> Result<Complex<T>> {
    for f in &factors[1..] {
        factors[0].require_same_dim(f)?;
    }
    let mut total = Complex::new(T::one(), T::zero());
    for cycle in sigma.cycles() {
        // A_{σ^{L−1}q} ⋯ A_{σq} A_q
        let mut prod = factors[cycle[0]].clone();
        for &p in &cycle[1..] {
            prod = factors[p].mul(&prod);
        }
        total *= prod.trace();
    }
    Ok(total)
}

/// The five isotypic projectors on `(C^n)^{⊗4}`.
#[derive(Debug, Clone)]
pub struct ProjectorSet<T: Real> {
    pub n: usize,
    projectors: Vec<ComplexMatrix<T>>,
}

impl<T: Real> ProjectorSet<T> {
    pub fn get(&self, r: Irrep) -> &ComplexMatrix<T> {
        &self.projectors[r.index()]
    }

    pub fn trace(&self, r: Irrep) -> T {
        self.get(r).trace().re
    }

    pub fn iter(&self) -> impl Iterator<Item = (Irrep, &ComplexMatrix<T>)> {
        Irrep::ALL.iter().copied().zip(&self.projectors)
    }
}

/// `Π^(r) = χ^(r)(e)/24 Σ_σ χ^(r)(σ) S(σ)`.
pub fn irrep_projectors<T: Real>(n: usize, guard: &ResourceGuard) -> Result<ProjectorSet<T>> {
    let dim = guard.check_power(n, 4)?;
    let perms = Perm4::all();
    let projectors = Irrep::ALL
        .iter()
        .map(|&r| {
            let mut m = ComplexMatrix::zeros(dim);
            let w = T::from_count(r.dimension() as usize) / T::lit(24.0);
            for sigma in &perms {
                let chi = r.character(sigma);
                if chi == 0 {
                    continue;
                }
                let c = Complex::new(w * T::lit(chi as f64), T::zero());
                for i in 0..dim {
                    let j = permute_index(sigma, i, n);
                    let v = m.get(j, i) + c;
                    m.set(j, i, v);
                }
            }
            m
        })
        .collect();
    Ok(ProjectorSet { n, projectors })
}

/// `tr(Π^(r) (A₁ ⊗ A₂ ⊗ A₃ ⊗ A₄))` without forming `n⁴` matrices.
pub fn projector_trace<T: Real>(r: Irrep, factors: [&ComplexMatrix<T>; 4]) -> Result<Complex<T>> {
    projector_trace_twisted(r, &Perm4::IDENTITY, factors)
}

/// `tr(Π^(r) S(τ) (A₁ ⊗ A₂ ⊗ A₃ ⊗ A₄))`.
fn projector_trace_twisted<T: Real>(r: Irrep, tau: &Perm4, factors: [&ComplexMatrix<T>; 4]) -> Result<Complex<T>> {
    let w = T::from_count(r.dimension() as usize) / T::lit(24.0);
    let mut acc = Complex::new(T::zero(), T::zero());
    for sigma in Perm4::all() {
        let chi = r.character(&sigma);
        if chi != 0 {
            acc += perm_trace(&sigma.compose(tau), factors)? * T::lit(chi as f64);
        }
    }
    Ok(acc * w)
}

/// Isotypic dimension `tr Π^(r)` on `(C^n)^{⊗4}`.
pub fn projector_dimension(r: Irrep, n: usize) -> u64 {
    let n = n as u64;
    // tr Π = χ(e)/24 Σ_σ χ(σ) n^{#cycles(σ)}
    let powers = [n.pow(4), n.pow(3), n.pow(2), n.pow(2), n];
    let chi = r.characters();
    let total: i64 = ConjugacyClass::ALL
        .iter()
        .map(|c| c.size() as i64 * chi[c.index()] as i64 * powers[c.index()] as i64)
        .sum();
    (r.dimension() as i64 * total / 24) as u64
}

/// `λ_r = tr(Π^(r) K⊗K⊗K†⊗K†)/tr Π^(r)`, zero on vanishing components.
pub fn fourth_moment_coefficients<T: Real>(k: &ComplexMatrix<T>) -> Result<[T; 5]> {
    let kd = k.dagger();
    let n = k.dim();
    let mut out = [T::zero(); 5];
    for r in Irrep::ALL {
        let dim = projector_dimension(r, n);
        if dim == 0 {
            continue;
        }
        let tr = projector_trace(r, [k, k, &kd, &kd])?;
        out[r.index()] = real_part(tr, T::from_count(n).powi(4))? / T::lit(dim as f64);
    }
    Ok(out)
}

fn c2_with_twist<T: Real>(
    rho: &ComplexMatrix<T>,
    h0: &ComplexMatrix<T>,
    k: &ComplexMatrix<T>,
    twist: &Perm4,
    guard: &ResourceGuard,
) -> Result<T> {
    rho.require_same_dim(h0)?;
    rho.require_same_dim(k)?;
    guard.check_power(rho.dim(), 4)?;
    let lambda = fourth_moment_coefficients(k)?;
    let scale = h0.frobenius_norm().powi(2).max(T::one());
    let mut total = T::zero();
    for r in Irrep::ALL {
        if lambda[r.index()] == T::zero() {
            continue;
        }
        let tr = projector_trace_twisted(r, twist, [rho, h0, rho, h0])?;
        total += lambda[r.index()] * real_part(tr, scale)?;
    }
    Ok(total)
}

/// `Σ_r λ_r tr(Π^(r) (ρ ⊗ H₀)^{⊗2})`, taken literally.
///
/// At `K = I` this reduces to `(trH₀)²` rather than `E₀²`; see [`c2_central`].
pub fn c2_paper<T: Real>(
    rho: &ComplexMatrix<T>,
    h0: &ComplexMatrix<T>,
    k: &ComplexMatrix<T>,
    guard: &ResourceGuard,
) -> Result<T> {
    c2_with_twist(rho, h0, k, &Perm4::IDENTITY, guard)
}

/// `Σ_r λ_r tr(Π^(r) S((12)(34)) (ρ ⊗ H₀)^{⊗2})`; reduces to `E₀²` at `K = I`.
pub fn c2_central<T: Real>(
    rho: &ComplexMatrix<T>,
    h0: &ComplexMatrix<T>,
    k: &ComplexMatrix<T>,
    guard: &ResourceGuard,
) -> Result<T> {
    let swap = Perm4::from_cycles(&[&[1, 2], &[3, 4]])?;
    c2_with_twist(rho, h0, k, &swap, guard)
}

/// Phase-sum signatures of the fourth moment, each divided by `n⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctSignatures<T> {
    /// `|Σe^{iθ}|⁴ / n⁴`
    pub s1_quartic: T,
    /// `|Σe^{2iθ}| |Σe^{iθ}|² / n⁴`
    pub s2_s1_sq: T,
    /// `|Σe^{2iθ}|² / n⁴`
    pub s2_sq: T,
    pub n: usize,
}

impl<T: Real> FluctSignatures<T> {
    /// Largest signature, `M(n)/n⁴`.
    pub fn max_normalized(&self) -> T {
        self.s1_quartic.max(self.s2_s1_sq).max(self.s2_sq)
    }

    /// `M(n) = max(|S₁|⁴, |S₂||S₁|², |S₂|²)`.
    pub fn m_raw(&self) -> T {
        self.max_normalized() * T::from_count(self.n).powi(4)
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.s1_quartic, self.s2_s1_sq, self.s2_sq]
    }

    pub const LABELS: [&'static str; 3] = ["s1_quartic", "s2_s1_sq", "s2_sq"];
}

/// Signatures from `S_m = Σ_k e^{imθ_k}`; `s1_quartic` is the closed form of
/// `|Σ_{mnop} e^{i(θ_m+θ_p−θ_n−θ_o)}|`.
pub fn fluct_statistic_m<T: Real>(phases: &PhaseSpectrum<T>) -> FluctSignatures<T> {
    let n = phases.len();
    let n4 = T::from_count(n).powi(4);
    let s1 = phases.power_sum(1).norm_sqr();
    let s2 = phases.power_sum(2).norm_sqr().sqrt();
    FluctSignatures {
        s1_quartic: s1 * s1 / n4,
        s2_s1_sq: s2 * s1 / n4,
        s2_sq: s2 * s2 / n4,
        n,
    }
}

/// Number of phase-sum terms, counted with multiplicity, in the four
/// non-vanishing irrep contributions to the fourth moment:
/// trivial 24, standard 8, standard ⊗ sign 1, two-dimensional 12.
pub const FLUCT_TERM_COUNT: f64 = 45.0;

/// `C′ M(n) n⁻²` with `C′ = 45 (trH₀)²/n²`.
pub fn fluct_bound<T: Real>(rho: &ComplexMatrix<T>, h0: &ComplexMatrix<T>, phases: &PhaseSpectrum<T>) -> Result<T> {
    let n = phases.len();
    if n < 2 {
        return Err(Error::Domain(format!("bound needs n >= 2, got n = {n}")));
    }
    rho.require_same_dim(h0)?;
    if h0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: h0.dim(),
            found: n,
        });
    }
    let nf = T::from_count(n);
    let tr = h0.trace().re;
    let c_prime = T::lit(FLUCT_TERM_COUNT) * tr * tr / (nf * nf);
    Ok(c_prime * fluct_statistic_m(phases).m_raw() / (nf * nf))
}
