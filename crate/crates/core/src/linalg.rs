//! Dense square complex matrices and the few decompositions the rest of the
//! crate needs.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra as na;

use crate::error::{Error, Result};
use crate::scalar::{cis, wrap_phase, Complex, Real};
use crate::spectrum::PhaseSpectrum;

/// Largest matrix dimension accepted by operations that build tensor powers.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "RQB_MAX_DIM";

/// Default tolerance for the structural predicates: `1e-9` in `f64`, widened
/// for lower-precision scalars.
pub fn default_tol<T: Real>() -> T {
    let floor = T::lit(1e-9);
    let eps_based = T::EPS * T::lit(1e3);
    if eps_based > floor {
        eps_based
    } else {
        floor
    }
}

/// Cap on dense dimensions (e.g. `n⁴` for the fourth tensor power).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceGuard {
    pub max_dim: usize,
}

impl Default for ResourceGuard {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl ResourceGuard {
    pub fn new(max_dim: usize) -> Self {
        Self { max_dim }
    }

    /// Reads `RQB_MAX_DIM`, falling back to the default when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            Err(Error::ResourceGuard { dim, max: self.max_dim })
        } else {
            Ok(())
        }
    }

    /// Checks `n^power` without overflowing.
    pub fn check_power(&self, n: usize, power: u32) -> Result<usize> {
        let dim = n.checked_pow(power).ok_or(Error::ResourceGuard {
            dim: usize::MAX,
            max: self.max_dim,
        })?;
        self.check(dim)?;
        Ok(dim)
    }
}

/// Which side the rotation acts on in [`ComplexMatrix::conjugate_rotate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjugation {
    /// `G X G†` (states: `ρ_G = GρG†`)
    GxGdag,
    /// `G† X G` (Hamiltonians: `H_G = G†H₀G`)
    GdagxG,
}

/// Dense `n × n` complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    inner: na::DMatrix<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.inner)
    }
}

/// Eigenphases with the matching eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct UnitaryEigen<T: Real> {
    pub phases: PhaseSpectrum<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> UnitaryEigen<T> {
    /// `Σ e^{iθ_k} |k⟩⟨k|`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let diag: Vec<Complex<T>> = self.phases.eigenvalues().collect();
        self.vectors.scale_columns(&diag).mul(&self.vectors.dagger())
    }
}

/// Ascending real eigenvalues with orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V f(Λ) V†` for a complex-valued spectral function.
    pub fn apply<F: Fn(T) -> Complex<T>>(&self, f: F) -> ComplexMatrix<T> {
        let diag: Vec<Complex<T>> = self.values.iter().map(|&v| f(v)).collect();
        self.vectors.scale_columns(&diag).mul(&self.vectors.dagger())
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn from_inner(inner: na::DMatrix<Complex<T>>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::DimensionMismatch {
                expected: inner.nrows(),
                found: inner.ncols(),
            });
        }
        if inner.nrows() == 0 {
            return Err(Error::Domain("matrix dimension must be at least 1".into()));
        }
        Ok(Self { inner })
    }

    fn wrap(inner: na::DMatrix<Complex<T>>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn inner(&self) -> &na::DMatrix<Complex<T>> {
        &self.inner
    }

    pub fn into_inner(self) -> na::DMatrix<Complex<T>> {
        self.inner
    }

    pub fn zeros(n: usize) -> Self {
        Self::wrap(na::DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(na::DMatrix::identity(n, n))
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex<T>>(n: usize, f: F) -> Self {
        Self::wrap(na::DMatrix::from_fn(n, n, f))
    }

    /// Builds from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_slice(entries: &[Complex<T>]) -> Result<Self> {
        let n = (entries.len() as f64).sqrt().round() as usize;
        if n * n != entries.len() || n == 0 {
            return Err(Error::Domain(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Ok(Self::wrap(na::DMatrix::from_row_slice(n, n, entries)))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().map(|&x| Complex::new(T::lit(x), T::zero())));
        }
        Self::from_row_slice(&entries)
    }

    pub fn diag_real(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex::new(values[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn diag(values: &[Complex<T>]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                values[i]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &[Complex<T>]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    /// `|k⟩⟨k|` in the computational basis.
    pub fn basis_projector(n: usize, k: usize) -> Self {
        let mut m = Self::zeros(n);
        m.inner[(k, k)] = Complex::new(T::one(), T::zero());
        m
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.inner[(i, j)] = v;
    }

    pub fn dagger(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn trace(&self) -> Complex<T> {
        self.inner.trace()
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::wrap(self.inner.map(|z| z * s))
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Multiplies column `k` by `d[k]`, i.e. `self · diag(d)`.
    pub fn scale_columns(&self, d: &[Complex<T>]) -> Self {
        let mut out = self.inner.clone();
        for (k, mut col) in out.column_iter_mut().enumerate() {
            col *= d[k];
        }
        Self::wrap(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner * &rhs.inner)
    }

    /// `tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex<T> {
        let n = self.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                acc += self.inner[(i, k)] * rhs.inner[(k, i)];
            }
        }
        acc
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub_ref(&rhs.mul(self))
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner + &rhs.inner)
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        Self::wrap(&self.inner - &rhs.inner)
    }

    pub fn real_diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).collect()
    }

    /// Removes the off-diagonal part (dephasing in the computational basis).
    pub fn dephased(&self) -> Self {
        Self::diag(&(0..self.dim()).map(|i| self.inner[(i, i)]).collect::<Vec<_>>())
    }

    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        self.kron_guarded(rhs, &ResourceGuard::default())
    }

    /// Kronecker product; entry `(i·m + k, j·m + l)` is `a[i,j]·b[k,l]`.
    pub fn kron_guarded(&self, rhs: &Self, guard: &ResourceGuard) -> Result<Self> {
        let dim = self.dim().checked_mul(rhs.dim()).ok_or(Error::ResourceGuard {
            dim: usize::MAX,
            max: guard.max_dim,
        })?;
        guard.check(dim)?;
        Ok(Self::wrap(self.inner.kronecker(&rhs.inner)))
    }

    /// `A₁ ⊗ A₂ ⊗ …` left to right.
    pub fn kron_all(factors: &[&Self], guard: &ResourceGuard) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Domain("empty Kronecker product".into()))?;
        rest.iter()
            .try_fold((*first).clone(), |acc, f| acc.kron_guarded(f, guard))
    }

    pub fn hermitian_residual(&self) -> T {
        self.sub_ref(&self.dagger()).frobenius_norm()
    }

    pub fn unitary_residual(&self) -> T {
        let n = self.dim();
        self.mul(&self.dagger()).sub_ref(&Self::identity(n)).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_residual() <= tol * self.frobenius_norm().max(T::one())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitary_residual() <= tol * T::from_count(self.dim()).sqrt()
    }

    /// Hermitian, positive semidefinite and unit trace, all within `tol`.
    pub fn is_density(&self, tol: T) -> bool {
        self.density_violation(tol).is_none()
    }

    pub(crate) fn density_violation(&self, tol: T) -> Option<String> {
        if !self.is_hermitian(tol) {
            return Some("not Hermitian".into());
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Some(format!("trace {} ≠ 1", tr.re.to_f64_lossy()));
        }
        match self.eig_hermitian_unchecked() {
            Ok(eig) => {
                let min = eig.values.first().copied().unwrap_or(T::zero());
                if min < -tol {
                    Some(format!("negative eigenvalue {}", min.to_f64_lossy()))
                } else {
                    None
                }
            }
            Err(_) => Some("eigendecomposition failed".into()),
        }
    }

    pub fn require_unitary(&self, tol: T) -> Result<()> {
        if self.is_unitary(tol) {
            Ok(())
        } else {
            Err(Error::NotUnitary {
                residual: self.unitary_residual().to_f64_lossy(),
            })
        }
    }

    pub fn require_hermitian(&self, tol: T) -> Result<()> {
        if self.is_hermitian(tol) {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                residual: self.hermitian_residual().to_f64_lossy(),
            })
        }
    }

    pub fn require_density(&self, tol: T) -> Result<()> {
        match self.density_violation(tol) {
            None => Ok(()),
            Some(why) => Err(Error::NotDensity(why)),
        }
    }

    pub fn require_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    /// Eigenphases in `(-π, π]`, ascending, with eigenvectors.
    pub fn eig_unitary(&self) -> Result<UnitaryEigen<T>> {
        self.eig_unitary_with_tol(default_tol())
    }

    pub fn eig_unitary_with_tol(&self, tol: T) -> Result<UnitaryEigen<T>> {
        self.require_unitary(tol)?;
        let n = self.dim();
        // A unitary is normal, so its Schur form is diagonal up to round-off.
        let schur = na::Schur::try_new(self.inner.clone(), T::EPS, 0).ok_or(Error::NoConvergence)?;
        let (q, t) = schur.unpack();
        let mut order: Vec<(T, usize)> = (0..n)
            .map(|k| {
                let z = t[(k, k)];
                (wrap_phase(z.im.atan2(z.re)), k)
            })
            .collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite phases"));
        let phases: Vec<T> = order.iter().map(|&(p, _)| p).collect();
        let vectors = Self::from_fn(n, |i, j| q[(i, order[j].1)]);
        Ok(UnitaryEigen {
            phases: PhaseSpectrum::new(phases)?,
            vectors: vectors.phase_fixed_columns(),
        })
    }

    /// Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
    pub fn eig_hermitian(&self) -> Result<HermitianEigen<T>> {
        self.require_hermitian(default_tol())?;
        self.eig_hermitian_unchecked()
    }

    fn eig_hermitian_unchecked(&self) -> Result<HermitianEigen<T>> {
        let n = self.dim();
        // symmetrize so round-off asymmetry does not leak into the solver
        let h = (&self.inner + self.inner.adjoint()) * Complex::new(T::lit(0.5), T::zero());
        let eig = na::SymmetricEigen::try_new(h, T::EPS, 0).ok_or(Error::NoConvergence)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("finite eigenvalues")
        });
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(HermitianEigen {
            values,
            vectors: vectors.phase_fixed_columns(),
        })
    }

    /// Eigenvalues of an arbitrary square matrix, from its complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        let schur = na::Schur::try_new(self.inner.clone(), T::EPS, 0).ok_or(Error::NoConvergence)?;
        let (_, t) = schur.unpack();
        Ok((0..self.dim()).map(|k| t[(k, k)]).collect())
    }

    /// Rotates each column so its largest-modulus entry is real and positive.
    fn phase_fixed_columns(&self) -> Self {
        let mut out = self.inner.clone();
        for mut col in out.column_iter_mut() {
            let pivot = col.iter().copied().fold(Complex::new(T::zero(), T::zero()), |best, z| {
                if z.norm_sqr() > best.norm_sqr() + T::EPS {
                    z
                } else {
                    best
                }
            });
            let r = pivot.norm_sqr().sqrt();
            if r > T::zero() {
                col *= pivot.conj() / Complex::new(r, T::zero());
            }
        }
        Self::wrap(out)
    }

    /// `G X G†` or `G† X G`.
    pub fn conjugate_rotate(&self, g: &Self, side: Conjugation) -> Result<Self> {
        self.require_same_dim(g)?;
        g.require_unitary(default_tol())?;
        Ok(match side {
            Conjugation::GxGdag => g.mul(self).mul(&g.dagger()),
            Conjugation::GdagxG => g.dagger().mul(self).mul(g),
        })
    }

    /// `e^{-i s H}` for Hermitian `H`.
    pub fn exp_minus_i(&self, s: T) -> Result<Self> {
        let eig = self.eig_hermitian()?;
        Ok(eig.apply(|lambda| cis(-lambda * s)))
    }

    /// Casts every entry to `f64`.
    pub fn to_f64(&self) -> ComplexMatrix<f64> {
        ComplexMatrix::wrap(
            self.inner
                .map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())),
        )
    }
}

impl<'a, T: Real> Mul<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix::mul(self, rhs)
    }
}

impl<'a, T: Real> Add<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.add_ref(rhs)
    }
}

impl<'a, T: Real> Sub<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.sub_ref(rhs)
    }
}

/// Pauli matrices.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::{Complex, Real};

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let z = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        ComplexMatrix::from_row_slice(&[z, -i, i, z]).expect("2x2")
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("2x2")
    }
}
