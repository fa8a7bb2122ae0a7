//! Battery data model and direct work evaluation.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::linalg::{default_tol, ComplexMatrix, Conjugation};
use crate::scalar::{Complex, Real};

/// `(ρ, H₀, K)` sharing one dimension. `K` is the interaction-picture evolution.
#[derive(Debug, Clone)]
pub struct BatteryInstance<T: Real> {
    rho: ComplexMatrix<T>,
    h0: ComplexMatrix<T>,
    k: ComplexMatrix<T>,
}

impl<T: Real> BatteryInstance<T> {
    pub fn new(rho: ComplexMatrix<T>, h0: ComplexMatrix<T>, k: ComplexMatrix<T>) -> Result<Self> {
        rho.require_same_dim(&h0)?;
        rho.require_same_dim(&k)?;
        let tol = default_tol();
        rho.require_density(tol)?;
        h0.require_hermitian(tol)?;
        k.require_unitary(tol)?;
        Ok(Self { rho, h0, k })
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &ComplexMatrix<T> {
        &self.rho
    }

    pub fn h0(&self) -> &ComplexMatrix<T> {
        &self.h0
    }

    pub fn k(&self) -> &ComplexMatrix<T> {
        &self.k
    }

    /// `E₀ = tr(ρH₀)`.
    pub fn e0(&self) -> T {
        self.rho.trace_product(&self.h0).re
    }

    pub fn work(&self) -> Result<T> {
        work_direct(&self.rho, &self.h0, &self.k)
    }
}

/// Returns the real part after checking the imaginary residue against `scale`.
pub(crate) fn real_part<T: Real>(z: Complex<T>, scale: T) -> Result<T> {
    let tol = default_tol::<T>() * T::lit(10.0) * scale.max(T::one());
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue {
            residue: z.im.to_f64_lossy(),
        });
    }
    Ok(z.re)
}

fn energy_scale<T: Real>(h0: &ComplexMatrix<T>) -> T {
    h0.frobenius_norm()
}

/// `W = tr[(ρ − UρU†)H₀]`.
pub fn work_direct<T: Real>(rho: &ComplexMatrix<T>, h0: &ComplexMatrix<T>, u: &ComplexMatrix<T>) -> Result<T> {
    let rho_t = rho.conjugate_rotate(u, Conjugation::GxGdag)?;
    h0.require_same_dim(rho)?;
    real_part(rho.sub_ref(&rho_t).trace_product(h0), energy_scale(h0))
}

/// `(tr{U†H₀[ρ,U]}, tr{ρ[U,U†H₀]}, tr{U[U†H₀,ρ]})`.
pub fn work_commutator_forms<T: Real>(
    rho: &ComplexMatrix<T>,
    h0: &ComplexMatrix<T>,
    u: &ComplexMatrix<T>,
) -> Result<(T, T, T)> {
    rho.require_same_dim(h0)?;
    rho.require_same_dim(u)?;
    let ud = u.dagger();
    let ud_h0 = ud.mul(h0);
    let scale = energy_scale(h0);
    let first = ud_h0.trace_product(&rho.commutator(u));
    let second = rho.trace_product(&u.commutator(&ud_h0));
    let third = u.trace_product(&ud_h0.commutator(rho));
    Ok((
        real_part(first, scale)?,
        real_part(second, scale)?,
        real_part(third, scale)?,
    ))
}

/// `L = tr(ρσ) / max(trρ², trσ²)`.
pub fn loschmidt_echo<T: Real>(rho: &ComplexMatrix<T>, rho_t: &ComplexMatrix<T>) -> Result<T> {
    rho.require_same_dim(rho_t)?;
    let overlap = real_part(rho.trace_product(rho_t), T::one())?;
    let p0 = rho.trace_product(rho).re;
    let p1 = rho_t.trace_product(rho_t).re;
    Ok(overlap / p0.max(p1))
}

/// Work sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkTrace {
    times: Vec<f64>,
    work: Vec<f64>,
    meta: String,
}

impl WorkTrace {
    pub fn new(times: Vec<f64>, work: Vec<f64>, meta: impl Into<String>) -> Result<Self> {
        if times.len() != work.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: work.len(),
            });
        }
        if times
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Domain("times must be strictly increasing".into()));
        }
        Ok(Self {
            times,
            work,
            meta: meta.into(),
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn work(&self) -> &[f64] {
        &self.work
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    /// `t,work` rows with 17 significant digits, preceded by `# meta` lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for line in self.meta.lines() {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "t,work")?;
        for (t, w) in self.times.iter().zip(&self.work) {
            writeln!(out, "{t:.16e},{w:.16e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{haar_unitary, random_state_fixed_spectrum, SeededRng};
    use crate::linalg::pauli;

    type M = ComplexMatrix<f64>;

    fn ket0() -> M {
        M::basis_projector(2, 0)
    }

    #[test]
    fn hand_evaluated_qubit() {
        let w = work_direct(&ket0(), &pauli::z(), &pauli::x()).unwrap();
        assert!((w - 2.0).abs() < 1e-14);
        let (a, b, c) = work_commutator_forms(&ket0(), &pauli::z(), &pauli::x()).unwrap();
        for v in [a, b, c] {
            assert!((v - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn trivial_work() {
        let h = pauli::z::<f64>();
        assert_eq!(work_direct(&ket0(), &h, &M::identity(2)).unwrap(), 0.0);
        let u = haar_unitary::<f64>(2, &SeededRng::new(1, 0)).unwrap();
        let mixed = M::identity(2).scale_real(0.5);
        assert!(work_direct(&mixed, &h, &u).unwrap().abs() < 1e-14);

        // steady state: diagonal ρ and diagonal U commute
        let rho = M::diag_real(&[0.7, 0.3]);
        let u = M::diag(&[Complex::new(0.0, 1.0), Complex::new(1.0, 0.0)]);
        let (a, b, c) = work_commutator_forms(&rho, &h, &u).unwrap();
        assert!(a.abs() < 1e-14 && b.abs() < 1e-14 && c.abs() < 1e-14);
    }

    #[test]
    fn forms_agree_random() {
        let rho = random_state_fixed_spectrum(&[0.4, 0.3, 0.2, 0.1], &SeededRng::new(2, 0)).unwrap();
        let h = M::diag_real(&[0.0, 1.0, 2.5, 4.0]);
        let u = haar_unitary::<f64>(4, &SeededRng::new(3, 0)).unwrap();
        let w = work_direct(&rho, &h, &u).unwrap();
        let (a, b, c) = work_commutator_forms(&rho, &h, &u).unwrap();
        for v in [a, b, c] {
            assert!((v - w).abs() < 1e-10);
        }
    }

    #[test]
    fn antisymmetry() {
        let rho = random_state_fixed_spectrum(&[0.6, 0.3, 0.1], &SeededRng::new(4, 0)).unwrap();
        let h = M::diag_real(&[-1.0, 0.5, 2.0]);
        let u = haar_unitary::<f64>(3, &SeededRng::new(5, 0)).unwrap();
        let rho_t = rho.conjugate_rotate(&u, Conjugation::GxGdag).unwrap();
        let fwd = work_direct(&rho, &h, &u).unwrap();
        let back = work_direct(&rho_t, &h, &u.dagger()).unwrap();
        assert!((fwd + back).abs() < 1e-12);
    }

    #[test]
    fn echo_values() {
        assert!((loschmidt_echo(&ket0(), &ket0()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(loschmidt_echo(&ket0(), &M::basis_projector(2, 1)).unwrap(), 0.0);
        let pure = M::basis_projector(4, 2);
        let mixed = M::identity(4).scale_real(0.25);
        assert!((loschmidt_echo(&pure, &mixed).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn instance_validation() {
        let ok = BatteryInstance::new(ket0(), pauli::z(), pauli::x()).unwrap();
        assert_eq!(ok.e0(), 1.0);
        assert!((ok.work().unwrap() - 2.0).abs() < 1e-14);
        assert!(BatteryInstance::new(M::diag_real(&[0.5, 0.6]), pauli::z(), pauli::x()).is_err());
        assert!(BatteryInstance::new(ket0(), pauli::z(), M::identity(3)).is_err());
    }

    #[test]
    fn trace_csv() {
        let tr = WorkTrace::new(vec![0.0, 0.5], vec![0.0, 1.25], "seed=1").unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "# seed=1\nt,work\n0.0000000000000000e0,0.0000000000000000e0\n5.0000000000000000e-1,1.2500000000000000e0\n"
        );
        assert!(WorkTrace::new(vec![1.0, 1.0], vec![0.0, 0.0], "").is_err());
    }
}
