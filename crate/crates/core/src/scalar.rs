//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra as na;
use num_traits as nt;

pub use na::Complex;

/// Real floating point type the library can run on (`f32` or `f64`).
pub trait Real: na::RealField + Copy + nt::FloatConst + nt::FromPrimitive + nt::ToPrimitive + Default {
    /// Machine epsilon of the type.
    const EPS: Self;

    fn from_count(n: usize) -> Self {
        <Self as nt::FromPrimitive>::from_usize(n).expect("usize fits in a float")
    }

    fn lit(x: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(x).expect("f64 literal fits")
    }

    fn to_f64_lossy(self) -> f64 {
        nt::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const EPS: Self = f32::EPSILON;
}

impl Real for f64 {
    const EPS: Self = f64::EPSILON;
}

/// `e^{i theta}`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut w = theta - two_pi * ((theta + T::pi()) / two_pi).floor();
    // floor puts `theta = pi` at `-pi`; the branch is closed on the right.
    if w <= -T::pi() {
        w += two_pi;
    }
    w
}
