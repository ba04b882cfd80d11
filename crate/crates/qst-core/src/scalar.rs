//! Scalar abstraction for the numeric core.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::distributions::uniform::SampleUniform;
use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar the solvers run on. `f64` is the reference
/// precision; `f32` works but the shipped tolerances assume `f64`.
pub trait Real:
    RealField + FromPrimitive + ToPrimitive + SampleUniform + Copy + Default
{
    /// Lossy conversion from an `f64` literal or intermediate.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    /// Lossy conversion to `f64`, for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }

    /// Uniform sample from `[0, 1)`.
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Standard normal sample.
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_real {
    ($($t:ty),*) => {$(
        impl Real for $t {
            fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.gen::<$t>()
            }
            fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.sample(StandardNormal)
            }
        }
    )*};
}

impl_real!(f32, f64);

/// Tolerance floor used by validity checks: `base` for `f64`, loosened for
/// wider-epsilon scalars so the same checks stay meaningful under `f32`.
pub fn tol<T: Real>(base: f64) -> T {
    let floor = T::default_epsilon() * T::of(64.0);
    if T::of(base) > floor {
        T::of(base)
    } else {
        floor
    }
}
