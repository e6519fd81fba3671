//! Floating point abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StandardUniform};

/// Real scalar the simulations are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; the `f32` instantiation trades accuracy for memory.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Draws a standard normal variate.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draws a uniform variate on `[0, 1)`.
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Wraps an angle into `(-pi, pi]`.
    #[inline]
    fn wrap_angle(self) -> Self {
        let two_pi = Self::TAU();
        let mut a = self - two_pi * ((self + Self::PI()) / two_pi).floor();
        // `a` is now in [-pi, pi); move the closed end to +pi.
        if a <= -Self::PI() {
            a += two_pi;
        }
        a
    }

    /// Wraps a coordinate into `[0, length)`.
    #[inline]
    fn wrap_periodic(self, length: Self) -> Self {
        let mut y = self - length * (self / length).floor();
        if y >= length {
            y -= length;
        }
        if y < Self::zero() {
            y = Self::zero();
        }
        y
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            #[inline]
            fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardUniform.sample(rng)
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_angle_half_open() {
        assert_eq!(PI.wrap_angle(), PI);
        assert_eq!((-PI).wrap_angle(), PI);
        assert!((3.0 * PI + 0.1).wrap_angle() - (-PI + 0.1) < 1e-12);
        for k in -50..50 {
            let a = 0.37 * k as f64;
            let w = a.wrap_angle();
            assert!(w > -PI && w <= PI, "{a} -> {w}");
            assert!(((a - w) / (2.0 * PI)).fract().abs() < 1e-9 || ((a - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn wrap_periodic_stays_inside() {
        let l = 64.0_f64;
        for x in [-1e-18, -0.0, 64.0, 127.999, -64.5, 1e-300] {
            let y = x.wrap_periodic(l);
            assert!((0.0..l).contains(&y), "{x} -> {y}");
        }
        assert!((-1e-18_f32).wrap_periodic(1.0) < 1.0);
    }
}
