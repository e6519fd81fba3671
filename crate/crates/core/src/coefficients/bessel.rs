//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series up to `x <= SERIES_MAX`, Hankel asymptotic expansion beyond.
//! Both branches can return the exponentially scaled value `exp(-x) I_n(x)`
//! so that ratios stay finite for large arguments.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest argument evaluated by the power series.
pub const SERIES_MAX: f64 = 15.0;

const MAX_TERMS: usize = 500;

fn check_args<T: Real>(order: u32, x: T) -> Result<()> {
    if order > 1 {
        return Err(Error::domain(
            "bessel_i",
            format!("unsupported order {order} (only 0 and 1)"),
        ));
    }
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(
            "bessel_i",
            format!("argument must be finite and nonnegative, got {x}"),
        ));
    }
    Ok(())
}

/// `I_order(x)` for `order` in `{0, 1}` and `x >= 0`.
///
/// Overflows to infinity past `x ~ 713` in `f64`; use [`bessel_i_scaled`]
/// there.
pub fn bessel_i<T: Real>(order: u32, x: T) -> Result<T> {
    check_args(order, x)?;
    if x.as_f64() <= SERIES_MAX {
        Ok(series(order, x))
    } else {
        Ok(asymptotic_scaled(order, x) * x.exp())
    }
}

/// `exp(-x) I_order(x)`.
pub fn bessel_i_scaled<T: Real>(order: u32, x: T) -> Result<T> {
    check_args(order, x)?;
    if x.as_f64() <= SERIES_MAX {
        Ok(series(order, x) * (-x).exp())
    } else {
        Ok(asymptotic_scaled(order, x))
    }
}

/// `I_1(x) / I_0(x)`, finite for every `x >= 0`.
pub fn bessel_ratio_i1_i0<T: Real>(x: T) -> Result<T> {
    let i1 = bessel_i_scaled(1, x)?;
    let i0 = bessel_i_scaled(0, x)?;
    Ok(i1 / i0)
}

// sum_k (x/2)^(2k+n) / (k! (k+n)!)
fn series<T: Real>(order: u32, x: T) -> T {
    let half = x * T::half();
    let q = half * half;
    let n = T::from_u32(order).unwrap();
    let mut term = if order == 0 { T::one() } else { half };
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kk = T::from_usize_lossy(k);
        term = term * q / (kk * (kk + n));
        sum += term;
        if term <= sum * T::epsilon() * T::lit(0.25) {
            break;
        }
    }
    sum
}

// exp(-x) I_n(x) ~ 1/sqrt(2 pi x) * sum_k (-1)^k a_k(n) / x^k
fn asymptotic_scaled<T: Real>(order: u32, x: T) -> T {
    let mu = T::lit(4.0 * f64::from(order * order));
    let eight_x = T::lit(8.0) * x;
    let mut term = T::one();
    let mut sum = T::one();
    let mut last = T::infinity();
    for k in 1..MAX_TERMS {
        let odd = T::from_usize_lossy(2 * k - 1);
        term = -term * (mu - odd * odd) / (T::from_usize_lossy(k) * eight_x);
        let size = term.abs();
        // Asymptotic series: stop at the smallest term.
        if size >= last {
            break;
        }
        sum += term;
        last = size;
        if size <= sum.abs() * T::epsilon() * T::lit(0.25) {
            break;
        }
    }
    sum / (T::TAU() * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_i(0, 0.0_f64).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_i(0, -1.0_f64).is_err());
        assert!(bessel_i(2, 1.0_f64).is_err());
        assert!(bessel_i(0, f64::NAN).is_err());
        assert!(bessel_i_scaled(1, f64::INFINITY).is_err());
    }

    #[test]
    fn branches_meet_at_switch_point() {
        // Series stays accurate past the switch, so it can check the asymptotic branch.
        for order in 0..2 {
            for x in [15.0_f64, 18.0, 25.0, 40.0] {
                let s = series(order, x) * (-x).exp();
                let a = asymptotic_scaled(order, x);
                assert!(((s - a) / s).abs() < 1e-12, "order {order} x {x}: {s} vs {a}");
            }
        }
    }

    #[test]
    fn ratio_limits() {
        assert!(bessel_ratio_i1_i0(1e-8_f64).unwrap().abs() < 1e-7);
        let r = bessel_ratio_i1_i0(1e5_f64).unwrap();
        // I1/I0 ~ 1 - 1/(2x)
        assert!((r - (1.0 - 0.5e-5)).abs() < 1e-9);
        assert!(r < 1.0);
    }

    #[test]
    fn single_precision_instantiates() {
        let v = bessel_i(0, 1.0_f32).unwrap();
        assert!((v - 1.266_065_9).abs() < 1e-6);
    }
}
