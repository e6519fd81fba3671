//! Generalized collision invariant profile `g` and its moments.

use std::cell::Cell;

use super::bessel::bessel_i_scaled;
use super::quadrature::{integrate, Estimate, QuadOptions};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Target absolute accuracy of a single `g` evaluation.
pub const G_TOL: f64 = 1e-10;

/// `g` at fixed concentration, caching the normalizing integral
/// `int_0^pi exp(-kappa cos phi) d phi`.
///
/// Both integrals are evaluated with the weight `exp(-kappa (cos phi + 1))`,
/// which is bounded by one, so large `kappa` does not overflow.
#[derive(Debug, Clone, Copy)]
pub struct GciProfile<T> {
    kappa: T,
    denom: Estimate<T>,
    inner_tol: f64,
}

impl<T: Real> GciProfile<T> {
    pub fn new(kappa: T) -> Result<Self> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(Error::domain("gci_g", format!("kappa must be positive, got {kappa}")));
        }
        let weight = move |phi: T| (-kappa * (phi.cos() + T::one())).exp();
        let denom = integrate(weight, T::zero(), T::PI(), QuadOptions { abs_tol: 1e-13, ..Default::default() })?;
        // |dg| <= (pi / kappa) (|dN| + |dD|) / D
        let inner_tol = (G_TOL * kappa.as_f64() * denom.value.as_f64() / (2.0 * std::f64::consts::PI)).min(G_TOL);
        Ok(Self { kappa, denom, inner_tol })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// `g(gamma)` with an absolute error bound. `gamma` is wrapped into
    /// `(-pi, pi]` first; `g` vanishes at both ends so the extension is
    /// continuous.
    pub fn eval(&self, gamma: T) -> Result<Estimate<T>> {
        let gamma = gamma.wrap_angle();
        let kappa = self.kappa;
        let weight = move |phi: T| (-kappa * (phi.cos() + T::one())).exp();
        let num = integrate(
            weight,
            T::zero(),
            gamma,
            QuadOptions { abs_tol: self.inner_tol, ..Default::default() },
        )?;
        let ratio = num.value / self.denom.value;
        let scale = T::PI() / kappa;
        let value = gamma / kappa - scale * ratio;
        let error = scale * (num.error + ratio.abs() * self.denom.error) / self.denom.value;
        Ok(Estimate { value, error, evals: num.evals })
    }
}

/// `g(gamma)` for concentration `kappa`.
pub fn gci_g<T: Real>(gamma: T, kappa: T) -> Result<T> {
    Ok(GciProfile::new(kappa)?.eval(gamma)?.value)
}

/// Moments `K1 = int sin N0 g` and `K2 = int cos sin N0 g` over `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GciMoments<T> {
    pub k1: T,
    pub k2: T,
    pub error: T,
}

/// Largest acceptable error estimate for the moments.
pub const MOMENT_MAX_ERROR: f64 = 1e-8;
/// `K1` smaller than this makes `K2 / K1` meaningless.
pub const MOMENT_MIN_K1: f64 = 1e-12;

pub fn gci_moments<T: Real>(kappa: T) -> Result<GciMoments<T>> {
    let profile = GciProfile::new(kappa)?;
    let norm = T::TAU() * bessel_i_scaled(0, kappa)?;
    let density = move |theta: T| (kappa * (theta.cos() - T::one())).exp() / norm;

    let moment = |with_cos: bool| -> Result<(T, T)> {
        let g_err = Cell::new(T::zero());
        let failure: Cell<Option<Error>> = Cell::new(None);
        let integrand = |theta: T| {
            let g = match profile.eval(theta) {
                Ok(g) => g,
                Err(e) => {
                    failure.set(Some(e));
                    return T::zero();
                }
            };
            g_err.set(g_err.get().max(g.error));
            let s = theta.sin() * density(theta) * g.value;
            if with_cos {
                s * theta.cos()
            } else {
                s
            }
        };
        // The integrand is even: two odd factors and an even one.
        let half = integrate(integrand, T::zero(), T::PI(), QuadOptions { abs_tol: 1e-12, ..Default::default() })?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        // int_{-pi}^{pi} |sin| N0 <= 1 bounds the propagated g error.
        Ok((T::two() * half.value, T::two() * half.error + g_err.get()))
    };

    let (k1, e1) = moment(false)?;
    let (k2, e2) = moment(true)?;
    let error = e1.max(e2);
    if error.as_f64() > MOMENT_MAX_ERROR {
        return Err(Error::Quadrature {
            op: "compute_K1_K2",
            msg: format!("error estimate {error:e} exceeds {MOMENT_MAX_ERROR:e}"),
        });
    }
    if k1.abs().as_f64() < MOMENT_MIN_K1 {
        return Err(Error::Quadrature {
            op: "compute_K1_K2",
            msg: format!("|K1| = {k1:e} below {MOMENT_MIN_K1:e}; c2 = K2/K1 undefined"),
        });
    }
    Ok(GciMoments { k1, k2, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_at_zero_and_pi() {
        for kappa in [0.1, 1.0, 8.0, 71.0 / 0.125] {
            assert_eq!(gci_g(0.0, kappa).unwrap(), 0.0);
            assert!(gci_g(std::f64::consts::PI, kappa).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn odd() {
        let p = GciProfile::new(8.0).unwrap();
        for k in 1..100 {
            let gamma = std::f64::consts::PI * k as f64 / 100.0;
            let a = p.eval(gamma).unwrap().value;
            let b = p.eval(-gamma).unwrap().value;
            assert!((a + b).abs() < 1e-12, "gamma {gamma}: {a} {b}");
        }
    }

    #[test]
    fn rejects_nonpositive_kappa() {
        assert!(gci_g(1.0, 0.0).is_err());
        assert!(gci_moments(-2.0_f64).is_err());
    }

    #[test]
    fn moments_have_small_error() {
        let m = gci_moments(8.0_f64).unwrap();
        assert!(m.error < 1e-8);
        assert!(m.k1 > 0.0 && m.k2 > 0.0);
    }
}
