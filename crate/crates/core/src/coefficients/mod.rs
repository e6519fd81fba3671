//! Closure quantities linking the particle model to its hydrodynamic limit:
//! Bessel functions, equilibria, the collision-invariant profile `g` and the
//! transport constants `c1`, `c2` with the moments `K1`, `K2`.

pub mod bessel;
pub mod equilibrium;
pub mod gci;
pub mod quadrature;

use serde::Serialize;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_ratio_i1_i0};
pub use equilibrium::{sample_equilibrium, sample_von_mises, EquilibriumPair};
pub use gci::{gci_g, gci_moments, GciMoments, GciProfile};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Constants of the macroscopic model at one concentration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosureCoefficients<T> {
    pub kappa: T,
    /// Transport speed of mass and angular momentum, `I1(kappa)/I0(kappa)`.
    pub c1: T,
    /// Self-convection speed of the direction field, `K2 / K1`.
    pub c2: T,
    #[serde(rename = "K1")]
    pub k1: T,
    #[serde(rename = "K2")]
    pub k2: T,
    /// Estimated absolute quadrature error of `K1` and `K2`.
    pub quad_error: T,
}

impl<T: Real> ClosureCoefficients<T> {
    pub fn compute(kappa: T) -> Result<Self> {
        let c1 = compute_c1(kappa)?;
        let m = gci_moments(kappa)?;
        Ok(Self {
            kappa,
            c1,
            c2: m.k2 / m.k1,
            k1: m.k1,
            k2: m.k2,
            quad_error: m.error,
        })
    }
}

/// `c1 = I1(kappa) / I0(kappa)`.
pub fn compute_c1<T: Real>(kappa: T) -> Result<T> {
    if !(kappa > T::zero()) || !kappa.is_finite() {
        return Err(Error::domain("compute_c1", format!("kappa must be positive, got {kappa}")));
    }
    bessel_ratio_i1_i0(kappa)
}

/// `(K1, K2, quad_error)`.
pub fn compute_k1_k2<T: Real>(kappa: T) -> Result<(T, T, T)> {
    let m = gci_moments(kappa)?;
    Ok((m.k1, m.k2, m.error))
}
