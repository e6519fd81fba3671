use crate::coefficients::ClosureCoefficients;
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::roe::FluxConstants;

/// Parameters of the hydrodynamic solver.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroParams<T> {
    pub coeffs: ClosureCoefficients<T>,
    /// `lambda` in front of the pressure term; `1 / kappa` by default.
    pub pressure_coef: T,
    pub dt: T,
    pub nx: usize,
    pub ny: usize,
    /// Side of the periodic square.
    pub length: T,
    pub t_end: T,
    /// Upper bound on `dt * max speed / min(dx, dy)`.
    pub cfl_max: T,
    /// Seed of random initial data.
    pub seed: u64,
}

impl<T: Real> MacroParams<T> {
    /// Default grid (200^2 on the unit square, `dt = 0.001`) at concentration `kappa`.
    pub fn new(kappa: T) -> Result<Self> {
        let coeffs = ClosureCoefficients::compute(kappa)?;
        Ok(Self {
            coeffs,
            pressure_coef: T::one() / kappa,
            dt: T::lit(0.001),
            nx: 200,
            ny: 200,
            length: T::one(),
            t_end: T::one(),
            cfl_max: T::lit(0.9),
            seed: 0,
        })
    }

    pub fn flux_constants(&self) -> FluxConstants<T> {
        FluxConstants {
            c1: self.coeffs.c1,
            c2: self.coeffs.c2,
            lambda: self.pressure_coef,
        }
    }

    pub fn dx(&self) -> T {
        self.length / T::from_usize_lossy(self.nx)
    }

    pub fn dy(&self) -> T {
        self.length / T::from_usize_lossy(self.ny)
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().to_usize().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        if !pos(self.coeffs.c1) {
            return Err(Error::validation("c1", "must be positive"));
        }
        if !(self.coeffs.c2 >= T::zero()) || !self.coeffs.c2.is_finite() {
            return Err(Error::validation("c2", "must be finite and >= 0"));
        }
        if !(self.pressure_coef >= T::zero()) || !self.pressure_coef.is_finite() {
            return Err(Error::validation("pressure_coef", "must be finite and >= 0"));
        }
        if !pos(self.dt) {
            return Err(Error::validation("dt", "must be positive"));
        }
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::validation("nx", "grid needs at least 3 cells per side"));
        }
        if !pos(self.length) {
            return Err(Error::validation("length", "must be positive"));
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return Err(Error::validation("t_end", "must be finite and >= 0"));
        }
        if !pos(self.cfl_max) || self.cfl_max >= T::one() {
            return Err(Error::validation("cfl_max", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_kappa() {
        let p = MacroParams::new(8.0_f64).unwrap();
        p.validate().unwrap();
        assert_eq!(p.pressure_coef, 0.125);
        assert!((p.dx() - 0.005).abs() < 1e-15);
        assert_eq!(p.steps(), 1000);
    }

    #[test]
    fn rejects_cfl_of_one() {
        let mut p = MacroParams::new(8.0_f64).unwrap();
        p.cfl_max = 1.0;
        match p.validate().unwrap_err() {
            Error::Validation { field, .. } => assert_eq!(field, "cfl_max"),
            e => panic!("unexpected {e}"),
        }
    }
}
