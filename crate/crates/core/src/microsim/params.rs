use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest `dt * max(k_theta, k_omega)` accepted without `allow_stiff`.
pub const STIFFNESS_GUARD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KernelShape {
    /// Normalized indicator of the ball of radius `R`.
    #[default]
    Indicator,
}

/// Radially symmetric interaction kernel with unit integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec<T> {
    pub shape: KernelShape,
    pub radius: T,
}

impl<T: Real> KernelSpec<T> {
    pub fn indicator(radius: T) -> Self {
        Self {
            shape: KernelShape::Indicator,
            radius,
        }
    }

    /// Kernel value at squared distance `d2`.
    #[inline]
    pub fn weight(&self, d2: T) -> T {
        self.peak() * self.profile(d2)
    }

    /// `K(d) / K(0)` at squared distance `d2`.
    #[inline]
    pub fn profile(&self, d2: T) -> T {
        match self.shape {
            KernelShape::Indicator => {
                if d2 <= self.radius * self.radius {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }

    /// `K(0)`.
    #[inline]
    pub fn peak(&self) -> T {
        match self.shape {
            KernelShape::Indicator => T::one() / (T::PI() * self.radius * self.radius),
        }
    }
}

/// Parameters of the particle model and its time integration.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroParams<T> {
    /// Number of particles.
    pub n: usize,
    /// Self-propulsion speed (length/time).
    pub c: T,
    /// Heading alignment rate (1/time).
    pub k_theta: T,
    /// Angular-velocity alignment rate (1/time).
    pub k_omega: T,
    /// Heading noise intensity; the SDE amplitude is `sqrt(2 alpha2)`.
    pub alpha2: T,
    /// Angular-velocity noise intensity; amplitude `sqrt(2 beta2)`.
    pub beta2: T,
    pub kernel: KernelSpec<T>,
    /// Side of the periodic square.
    pub length: T,
    pub dt: T,
    pub t_end: T,
    pub seed: u64,
    /// Accept `dt * max(k) > STIFFNESS_GUARD`.
    pub allow_stiff: bool,
    /// Split a step in halves while `k_theta |sin(.)| dt > 0.5` somewhere.
    pub step_halving: bool,
}

impl<T: Real> MicroParams<T> {
    /// The settings used for the published phase diagram at the given
    /// alignment rates. `allow_stiff` is set since `k = 71` breaks the guard.
    pub fn table1(k_theta: T, k_omega: T) -> Self {
        Self {
            n: 15_000,
            c: T::one(),
            k_theta,
            k_omega,
            alpha2: T::lit(0.125),
            beta2: T::lit(0.125),
            kernel: KernelSpec::indicator(T::two()),
            length: T::lit(64.0),
            dt: T::lit(0.01),
            t_end: T::lit(200.0),
            seed: 0,
            allow_stiff: true,
            step_halving: false,
        }
    }

    pub fn radius(&self) -> T {
        self.kernel.radius
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().to_usize().unwrap_or(0)
    }

    /// `dt * max(k_theta, k_omega)`.
    pub fn stiffness(&self) -> T {
        self.dt * self.k_theta.max(self.k_omega)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("n", "need at least one particle"));
        }
        let positive = [
            ("c", self.c),
            ("k_theta", self.k_theta),
            ("k_omega", self.k_omega),
            ("R", self.kernel.radius),
            ("L", self.length),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::validation(name, format!("must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [("alpha2", self.alpha2), ("beta2", self.beta2), ("t_end", self.t_end)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::validation(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !(self.kernel.radius < self.length * T::half()) {
            return Err(Error::validation(
                "R",
                format!(
                    "minimum-image distance needs R < L/2 (R = {}, L = {})",
                    self.kernel.radius, self.length
                ),
            ));
        }
        let stiffness = self.stiffness();
        if stiffness.as_f64() > STIFFNESS_GUARD && !self.allow_stiff {
            return Err(Error::validation(
                "dt",
                format!(
                    "stability guard dt*max(k_theta, k_omega) <= {STIFFNESS_GUARD} violated ({stiffness}); \
                     pass --allow-stiff to run anyway"
                ),
            ));
        }
        Ok(())
    }
}
