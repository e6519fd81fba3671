use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::MacroState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Initial data for a grid run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub enum MacroInitSpec<T> {
    /// `rho = 1 + rho_amplitude u`, `omega_bar = omega_mean + omega_amplitude u'`
    /// with `u, u'` uniform on `[-1, 1]`, and `Omega` uniform on the circle,
    /// independently per cell.
    Random {
        #[serde(default = "default_rho_amplitude")]
        rho_amplitude: T,
        #[serde(default = "default_omega_mean")]
        omega_mean: T,
        #[serde(default = "default_omega_amplitude")]
        omega_amplitude: T,
    },
    /// Spatially constant data.
    Constant {
        #[serde(default = "one")]
        rho0: T,
        omega0: T,
        theta0: T,
    },
    /// `rho = 2 + sin(2 pi x / L)` with constant direction `theta0` and the
    /// angular velocity that keeps it constant:
    /// `rho omega_bar = lambda grad(rho) . Omega_perp`.
    WellPrepared {
        #[serde(default = "half_pi")]
        theta0: T,
    },
}

fn default_rho_amplitude<T: Real>() -> T {
    T::lit(0.01)
}

fn default_omega_mean<T: Real>() -> T {
    T::half()
}

fn default_omega_amplitude<T: Real>() -> T {
    T::lit(0.1)
}

fn one<T: Real>() -> T {
    T::one()
}

fn half_pi<T: Real>() -> T {
    T::FRAC_PI_2()
}

impl<T: Real> Default for MacroInitSpec<T> {
    fn default() -> Self {
        MacroInitSpec::Random {
            rho_amplitude: default_rho_amplitude(),
            omega_mean: default_omega_mean(),
            omega_amplitude: default_omega_amplitude(),
        }
    }
}

impl<T: Real> MacroInitSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MacroInitSpec::Random {
                rho_amplitude,
                omega_mean,
                omega_amplitude,
            } => {
                if !(rho_amplitude >= T::zero() && rho_amplitude < T::one()) {
                    return Err(Error::validation("rho_amplitude", "must lie in [0, 1)"));
                }
                if !omega_mean.is_finite() || !omega_amplitude.is_finite() {
                    return Err(Error::validation("omega_mean", "must be finite"));
                }
            }
            MacroInitSpec::Constant { rho0, omega0, theta0 } => {
                if !(rho0 > T::zero()) || !rho0.is_finite() {
                    return Err(Error::validation("rho0", "must be positive"));
                }
                if !omega0.is_finite() || !theta0.is_finite() {
                    return Err(Error::validation("omega0", "must be finite"));
                }
            }
            MacroInitSpec::WellPrepared { theta0 } => {
                if !theta0.is_finite() {
                    return Err(Error::validation("theta0", "must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Samples the data at cell centres; `lambda` is the pressure coefficient.
    pub fn build(&self, nx: usize, ny: usize, length: T, lambda: T, seed: u64) -> Result<MacroState<T>> {
        self.validate()?;
        let state = match *self {
            MacroInitSpec::Random {
                rho_amplitude,
                omega_mean,
                omega_amplitude,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sym = |rng: &mut ChaCha8Rng| T::two() * T::unit_uniform(rng) - T::one();
                MacroState::from_fn(nx, ny, length, |_, _| {
                    let rho = T::one() + rho_amplitude * sym(&mut rng);
                    let w = omega_mean + omega_amplitude * sym(&mut rng);
                    let th = T::PI() * sym(&mut rng);
                    (rho, w, th)
                })
            }
            MacroInitSpec::Constant { rho0, omega0, theta0 } => MacroState::uniform(nx, ny, length, rho0, omega0, theta0),
            MacroInitSpec::WellPrepared { theta0 } => {
                let k = T::TAU() / length;
                let perp = [-theta0.sin(), theta0.cos()];
                MacroState::from_fn(nx, ny, length, |x, _| {
                    let rho = T::two() + (k * x).sin();
                    let grad = [k * (k * x).cos(), T::zero()];
                    let w = lambda * (grad[0] * perp[0] + grad[1] * perp[1]) / rho;
                    (rho, w, theta0)
                })
            }
        };
        Ok(state)
    }
}
