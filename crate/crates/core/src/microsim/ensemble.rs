use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coefficients::sample_von_mises;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Positions, headings and angular velocities of `n` agents on the periodic
/// square `[0, length)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble<T> {
    pub length: T,
    pub pos: Vec<[T; 2]>,
    pub theta: Vec<T>,
    pub omega: Vec<T>,
}

impl<T: Real> ParticleEnsemble<T> {
    pub fn new(length: T, pos: Vec<[T; 2]>, theta: Vec<T>, omega: Vec<T>) -> Result<Self> {
        if pos.len() != theta.len() || pos.len() != omega.len() {
            return Err(Error::validation(
                "ensemble",
                format!("length mismatch: {} / {} / {}", pos.len(), theta.len(), omega.len()),
            ));
        }
        let mut ens = Self { length, pos, theta, omega };
        ens.wrap();
        Ok(ens)
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Applies the periodic wrap to positions and the `(-pi, pi]` wrap to
    /// headings.
    pub fn wrap(&mut self) {
        let l = self.length;
        for p in &mut self.pos {
            p[0] = p[0].wrap_periodic(l);
            p[1] = p[1].wrap_periodic(l);
        }
        for th in &mut self.theta {
            *th = th.wrap_angle();
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pos.iter().all(|p| p[0].is_finite() && p[1].is_finite())
            && self.theta.iter().all(|t| t.is_finite())
            && self.omega.iter().all(|w| w.is_finite())
    }

    pub fn mean_omega(&self) -> T {
        self.omega.iter().copied().sum::<T>() / T::from_usize_lossy(self.len())
    }
}

/// Initial data for a particle run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub enum InitSpec<T> {
    /// Uniform positions and headings; a fraction `positive_fraction` of
    /// the agents gets `omega ~ U[0, omega_amplitude]`, the rest
    /// `omega ~ -U[0, omega_amplitude]`.
    UniformRandom {
        #[serde(default = "default_positive_fraction")]
        positive_fraction: T,
        #[serde(default = "default_omega_amplitude")]
        omega_amplitude: T,
    },
    /// Uniform positions, a common heading and angular velocity.
    Aligned { theta0: T, omega0: T },
    /// All agents at one point with a common heading and angular velocity.
    Coincident { x0: T, y0: T, theta0: T, omega0: T },
    /// Uniform positions, `(theta, omega)` drawn from the local equilibrium.
    Equilibrium {
        theta_bar: T,
        omega_bar: T,
        kappa: T,
        omega_variance: T,
    },
}

fn default_positive_fraction<T: Real>() -> T {
    T::lit(0.25)
}

fn default_omega_amplitude<T: Real>() -> T {
    T::lit(5.0)
}

impl<T: Real> Default for InitSpec<T> {
    fn default() -> Self {
        InitSpec::UniformRandom {
            positive_fraction: default_positive_fraction(),
            omega_amplitude: default_omega_amplitude(),
        }
    }
}

/// Stream id of the initialization RNG; particle streams use their index.
const INIT_STREAM: u64 = 1 << 63;

impl<T: Real> InitSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InitSpec::UniformRandom {
                positive_fraction,
                omega_amplitude,
            } => {
                if !(T::zero()..=T::one()).contains(&positive_fraction) {
                    return Err(Error::validation("positive_fraction", "must lie in [0, 1]"));
                }
                if !(omega_amplitude >= T::zero()) || !omega_amplitude.is_finite() {
                    return Err(Error::validation("omega_amplitude", "must be finite and >= 0"));
                }
            }
            InitSpec::Aligned { theta0, omega0 } | InitSpec::Coincident { theta0, omega0, .. } => {
                if !theta0.is_finite() || !omega0.is_finite() {
                    return Err(Error::validation("theta0", "initial values must be finite"));
                }
            }
            InitSpec::Equilibrium {
                theta_bar,
                omega_bar,
                kappa,
                omega_variance,
            } => {
                crate::coefficients::EquilibriumPair::new(theta_bar, omega_bar, kappa, omega_variance)?;
            }
        }
        Ok(())
    }

    /// Builds the initial ensemble; deterministic in `seed`.
    pub fn build(&self, n: usize, length: T, seed: u64) -> Result<ParticleEnsemble<T>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(INIT_STREAM);
        let uniform_pos = |rng: &mut ChaCha8Rng| [length * T::unit_uniform(rng), length * T::unit_uniform(rng)];
        let mut pos = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        let mut omega = Vec::with_capacity(n);
        match *self {
            InitSpec::UniformRandom {
                positive_fraction,
                omega_amplitude,
            } => {
                let n_pos = (positive_fraction * T::from_usize_lossy(n)).round().to_usize().unwrap_or(0);
                for i in 0..n {
                    pos.push(uniform_pos(&mut rng));
                    theta.push(T::TAU() * T::unit_uniform(&mut rng) - T::PI());
                    let w = omega_amplitude * T::unit_uniform(&mut rng);
                    omega.push(if i < n_pos { w } else { -w });
                }
            }
            InitSpec::Aligned { theta0, omega0 } => {
                for _ in 0..n {
                    pos.push(uniform_pos(&mut rng));
                    theta.push(theta0);
                    omega.push(omega0);
                }
            }
            InitSpec::Coincident { x0, y0, theta0, omega0 } => {
                pos = vec![[x0, y0]; n];
                theta = vec![theta0; n];
                omega = vec![omega0; n];
            }
            InitSpec::Equilibrium {
                theta_bar,
                omega_bar,
                kappa,
                omega_variance,
            } => {
                let sigma = omega_variance.sqrt();
                for _ in 0..n {
                    pos.push(uniform_pos(&mut rng));
                    theta.push(sample_von_mises(&mut rng, theta_bar, kappa));
                    omega.push(omega_bar + sigma * T::standard_normal(&mut rng));
                }
            }
        }
        ParticleEnsemble::new(length, pos, theta, omega)
    }
}
