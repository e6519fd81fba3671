//! Local equilibrium: von Mises in heading times Gaussian in angular velocity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bessel::bessel_i_scaled;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPair<T> {
    /// Mean heading in `(-pi, pi]`.
    pub theta_bar: T,
    pub omega_bar: T,
    /// Concentration of the von Mises factor, `k_theta / alpha^2`.
    pub kappa: T,
    /// Variance of the Gaussian factor, `beta^2 / k_omega`.
    pub omega_variance: T,
}

impl<T: Real> EquilibriumPair<T> {
    pub fn new(theta_bar: T, omega_bar: T, kappa: T, omega_variance: T) -> Result<Self> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(Error::validation("kappa", format!("must be positive, got {kappa}")));
        }
        if !(omega_variance > T::zero()) || !omega_variance.is_finite() {
            return Err(Error::validation(
                "omega_variance",
                format!("must be positive, got {omega_variance}"),
            ));
        }
        if !theta_bar.is_finite() || !omega_bar.is_finite() {
            return Err(Error::validation("theta_bar", "mean values must be finite"));
        }
        Ok(Self {
            theta_bar: theta_bar.wrap_angle(),
            omega_bar,
            kappa,
            omega_variance,
        })
    }

    /// Equilibrium selected by the alignment rates and noise intensities.
    pub fn from_rates(theta_bar: T, omega_bar: T, k_theta: T, alpha2: T, k_omega: T, beta2: T) -> Result<Self> {
        Self::new(theta_bar, omega_bar, k_theta / alpha2, beta2 / k_omega)
    }

    /// `exp(kappa cos(theta - theta_bar)) / (2 pi I0(kappa))`.
    pub fn heading_density(&self, theta: T) -> T {
        let i0 = bessel_i_scaled(0, self.kappa).expect("kappa validated");
        (self.kappa * ((theta - self.theta_bar).cos() - T::one())).exp() / (T::TAU() * i0)
    }

    pub fn omega_density(&self, omega: T) -> T {
        let d = omega - self.omega_bar;
        (-d * d / (T::two() * self.omega_variance)).exp() / (T::TAU() * self.omega_variance).sqrt()
    }

    /// `n` independent `(theta, omega)` draws, reproducible from `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<(T, T)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = self.omega_variance.sqrt();
        (0..n)
            .map(|_| {
                let theta = sample_von_mises(&mut rng, self.theta_bar, self.kappa);
                let omega = self.omega_bar + sigma * T::standard_normal(&mut rng);
                (theta, omega)
            })
            .collect()
    }
}

/// Samples `n` draws from the equilibrium; see [`EquilibriumPair::sample`].
pub fn sample_equilibrium<T: Real>(eq: &EquilibriumPair<T>, n: usize, seed: u64) -> Result<Vec<(T, T)>> {
    if n == 0 {
        return Err(Error::validation("n", "sample count must be at least 1"));
    }
    Ok(eq.sample(n, seed))
}

/// Best-Fisher rejection sampler with a wrapped Cauchy envelope.
pub fn sample_von_mises<T: Real, R: rand::Rng + ?Sized>(rng: &mut R, mean: T, kappa: T) -> T {
    if kappa.as_f64() < 1e-9 {
        return (T::TAU() * T::unit_uniform(rng) - T::PI()).wrap_angle();
    }
    let one = T::one();
    let tau = one + (one + T::lit(4.0) * kappa * kappa).sqrt();
    let rho = (tau - (T::two() * tau).sqrt()) / (T::two() * kappa);
    let r = (one + rho * rho) / (T::two() * rho);
    loop {
        let u1 = T::unit_uniform(rng);
        let u2 = T::unit_uniform(rng);
        let u3 = T::unit_uniform(rng);
        let z = (T::PI() * u1).cos();
        let f = (one + r * z) / (r + z);
        let c = kappa * (r - f);
        let accept = c * (T::two() - c) > u2 || (u2 > T::zero() && (c / u2).ln() + one - c >= T::zero());
        if accept {
            let dev = f.max(-one).min(one).acos();
            let signed = if u3 < T::half() { -dev } else { dev };
            return (mean + signed).wrap_angle();
        }
    }
}
