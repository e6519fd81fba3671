//! Euler-Maruyama update of the particle system.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ensemble::ParticleEnsemble;
use super::neighbors::{local_means, LocalMeans};
use super::params::MicroParams;
use crate::scalar::Real;

/// `|J_i|` below this leaves particle `i` without an alignment force.
pub const MIN_FLUX_NORM: f64 = 1e-14;

/// Deepest recursion of the optional step halving (`dt / 64`).
const MAX_HALVINGS: u32 = 6;

/// One ChaCha stream per particle: key from the run seed, stream id from the
/// particle index, position advanced by the number of draws taken. A
/// particle's noise therefore depends only on `(seed, id, step)`.
#[derive(Debug, Clone)]
pub struct RngState {
    streams: Vec<ChaCha8Rng>,
}

impl RngState {
    pub fn new(seed: u64, n: usize) -> Self {
        let base = ChaCha8Rng::seed_from_u64(seed);
        let streams = (0..n as u64)
            .map(|id| {
                let mut r = base.clone();
                r.set_stream(id);
                r
            })
            .collect();
        Self { streams }
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }
}

/// Heading drift `k_theta sin(theta_bar - theta)` written as the cross
/// product of the unit mean direction with `tau(theta)`.
#[inline]
fn alignment<T: Real>(k_theta: T, j: [T; 2], theta: T) -> T {
    let norm = j[0].hypot(j[1]);
    if norm.as_f64() < MIN_FLUX_NORM {
        return T::zero();
    }
    let (s, c) = theta.sin_cos();
    k_theta * (j[1] * c - j[0] * s) / norm
}

/// Largest `|k_theta sin(theta_bar - theta)| * dt` over the ensemble.
pub fn max_alignment_increment<T: Real>(ens: &ParticleEnsemble<T>, means: &LocalMeans<T>, p: &MicroParams<T>, dt: T) -> T {
    ens.theta
        .iter()
        .zip(&means.j)
        .map(|(&th, &j)| alignment(p.k_theta, j, th).abs() * dt)
        .fold(T::zero(), T::max)
}

/// Advances the ensemble in place by `p.dt`.
///
/// `x += c tau(theta) dt`, `theta += (omega + k_theta sin(theta_bar - theta)) dt
/// + sqrt(2 alpha2 dt) xi`, `omega += k_omega (omega_bar - omega) dt +
/// sqrt(2 beta2 dt) xi'`, all from the state at the start of the step. The
/// rotation `omega dt` is integrated exactly since `omega` is frozen over the
/// step. With `p.step_halving` the step is split while the alignment
/// increment exceeds one half somewhere.
pub fn em_step<T: Real>(ens: &mut ParticleEnsemble<T>, p: &MicroParams<T>, rng: &mut RngState) {
    let means = local_means(ens, &p.kernel);
    if p.step_halving {
        advance_halving(ens, p, rng, p.dt, means, 0);
    } else {
        apply_update(ens, p, rng, p.dt, &means);
    }
}

fn advance_halving<T: Real>(
    ens: &mut ParticleEnsemble<T>,
    p: &MicroParams<T>,
    rng: &mut RngState,
    dt: T,
    means: LocalMeans<T>,
    depth: u32,
) {
    if depth < MAX_HALVINGS && max_alignment_increment(ens, &means, p, dt).as_f64() > 0.5 {
        let half = dt * T::half();
        advance_halving(ens, p, rng, half, means, depth + 1);
        let means = local_means(ens, &p.kernel);
        advance_halving(ens, p, rng, half, means, depth + 1);
    } else {
        apply_update(ens, p, rng, dt, &means);
    }
}

/// Update with precomputed neighbourhood averages. Each particle reads only
/// its own state and `means`, so the loop is data parallel.
pub fn apply_update<T: Real>(ens: &mut ParticleEnsemble<T>, p: &MicroParams<T>, rng: &mut RngState, dt: T, means: &LocalMeans<T>) {
    assert_eq!(rng.len(), ens.len(), "one RNG stream per particle");
    let l = ens.length;
    let step = p.c * dt;
    let theta_amp = (T::two() * p.alpha2 * dt).sqrt();
    let omega_amp = (T::two() * p.beta2 * dt).sqrt();
    let relax = p.k_omega * dt;
    ens.pos
        .par_iter_mut()
        .zip(ens.theta.par_iter_mut())
        .zip(ens.omega.par_iter_mut())
        .zip(rng.streams.par_iter_mut())
        .zip(means.j.par_iter().zip(means.omega_bar.par_iter()))
        .for_each(|((((x, th), w), r), (&j, &wbar))| {
            let xi = T::standard_normal(r);
            let xi_w = T::standard_normal(r);
            let (s, c) = th.sin_cos();
            x[0] = (x[0] + step * c).wrap_periodic(l);
            x[1] = (x[1] + step * s).wrap_periodic(l);
            let drift = *w + alignment(p.k_theta, j, *th);
            *th = (*th + drift * dt + theta_amp * xi).wrap_angle();
            *w = *w + relax * (wbar - *w) + omega_amp * xi_w;
        });
}
