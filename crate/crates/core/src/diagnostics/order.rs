use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Magnitude of the mean heading vector of the given angles.
pub fn polar_order<T: Real>(theta: &[T]) -> T {
    mean_direction(theta.iter().map(|&t| (T::one(), t.cos(), t.sin()))).0
}

/// Mass-weighted polar order of a direction field. `dirs` need not be unit
/// vectors; they are normalized before averaging.
pub fn polar_order_weighted<T: Real>(weights: &[T], dirs: &[[T; 2]]) -> T {
    mean_direction(weights.iter().zip(dirs).map(|(&w, d)| {
        let n = d[0].hypot(d[1]);
        if n > T::zero() {
            (w, d[0] / n, d[1] / n)
        } else {
            (w, T::zero(), T::zero())
        }
    }))
    .0
}

/// `(|m|, arg m)` of the weighted mean `m` of unit vectors, given as
/// `(weight, cos, sin)` triples.
pub fn mean_direction<T: Real>(items: impl Iterator<Item = (T, T, T)>) -> (T, T) {
    let (mut w, mut cx, mut cy) = (T::zero(), T::zero(), T::zero());
    for (wi, c, s) in items {
        w += wi;
        cx += wi * c;
        cy += wi * s;
    }
    if w <= T::zero() {
        return (T::zero(), T::zero());
    }
    let (cx, cy) = (cx / w, cy / w);
    (cx.hypot(cy).min(T::one()), cy.atan2(cx))
}

/// Diagnostics sampled along a run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OrderTimeSeries<T> {
    pub times: Vec<T>,
    pub polar_order: Vec<T>,
    /// Angle of the global mean direction, unwrapped in time.
    pub global_angle: Vec<T>,
    pub mean_omega: Vec<T>,
    /// Normalized density variance; see [`super::field::FieldSample::density_variance`].
    pub density_variance: Vec<T>,
}

impl<T: Real> OrderTimeSeries<T> {
    pub fn new() -> Self {
        Self {
            times: Vec::new(),
            polar_order: Vec::new(),
            global_angle: Vec::new(),
            mean_omega: Vec::new(),
            density_variance: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends a sample; `angle` is any representative of the global
    /// direction and is unwrapped against the previous sample.
    pub fn push(&mut self, t: T, polar: T, angle: T, mean_omega: T, density_variance: T) {
        let angle = match self.global_angle.last() {
            Some(&prev) => prev + (angle - prev).wrap_angle(),
            None => angle,
        };
        self.times.push(t);
        self.polar_order.push(polar);
        self.global_angle.push(angle);
        self.mean_omega.push(mean_omega);
        self.density_variance.push(density_variance);
    }

    /// Samples with `t >= t_from`.
    pub fn since(&self, t_from: T) -> Self {
        let k = self.times.iter().position(|&t| t >= t_from).unwrap_or(self.len());
        Self {
            times: self.times[k..].to_vec(),
            polar_order: self.polar_order[k..].to_vec(),
            global_angle: self.global_angle[k..].to_vec(),
            mean_omega: self.mean_omega[k..].to_vec(),
            density_variance: self.density_variance[k..].to_vec(),
        }
    }

    /// The trailing `fraction` of the time span.
    pub fn tail(&self, fraction: T) -> Self {
        match (self.times.first(), self.times.last()) {
            (Some(&a), Some(&b)) => self.since(b - (b - a) * fraction),
            _ => self.clone(),
        }
    }

    /// All lists share one length and the polar order lies in `[0, 1]`.
    pub fn is_consistent(&self) -> bool {
        let n = self.times.len();
        [self.polar_order.len(), self.global_angle.len(), self.mean_omega.len(), self.density_variance.len()]
            .iter()
            .all(|&m| m == n)
            && self.polar_order.iter().all(|&p| p >= T::zero() && p <= T::one())
    }
}
