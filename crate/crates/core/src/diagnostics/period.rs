use serde::Serialize;

use super::order::OrderTimeSeries;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodOptions {
    /// No coherent global direction below this mean polar order.
    pub min_polar: f64,
    /// Data must span at least this many periods.
    pub min_periods: f64,
    pub min_confidence: f64,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        Self {
            min_polar: 0.5,
            min_periods: 4.0,
            min_confidence: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodEstimate<T> {
    pub period: T,
    /// Signed rotation rate of the global direction.
    pub angular_velocity: T,
    /// `1 - rms(residual) / pi` of the linear fit, clamped to `[0, 1]`.
    pub confidence: T,
}

/// Period of the global rotation, `2 pi / |slope|` of a least-squares line
/// through the unwrapped global angle.
pub fn detect_period<T: Real>(series: &OrderTimeSeries<T>, opts: &PeriodOptions) -> Option<PeriodEstimate<T>> {
    let n = series.len();
    if n < 3 {
        return None;
    }
    let nn = T::from_usize_lossy(n);
    let mean_polar = series.polar_order.iter().copied().sum::<T>() / nn;
    if mean_polar.as_f64() < opts.min_polar {
        return None;
    }
    let tm = series.times.iter().copied().sum::<T>() / nn;
    let am = series.global_angle.iter().copied().sum::<T>() / nn;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (&t, &a) in series.times.iter().zip(&series.global_angle) {
        sxx += (t - tm) * (t - tm);
        sxy += (t - tm) * (a - am);
    }
    if sxx <= T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    if slope == T::zero() || !slope.is_finite() {
        return None;
    }
    let ss: T = series
        .times
        .iter()
        .zip(&series.global_angle)
        .map(|(&t, &a)| {
            let r = a - (am + slope * (t - tm));
            r * r
        })
        .sum();
    let rms = (ss / nn).sqrt();
    let confidence = (T::one() - rms / T::PI()).max(T::zero());
    let period = T::TAU() / slope.abs();
    let span = series.times[n - 1] - series.times[0];
    if span.as_f64() < opts.min_periods * period.as_f64() || confidence.as_f64() < opts.min_confidence {
        return None;
    }
    Some(PeriodEstimate {
        period,
        angular_velocity: slope,
        confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(f: impl Fn(f64) -> (f64, f64), n: usize, dt: f64) -> OrderTimeSeries<f64> {
        let mut s = OrderTimeSeries::new();
        for k in 0..n {
            let t = k as f64 * dt;
            let (polar, angle) = f(t);
            s.push(t, polar, angle.wrap_angle(), 0.0, 0.0);
        }
        s
    }

    #[test]
    fn constant_rate() {
        let s = series(|t| (1.0, 0.3 + 5.0 * t), 1000, 0.01);
        let p = detect_period(&s, &PeriodOptions::default()).unwrap();
        assert!((p.period - 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-10);
        assert!((p.confidence - 1.0).abs() < 1e-9);
        assert!((p.angular_velocity - 5.0).abs() < 1e-10);
    }

    #[test]
    fn white_noise_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = series(|_| (0.0, 0.0), 10, 1.0);
        assert!(detect_period(&s, &PeriodOptions::default()).is_none());
        let mut noise = OrderTimeSeries::new();
        for k in 0..1000 {
            let a: f64 = rng.random::<f64>() * 6.283 - 3.14;
            noise.push(k as f64, 0.02, a, 0.0, 0.0);
        }
        assert!(detect_period(&noise, &PeriodOptions::default()).is_none());
        // Coherent polar order but a random-walk angle: residual too large.
        let mut walk = OrderTimeSeries::new();
        for k in 0..1000 {
            let a: f64 = rng.random::<f64>() * 6.283 - 3.14;
            walk.push(k as f64, 1.0, a, 0.0, 0.0);
        }
        assert!(detect_period(&walk, &PeriodOptions::default()).is_none());
    }

    #[test]
    fn too_short_window() {
        let s = series(|t| (1.0, t), 100, 0.1);
        assert!(detect_period(&s, &PeriodOptions::default()).is_none());
    }
}
