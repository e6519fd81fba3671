use serde::{Deserialize, Serialize};

use super::field::FieldSample;
use super::order::OrderTimeSeries;
use super::period::{detect_period, PeriodEstimate, PeriodOptions};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    RotatingClusters,
    TravelingWave,
    Synchronized,
    Disordered,
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pattern::RotatingClusters => "rotating_clusters",
            Pattern::TravelingWave => "traveling_wave",
            Pattern::Synchronized => "synchronized",
            Pattern::Disordered => "disordered",
        })
    }
}

/// Decision thresholds; all values are configurable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternThresholds {
    /// Steady-state window, as a fraction of the run.
    pub window_fraction: f64,
    /// Window handed to the period detector.
    pub period_window_fraction: f64,
    pub sync_polar: f64,
    /// Upper bound of the density variance of a spatially uniform state.
    pub uniform_density: f64,
    /// Lower bound of the density variance of a clustered state.
    pub cluster_density: f64,
    pub cluster_polar: f64,
    pub cluster_rotation: f64,
    /// Share of spectral energy in the dominant nonzero mode.
    pub wave_energy: f64,
    pub min_periods: f64,
    pub min_confidence: f64,
    pub min_polar_for_period: f64,
}

impl Default for PatternThresholds {
    fn default() -> Self {
        let p = PeriodOptions::default();
        Self {
            window_fraction: 0.1,
            period_window_fraction: 0.25,
            sync_polar: 0.9,
            uniform_density: 0.05,
            cluster_density: 0.3,
            cluster_polar: 0.5,
            cluster_rotation: 0.1,
            wave_energy: 0.5,
            min_periods: p.min_periods,
            min_confidence: p.min_confidence,
            min_polar_for_period: p.min_polar,
        }
    }
}

impl PatternThresholds {
    pub fn period_options(&self) -> PeriodOptions {
        PeriodOptions {
            min_polar: self.min_polar_for_period,
            min_periods: self.min_periods,
            min_confidence: self.min_confidence,
        }
    }
}

/// Raw metrics behind a classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternMetrics<T> {
    pub polar_order: T,
    pub density_variance: T,
    pub wave_fraction: T,
    pub local_rotation: T,
    pub period: Option<PeriodEstimate<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification<T> {
    pub pattern: Pattern,
    pub metrics: PatternMetrics<T>,
}

fn mean<T: Real>(v: impl Iterator<Item = T>) -> T {
    let (s, n) = v.fold((T::zero(), 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        T::zero()
    } else {
        s / T::from_usize_lossy(n)
    }
}

/// Labels the steady state of a run.
///
/// `fields` are the binned snapshots to examine; samples earlier than the
/// steady window of `series` are ignored. Rules, first match wins:
/// synchronized (coherent, periodic, uniform density), traveling wave
/// (uniform density, one dominant nonzero orientation mode), rotating
/// clusters (clustered, globally incoherent, locally rotating), disordered.
pub fn classify_pattern<T: Real>(
    series: &OrderTimeSeries<T>,
    fields: &[FieldSample<T>],
    th: &PatternThresholds,
) -> Classification<T> {
    let window = series.tail(T::lit(th.window_fraction));
    let t_from = window.times.first().copied().unwrap_or(T::neg_infinity());
    let steady: Vec<&FieldSample<T>> = fields.iter().filter(|f| f.t >= t_from).collect();

    let polar = mean(window.polar_order.iter().copied());
    let density_variance = if steady.is_empty() {
        mean(window.density_variance.iter().copied())
    } else {
        mean(steady.iter().map(|f| f.density_variance()))
    };
    let wave_fraction = mean(steady.iter().map(|f| f.wave_fraction()));
    let local_rotation = mean(steady.iter().map(|f| f.local_rotation()));
    let period = detect_period(&series.tail(T::lit(th.period_window_fraction)), &th.period_options());

    let metrics = PatternMetrics {
        polar_order: polar,
        density_variance,
        wave_fraction,
        local_rotation,
        period,
    };
    let uniform = density_variance.as_f64() < th.uniform_density;
    let pattern = if polar.as_f64() > th.sync_polar && period.is_some() && uniform {
        Pattern::Synchronized
    } else if uniform && wave_fraction.as_f64() > th.wave_energy {
        Pattern::TravelingWave
    } else if density_variance.as_f64() > th.cluster_density
        && polar.as_f64() < th.cluster_polar
        && local_rotation.as_f64() > th.cluster_rotation
    {
        Pattern::RotatingClusters
    } else {
        Pattern::Disordered
    };
    Classification { pattern, metrics }
}
