use serde::Serialize;

use super::ensemble::{InitSpec, ParticleEnsemble};
use super::params::MicroParams;
use super::step::{em_step, RngState};
use crate::diagnostics::{mean_direction, FieldSample, OrderTimeSeries};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sink::{SnapshotRef, SnapshotSink};

/// Output cadence of a run. Intervals are rounded to whole steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions<T> {
    /// `None` writes only the initial and final state.
    pub snapshot_every: Option<T>,
    pub diag_every: T,
    /// Side of the diagnostic binning grid; `0` picks one bin per
    /// interaction radius (micro) or the native grid (macro).
    pub field_bins: usize,
    /// Binned fields are kept from this time on.
    pub field_from: T,
    pub field_every: T,
}

impl<T: Real> Default for RunOptions<T> {
    fn default() -> Self {
        Self {
            snapshot_every: None,
            diag_every: T::lit(0.1),
            field_bins: 0,
            field_from: T::infinity(),
            field_every: T::one(),
        }
    }
}

impl<T: Real> RunOptions<T> {
    pub(crate) fn stride(every: T, dt: T) -> usize {
        (every / dt).round().to_usize().unwrap_or(1).max(1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MicroRunSummary<T> {
    pub steps: usize,
    pub final_time: T,
    pub final_polar_order: T,
    pub final_mean_omega: T,
    pub series: OrderTimeSeries<T>,
    #[serde(skip)]
    pub fields: Vec<FieldSample<T>>,
    #[serde(skip)]
    pub final_state: ParticleEnsemble<T>,
}

/// One bin per interaction radius, at least one.
pub fn default_bins<T: Real>(p: &MicroParams<T>) -> usize {
    (p.length / p.radius()).round().to_usize().unwrap_or(1).max(1)
}

pub(crate) fn sample_fields<T: Real>(t: T, ens: &ParticleEnsemble<T>, bins: usize) -> FieldSample<T> {
    FieldSample::from_particles(t, bins, ens.length, &ens.pos, &ens.theta, &ens.omega)
}

fn record<T: Real>(series: &mut OrderTimeSeries<T>, t: T, ens: &ParticleEnsemble<T>, bins: usize) {
    let (polar, angle) = mean_direction(ens.theta.iter().map(|&th| (T::one(), th.cos(), th.sin())));
    let dv = sample_fields(t, ens, bins).density_variance();
    series.push(t, polar, angle, ens.mean_omega(), dv);
}

/// Integrates the particle model from `init` to `p.t_end`.
pub fn run_micro<T: Real>(
    p: &MicroParams<T>,
    init: &InitSpec<T>,
    sink: &mut dyn SnapshotSink<T>,
    opts: &RunOptions<T>,
) -> Result<MicroRunSummary<T>> {
    p.validate()?;
    let ens = init.build(p.n, p.length, p.seed)?;
    run_micro_from(p, ens, sink, opts)
}

/// As [`run_micro`], starting from a given ensemble.
pub fn run_micro_from<T: Real>(
    p: &MicroParams<T>,
    mut ens: ParticleEnsemble<T>,
    sink: &mut dyn SnapshotSink<T>,
    opts: &RunOptions<T>,
) -> Result<MicroRunSummary<T>> {
    p.validate()?;
    if ens.len() != p.n {
        return Err(Error::validation("n", format!("ensemble has {} particles, params say {}", ens.len(), p.n)));
    }
    let steps = p.steps();
    let bins = if opts.field_bins == 0 { default_bins(p) } else { opts.field_bins };
    let snap_stride = opts.snapshot_every.map(|e| RunOptions::stride(e, p.dt));
    let diag_stride = RunOptions::stride(opts.diag_every, p.dt);
    let field_stride = RunOptions::stride(opts.field_every, p.dt);
    let mut rng = RngState::new(p.seed, p.n);
    let mut series = OrderTimeSeries::new();
    let mut fields = Vec::new();

    for k in 0..=steps {
        if k > 0 {
            em_step(&mut ens, p, &mut rng);
            if !ens.is_finite() {
                return Err(Error::numerical((p.dt * T::from_usize_lossy(k)).as_f64(), "non-finite particle state"));
            }
        }
        let t = p.dt * T::from_usize_lossy(k);
        let last = k == steps;
        if k % diag_stride == 0 || last {
            record(&mut series, t, &ens, bins);
        }
        if t >= opts.field_from && (k % field_stride == 0 || last) {
            fields.push(sample_fields(t, &ens, bins));
        }
        let snap = match snap_stride {
            Some(s) => k % s == 0 || last,
            None => k == 0 || last,
        };
        if snap {
            sink.write(t, SnapshotRef::Micro(&ens))?;
        }
    }
    let final_time = p.dt * T::from_usize_lossy(steps);
    Ok(MicroRunSummary {
        steps,
        final_time,
        final_polar_order: *series.polar_order.last().unwrap(),
        final_mean_omega: ens.mean_omega(),
        series,
        fields,
        final_state: ens,
    })
}
