use serde::Serialize;

use super::init::MacroInitSpec;
use super::params::MacroParams;
use super::scheme::{conservative_step, relaxation_step, source_step};
use super::state::MacroState;
use crate::diagnostics::{mean_direction, FieldSample, OrderTimeSeries};
use crate::error::{Error, Result};
use crate::microsim::RunOptions;
use crate::scalar::Real;
use crate::sink::{SnapshotRef, SnapshotSink};

#[derive(Debug, Clone, Serialize)]
pub struct MacroRunSummary<T> {
    pub steps: usize,
    pub final_time: T,
    pub final_polar_order: T,
    pub final_mean_omega: T,
    /// Mass-weighted order parameters at the diagnostic times.
    pub series: OrderTimeSeries<T>,
    pub total_mass: Vec<T>,
    pub total_angular_momentum: Vec<T>,
    /// Largest `| |Omega| - 1 |` seen after any full step.
    pub max_unit_defect: T,
    /// Interfaces (summed over sweeps and steps) that used the Rusanov flux.
    pub fallback_interfaces: usize,
    #[serde(skip)]
    pub fields: Vec<FieldSample<T>>,
    #[serde(skip)]
    pub final_state: MacroState<T>,
}

/// Aggregates the grid into `bins x bins` blocks; `bins = 0`, or a value
/// that does not divide the grid, keeps the native cells. Needs `nx = ny`.
pub fn sample_grid<T: Real>(t: T, s: &MacroState<T>, bins: usize) -> Option<FieldSample<T>> {
    if s.nx != s.ny {
        return None;
    }
    let bins = if bins == 0 || s.nx % bins != 0 { s.nx } else { bins };
    let block = s.nx / bins;
    let area = s.dx * s.dy;
    let mut f = FieldSample::empty(t, bins, s.length(), false);
    for j in 0..s.ny {
        for i in 0..s.nx {
            let c = s.idx(i, j);
            let b = (j / block) * bins + i / block;
            let m = s.rho[c] * area;
            let d = s.direction(c);
            f.mass[b] += m;
            f.dir_sum[b][0] += m * d[0];
            f.dir_sum[b][1] += m * d[1];
            f.omega_sum[b] += s.m_omega[c] * area;
        }
    }
    Some(f)
}

fn record<T: Real>(series: &mut OrderTimeSeries<T>, t: T, s: &MacroState<T>) {
    let (polar, angle) = mean_direction((0..s.cells()).map(|c| (s.rho[c], s.m_dir[c][0] / s.rho[c], s.m_dir[c][1] / s.rho[c])));
    let n = T::from_usize_lossy(s.cells());
    let mean = s.rho.iter().copied().sum::<T>() / n;
    let var = s.rho.iter().map(|&r| (r - mean) * (r - mean)).sum::<T>() / n;
    series.push(t, polar, angle, s.mean_omega(), var / (mean * mean));
}

/// Integrates the hydrodynamic model from `init` to `p.t_end`.
pub fn run_macro<T: Real>(
    p: &MacroParams<T>,
    init: &MacroInitSpec<T>,
    sink: &mut dyn SnapshotSink<T>,
    opts: &RunOptions<T>,
) -> Result<MacroRunSummary<T>> {
    p.validate()?;
    let state = init.build(p.nx, p.ny, p.length, p.pressure_coef, p.seed)?;
    run_macro_from(p, state, sink, opts)
}

/// As [`run_macro`], starting from a given state.
pub fn run_macro_from<T: Real>(
    p: &MacroParams<T>,
    mut s: MacroState<T>,
    sink: &mut dyn SnapshotSink<T>,
    opts: &RunOptions<T>,
) -> Result<MacroRunSummary<T>> {
    p.validate()?;
    if s.nx != p.nx || s.ny != p.ny {
        return Err(Error::validation("nx", format!("state grid {}x{} differs from params {}x{}", s.nx, s.ny, p.nx, p.ny)));
    }
    s.check()?;
    let steps = p.steps();
    let snap_stride = opts.snapshot_every.map(|e| RunOptions::stride(e, p.dt));
    let diag_stride = RunOptions::stride(opts.diag_every, p.dt);
    let field_stride = RunOptions::stride(opts.field_every, p.dt);
    let mut series = OrderTimeSeries::new();
    let mut total_mass = Vec::new();
    let mut total_angular_momentum = Vec::new();
    let mut fields = Vec::new();
    let mut max_unit_defect = T::zero();
    let mut fallback_interfaces = 0;

    for k in 0..=steps {
        let t = p.dt * T::from_usize_lossy(k);
        if k > 0 {
            let stats = conservative_step(&mut s, p)
                .and_then(|st| relaxation_step(&mut s).map(|_| st))
                .map_err(|e| e.at_time(t.as_f64()))?;
            source_step(&mut s, p.dt);
            fallback_interfaces += stats.fallbacks;
            max_unit_defect = max_unit_defect.max(s.max_unit_defect());
        }
        let last = k == steps;
        if k % diag_stride == 0 || last {
            record(&mut series, t, &s);
            total_mass.push(s.total_mass());
            total_angular_momentum.push(s.total_angular_momentum());
        }
        if t >= opts.field_from && (k % field_stride == 0 || last) {
            fields.extend(sample_grid(t, &s, opts.field_bins));
        }
        let snap = match snap_stride {
            Some(st) => k % st == 0 || last,
            None => k == 0 || last,
        };
        if snap {
            sink.write(t, SnapshotRef::Macro(&s))?;
        }
    }
    Ok(MacroRunSummary {
        steps,
        final_time: p.dt * T::from_usize_lossy(steps),
        final_polar_order: *series.polar_order.last().unwrap(),
        final_mean_omega: s.mean_omega(),
        series,
        total_mass,
        total_angular_momentum,
        max_unit_defect,
        fallback_interfaces,
        fields,
        final_state: s,
    })
}
