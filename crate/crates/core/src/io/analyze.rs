//! Post-processing of a snapshot directory.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::{parse_config_with, ModelConfig, ParseOptions};
use super::snapshot::{list_snapshots, read_snapshot, Snapshot};
use crate::diagnostics::{classify_pattern, mean_direction, Classification, FieldSample, OrderTimeSeries, PatternThresholds};
use crate::error::{Error, Result};
use crate::macrosim::sample_grid;

/// Name of the full-resolution diagnostics written next to the snapshots.
pub const SERIES_FILE: &str = "series.json";
/// Name of the configuration copy written next to the snapshots.
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotKind {
    Micro,
    Macro,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    /// Bins per side for particle snapshots; default: one per interaction
    /// radius when a config copy is present, else `round(L / 2)`.
    pub bins: Option<usize>,
    pub thresholds: PatternThresholds,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub kind: SnapshotKind,
    pub snapshots: usize,
    /// Whether `series` came from the run's own diagnostics file rather
    /// than from the snapshots.
    pub series_from_run: bool,
    pub series: OrderTimeSeries<f64>,
    pub pattern: String,
    pub classification: Classification<f64>,
}

fn micro_bins(dir: &Path, length: f64) -> usize {
    let from_config = fs::read_to_string(dir.join(CONFIG_FILE))
        .ok()
        .and_then(|text| parse_config_with(&text, ParseOptions { allow_stiff: true }).ok())
        .and_then(|cfg| match cfg.model {
            ModelConfig::Micro { params, .. } => Some(crate::microsim::default_bins(&params)),
            ModelConfig::Macro { .. } => None,
        });
    from_config.unwrap_or(((length / 2.0).round() as usize).max(1))
}

/// Reads every snapshot in `dir`, rebuilds the order-parameter series and
/// classifies the final window.
pub fn analyze_dir(dir: &Path, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let paths = list_snapshots(dir)?;
    if paths.is_empty() {
        return Err(Error::Snapshot(format!("no snapshot files in {}", dir.display())));
    }
    let mut series = OrderTimeSeries::new();
    let mut fields: Vec<FieldSample<f64>> = Vec::new();
    let mut kind = None;
    let mut bins = opts.bins;
    for path in &paths {
        let snap = read_snapshot(path)?;
        let this_kind = match snap {
            Snapshot::Micro(_) => SnapshotKind::Micro,
            Snapshot::Macro(_) => SnapshotKind::Macro,
        };
        if *kind.get_or_insert(this_kind) != this_kind {
            return Err(Error::Snapshot(format!("{} mixes particle and grid snapshots", dir.display())));
        }
        let field = match &snap {
            Snapshot::Micro(s) => {
                let e = &s.ensemble;
                let b = *bins.get_or_insert_with(|| micro_bins(dir, e.length));
                let f = FieldSample::from_particles(s.t, b, e.length, &e.pos, &e.theta, &e.omega);
                let (polar, angle) = mean_direction(e.theta.iter().map(|&th| (1.0, th.cos(), th.sin())));
                series.push(s.t, polar, angle, e.mean_omega(), f.density_variance());
                Some(f)
            }
            Snapshot::Macro(g) => {
                let state = g.to_state();
                let (polar, angle) =
                    mean_direction((0..g.rho.len()).map(|c| (g.rho[c], g.dir[c][0], g.dir[c][1])));
                let n = g.rho.len() as f64;
                let mean = g.rho.iter().sum::<f64>() / n;
                let var = g.rho.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
                series.push(g.t, polar, angle, state.mean_omega(), var / (mean * mean));
                sample_grid(g.t, &state, opts.bins.unwrap_or(0))
            }
        };
        fields.extend(field);
    }

    let mut series_from_run = false;
    if let Ok(text) = fs::read_to_string(dir.join(SERIES_FILE)) {
        let run_series: OrderTimeSeries<f64> =
            serde_json::from_str(&text).map_err(|e| Error::Snapshot(format!("{SERIES_FILE}: {e}")))?;
        if run_series.is_consistent() && !run_series.is_empty() {
            series = run_series;
            series_from_run = true;
        }
    }
    let classification = classify_pattern(&series, &fields, &opts.thresholds);
    Ok(AnalysisReport {
        kind: kind.unwrap(),
        snapshots: paths.len(),
        series_from_run,
        series,
        pattern: classification.pattern.to_string(),
        classification,
    })
}
