//! Configuration files, snapshot persistence and directory analysis.

pub mod analyze;
pub mod config;
pub mod snapshot;

pub use analyze::{analyze_dir, AnalysisReport, AnalyzeOptions, SnapshotKind, CONFIG_FILE, SERIES_FILE};
pub use config::{emit_config, parse_config, parse_config_with, Mode, ModelConfig, OutputConfig, ParseOptions, RunConfig};
pub use snapshot::{
    checksum, format_macro, format_micro, list_snapshots, parse_snapshot, read_snapshot, write_snapshot, DirSink,
    GridSnapshot, ParticleSnapshot, Snapshot,
};
