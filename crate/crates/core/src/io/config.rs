//! Run configuration: a flat TOML file with `[micro]` or `[macro]`, `[init]`
//! and `[output]` sections plus the top-level keys `mode` and `seed`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::coefficients::ClosureCoefficients;
use crate::error::{Error, Result};
use crate::macrosim::{MacroInitSpec, MacroParams};
use crate::microsim::{InitSpec, KernelSpec, MicroParams, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Micro,
    Macro,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    Micro { params: MicroParams<f64>, init: InitSpec<f64> },
    Macro { params: MacroParams<f64>, init: MacroInitSpec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub snapshot_every: f64,
    pub diag_every: f64,
    /// `0` picks the default binning.
    pub field_bins: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub model: ModelConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Output cadence for the run loop. Fields for classification are
    /// sampled over the last tenth of the run.
    pub fn run_options(&self) -> RunOptions<f64> {
        let t_end = match &self.model {
            ModelConfig::Micro { params, .. } => params.t_end,
            ModelConfig::Macro { params, .. } => params.t_end,
        };
        RunOptions {
            snapshot_every: Some(self.output.snapshot_every),
            diag_every: self.output.diag_every,
            field_bins: self.output.field_bins,
            field_from: 0.9 * t_end,
            field_every: self.output.snapshot_every.min(t_end.max(f64::MIN_POSITIVE)),
        }
    }
}

/// Switches applied on top of the file contents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Same as `allow_stiff = true` in `[micro]`.
    pub allow_stiff: bool,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    micro: Option<RawMicro>,
    #[serde(rename = "macro", skip_serializing_if = "Option::is_none")]
    macro_: Option<RawMacro>,
    #[serde(skip_serializing_if = "Option::is_none")]
    init: Option<toml::Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMicro {
    n: Option<usize>,
    c: Option<f64>,
    k_theta: Option<f64>,
    k_omega: Option<f64>,
    alpha2: Option<f64>,
    beta2: Option<f64>,
    radius: Option<f64>,
    length: Option<f64>,
    dt: Option<f64>,
    t_end: Option<f64>,
    allow_stiff: Option<bool>,
    step_halving: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMacro {
    kappa: Option<f64>,
    pressure_coef: Option<f64>,
    dt: Option<f64>,
    nx: Option<usize>,
    ny: Option<usize>,
    length: Option<f64>,
    t_end: Option<f64>,
    cfl_max: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    snapshot_every: Option<f64>,
    diag_every: Option<f64>,
    field_bins: Option<usize>,
}

fn required<V>(v: Option<V>, field: &str) -> Result<V> {
    v.ok_or_else(|| Error::validation(field, "missing required key"))
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn parse_error(text: &str, e: toml::de::Error) -> Error {
    let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(0);
    Error::ConfigParse {
        line,
        msg: e.message().to_string(),
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, ParseOptions::default())
}

pub fn parse_config_with(text: &str, opts: ParseOptions) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    let mode = required(raw.mode, "mode")?;
    let seed = raw.seed.unwrap_or(0);
    let init_table = raw.init.unwrap_or_default();
    let init_value = toml::Value::Table(init_table.clone());
    let model = match mode {
        Mode::Micro => {
            if raw.macro_.is_some() {
                return Err(Error::validation("macro", "section not allowed with mode = \"micro\""));
            }
            let m = required(raw.micro, "micro")?;
            let params = MicroParams {
                n: required(m.n, "n")?,
                c: required(m.c, "c")?,
                k_theta: required(m.k_theta, "k_theta")?,
                k_omega: required(m.k_omega, "k_omega")?,
                alpha2: required(m.alpha2, "alpha2")?,
                beta2: required(m.beta2, "beta2")?,
                kernel: KernelSpec::indicator(required(m.radius, "radius")?),
                length: required(m.length, "length")?,
                dt: required(m.dt, "dt")?,
                t_end: required(m.t_end, "t_end")?,
                seed,
                allow_stiff: m.allow_stiff.unwrap_or(false) || opts.allow_stiff,
                step_halving: m.step_halving.unwrap_or(false),
            };
            params.validate()?;
            let init: InitSpec<f64> = if init_table.is_empty() {
                InitSpec::default()
            } else {
                init_value.try_into().map_err(|e: toml::de::Error| Error::validation("init", e.message().to_string()))?
            };
            init.validate()?;
            ModelConfig::Micro { params, init }
        }
        Mode::Macro => {
            if raw.micro.is_some() {
                return Err(Error::validation("micro", "section not allowed with mode = \"macro\""));
            }
            let m = required(raw.macro_, "macro")?;
            let kappa = required(m.kappa, "kappa")?;
            if !(kappa > 0.0) || !kappa.is_finite() {
                return Err(Error::validation("kappa", "must be finite and > 0"));
            }
            let nx = required(m.nx, "nx")?;
            let params = MacroParams {
                coeffs: ClosureCoefficients::compute(kappa)?,
                pressure_coef: m.pressure_coef.unwrap_or(1.0 / kappa),
                dt: required(m.dt, "dt")?,
                nx,
                ny: m.ny.unwrap_or(nx),
                length: required(m.length, "length")?,
                t_end: required(m.t_end, "t_end")?,
                cfl_max: m.cfl_max.unwrap_or(0.9),
                seed,
            };
            params.validate()?;
            let init: MacroInitSpec<f64> = if init_table.is_empty() {
                MacroInitSpec::default()
            } else {
                init_value.try_into().map_err(|e: toml::de::Error| Error::validation("init", e.message().to_string()))?
            };
            init.validate()?;
            ModelConfig::Macro { params, init }
        }
    };
    let out = required(raw.output, "output")?;
    let output = OutputConfig {
        dir: required(out.dir, "dir")?,
        snapshot_every: required(out.snapshot_every, "snapshot_every")?,
        diag_every: out.diag_every.unwrap_or(0.1),
        field_bins: out.field_bins.unwrap_or(0),
    };
    if !(output.snapshot_every > 0.0) || !output.snapshot_every.is_finite() {
        return Err(Error::validation("snapshot_every", "must be finite and > 0"));
    }
    if !(output.diag_every > 0.0) || !output.diag_every.is_finite() {
        return Err(Error::validation("diag_every", "must be finite and > 0"));
    }
    Ok(RunConfig { mode, seed, model, output })
}

/// Writes `cfg` back to the config format. The result parses to an equal
/// configuration.
pub fn emit_config(cfg: &RunConfig) -> String {
    let mut raw = RawConfig {
        mode: Some(cfg.mode),
        seed: Some(cfg.seed),
        ..Default::default()
    };
    match &cfg.model {
        ModelConfig::Micro { params: p, init } => {
            raw.micro = Some(RawMicro {
                n: Some(p.n),
                c: Some(p.c),
                k_theta: Some(p.k_theta),
                k_omega: Some(p.k_omega),
                alpha2: Some(p.alpha2),
                beta2: Some(p.beta2),
                radius: Some(p.kernel.radius),
                length: Some(p.length),
                dt: Some(p.dt),
                t_end: Some(p.t_end),
                allow_stiff: Some(p.allow_stiff),
                step_halving: Some(p.step_halving),
            });
            raw.init = Some(toml::Table::try_from(init).expect("init spec is a table"));
        }
        ModelConfig::Macro { params: p, init } => {
            raw.macro_ = Some(RawMacro {
                kappa: Some(p.coeffs.kappa),
                pressure_coef: Some(p.pressure_coef),
                dt: Some(p.dt),
                nx: Some(p.nx),
                ny: Some(p.ny),
                length: Some(p.length),
                t_end: Some(p.t_end),
                cfl_max: Some(p.cfl_max),
            });
            raw.init = Some(toml::Table::try_from(init).expect("init spec is a table"));
        }
    }
    raw.output = Some(RawOutput {
        dir: Some(cfg.output.dir.clone()),
        snapshot_every: Some(cfg.output.snapshot_every),
        diag_every: Some(cfg.output.diag_every),
        field_bins: Some(cfg.output.field_bins),
    });
    toml::to_string(&raw).expect("config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MICRO: &str = r#"
mode = "micro"
seed = 7

[micro]
n = 100
c = 1.0
k_theta = 10.0
k_omega = 10.0
alpha2 = 0.125
beta2 = 0.125
radius = 2.0
length = 20.0
dt = 0.01
t_end = 1.0

[init]
kind = "aligned"
theta0 = 0.5
omega0 = 1.0

[output]
dir = "out"
snapshot_every = 0.5
"#;

    #[test]
    fn parses_micro() {
        let cfg = parse_config(MICRO).unwrap();
        match &cfg.model {
            ModelConfig::Micro { params, init } => {
                assert_eq!(params.n, 100);
                assert_eq!(params.seed, 7);
                assert_eq!(*init, InitSpec::Aligned { theta0: 0.5, omega0: 1.0 });
            }
            _ => panic!("wrong mode"),
        }
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = MICRO.replace("dt = 0.01", "dt = 0.01\nbogus = 3");
        match parse_config(&text).unwrap_err() {
            Error::ConfigParse { line, msg } => {
                assert_eq!(line, 15, "{msg}");
                assert!(msg.contains("bogus"), "{msg}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn missing_dt_is_named() {
        let text = MICRO.replace("dt = 0.01\n", "");
        match parse_config(&text).unwrap_err() {
            Error::Validation { field, .. } => assert_eq!(field, "dt"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn emit_round_trips() {
        let cfg = parse_config(MICRO).unwrap();
        assert_eq!(parse_config(&emit_config(&cfg)).unwrap(), cfg);
    }
}
