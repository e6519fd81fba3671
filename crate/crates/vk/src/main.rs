use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use log::{info, warn};

use vk_core::io::{
    analyze_dir, emit_config, parse_config_with, AnalyzeOptions, DirSink, ModelConfig, ParseOptions, RunConfig,
    CONFIG_FILE, SERIES_FILE,
};
use vk_core::macrosim::run_macro;
use vk_core::microsim::{run_micro, STIFFNESS_GUARD};
use vk_core::{ClosureCoefficients, Error, OrderTimeSeries};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "vk", version, about = "Vicsek-Kuramoto particle and hydrodynamic simulations")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, env = "VK_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the particle model.
    Micro {
        #[arg(long)]
        config: PathBuf,
        /// Run even when dt * max(k_theta, k_omega) exceeds the stability guard.
        #[arg(long)]
        allow_stiff: bool,
    },
    /// Run the hydrodynamic model.
    Macro {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the closure coefficients at concentration kappa as JSON.
    Coeffs {
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
    },
    /// Classify the run stored in a snapshot directory.
    Analyze {
        dir: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Bins per side for particle snapshots.
        #[arg(long)]
        bins: Option<usize>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_config() => EXIT_CONFIG,
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_FAILURE,
    }
}

fn load_config(path: &Path, opts: ParseOptions) -> anyhow::Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_config_with(&text, opts)?)
}

fn prepare_output(cfg: &RunConfig) -> anyhow::Result<DirSink> {
    let sink = DirSink::create(&cfg.output.dir)?;
    let path = sink.dir().join(CONFIG_FILE);
    fs::write(&path, emit_config(cfg)).with_context(|| format!("writing {}", path.display()))?;
    Ok(sink)
}

fn write_series(dir: &Path, series: &OrderTimeSeries) -> anyhow::Result<()> {
    let path = dir.join(SERIES_FILE);
    fs::write(&path, serde_json::to_string(series)?).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_micro(config: &Path, allow_stiff: bool) -> anyhow::Result<()> {
    let cfg = load_config(config, ParseOptions { allow_stiff })?;
    let ModelConfig::Micro { params, init } = &cfg.model else {
        return Err(Error::Validation {
            field: "mode".into(),
            msg: "`vk micro` needs mode = \"micro\"".into(),
        }
        .into());
    };
    if params.stiffness() > STIFFNESS_GUARD {
        warn!(
            "dt * max(k_theta, k_omega) = {} exceeds the stability guard {STIFFNESS_GUARD}; running anyway",
            params.stiffness()
        );
    }
    let mut sink = prepare_output(&cfg)?;
    let summary = run_micro(params, init, &mut sink, &cfg.run_options())?;
    write_series(sink.dir(), &summary.series)?;
    info!("wrote {} snapshots to {}", sink.written(), sink.dir().display());
    println!(
        "t = {}  polar order = {:.6}  mean omega = {:.6}",
        summary.final_time, summary.final_polar_order, summary.final_mean_omega
    );
    Ok(())
}

fn cmd_macro(config: &Path) -> anyhow::Result<()> {
    let cfg = load_config(config, ParseOptions::default())?;
    let ModelConfig::Macro { params, init } = &cfg.model else {
        return Err(Error::Validation {
            field: "mode".into(),
            msg: "`vk macro` needs mode = \"macro\"".into(),
        }
        .into());
    };
    let mut sink = prepare_output(&cfg)?;
    let summary = run_macro(params, init, &mut sink, &cfg.run_options())?;
    write_series(sink.dir(), &summary.series)?;
    if summary.fallback_interfaces > 0 {
        info!("{} interface fluxes used the Rusanov fallback", summary.fallback_interfaces);
    }
    info!("wrote {} snapshots to {}", sink.written(), sink.dir().display());
    println!(
        "t = {}  polar order = {:.6}  mean omega = {:.6}",
        summary.final_time, summary.final_polar_order, summary.final_mean_omega
    );
    Ok(())
}

fn cmd_coeffs(kappa: f64) -> anyhow::Result<()> {
    let c = ClosureCoefficients::compute(kappa)?;
    println!("{}", serde_json::to_string(&c)?);
    Ok(())
}

fn cmd_analyze(dir: &Path, json: bool, bins: Option<usize>) -> anyhow::Result<()> {
    let opts = AnalyzeOptions {
        bins,
        ..Default::default()
    };
    let report = analyze_dir(dir, &opts)?;
    if json {
        println!("{}", serde_json::to_string(&report)?);
        return Ok(());
    }
    let m = &report.classification.metrics;
    println!("pattern: {}", report.pattern);
    println!("snapshots: {}", report.snapshots);
    println!("polar order: {:.4}", m.polar_order);
    println!("density variance: {:.4}", m.density_variance);
    println!("wave fraction: {:.4}", m.wave_fraction);
    println!("local rotation: {:.4}", m.local_rotation);
    match &m.period {
        Some(p) => println!("period: {:.6} (confidence {:.3})", p.period, p.confidence),
        None => println!("period: none"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Micro { config, allow_stiff } => cmd_micro(&config, allow_stiff),
        Command::Macro { config } => cmd_macro(&config),
        Command::Coeffs { kappa } => cmd_coeffs(kappa),
        Command::Analyze { dir, json, bins } => cmd_analyze(&dir, json, bins),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
