//! Experiment runner for the network disintegration toolkit.
//!
//! Configuration is a flat key-value file (`--config`); every key can also
//! be supplied or overridden on the command line. Exit codes: 0 success,
//! 1 configuration error, 2 runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use netdis_core::experiment::{
    emit_csv, emit_summary_json, emit_trace_csv, run_experiment, summarize, ConfigBuilder,
    ExperimentConfig, ExperimentReport, Mode,
};
use netdis_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "netdis",
    about = "Network disintegration experiments: NIPA, OAS, HDF and HBF attacks on synthetic and embedded networks",
    after_help = "Config file keys mirror the long flags (key = value per line, '#' comments).\n\
                  Command-line flags override config file values."
)]
struct Cli {
    /// Key-value config file
    #[arg(long)]
    config: Option<PathBuf>,

    /// Network: karate | example16 | ba | er | ws | `<edge-list path>`
    #[arg(long)]
    network: Option<String>,

    /// Node count for generated networks
    #[arg(long)]
    n: Option<usize>,

    /// Generator parameter m (BA edges per node, WS lattice degree)
    #[arg(long)]
    m: Option<usize>,

    /// BA seed-graph size m0
    #[arg(long)]
    m0: Option<usize>,

    /// Generator probability p (ER edge, WS rewiring; accepted and unused for BA)
    #[arg(long)]
    p: Option<f64>,

    /// Comma-separated strategies: NIPA,OAS,HDF,HBF,BruteForce
    #[arg(long)]
    strategy: Option<String>,

    /// single-q | curve-sweep | qc-search | alpha-scan | popsize-scan
    #[arg(long)]
    mode: Option<String>,

    /// Attack intensity for single-q mode
    #[arg(long)]
    q: Option<usize>,

    /// Q sweep as start:end:step for curve-sweep mode
    #[arg(long, value_name = "A:B:STEP")]
    q_range: Option<String>,

    /// Sweep every Q = 0..N (exact R instead of interpolated)
    #[arg(long)]
    full_resolution: bool,

    /// Reservation fraction for NIPA, in (0,1)
    #[arg(long)]
    alpha: Option<f64>,

    /// Population size for NIPA and OAS
    #[arg(long)]
    pop_size: Option<usize>,

    /// Iteration budget for NIPA and OAS
    #[arg(long)]
    iters: Option<usize>,

    /// OAS tabu list length
    #[arg(long)]
    tabu: Option<usize>,

    /// Independent repeats per strategy
    #[arg(long)]
    repeats: Option<u32>,

    /// Base seed; run seeds derive from (seed, strategy, repeat)
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for artifacts (otherwise artifacts go to stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Emit curve/qc/scan CSV
    #[arg(long)]
    csv: bool,

    /// Emit summary JSON
    #[arg(long)]
    json: bool,

    /// Record optimizer convergence traces (single-q mode)
    #[arg(long)]
    trace: bool,

    /// Collapse criterion: kappa | `s:<threshold>`
    #[arg(long)]
    collapse: Option<String>,

    /// Recompute betweenness after each removal in HBF
    #[arg(long)]
    adaptive_hbf: bool,

    /// Bias NIPA swap-outs towards low-probability attack nodes
    #[arg(long)]
    weighted_swap: bool,

    /// Edge-list files and emitted node ids are 1-based (default) or 0-based
    #[arg(long, value_name = "BOOL")]
    one_based: Option<bool>,

    /// Enumeration cap for the brute-force strategy
    #[arg(long)]
    cap: Option<u128>,
}

impl Cli {
    fn to_builder(&self) -> Result<ConfigBuilder, Error> {
        let mut builder = ConfigBuilder {
            network: self.network.clone(),
            n: self.n,
            m: self.m,
            m0: self.m0,
            p: self.p,
            q: self.q,
            alpha: self.alpha,
            pop_size: self.pop_size,
            iters: self.iters,
            tabu: self.tabu,
            repeats: self.repeats,
            seed: self.seed,
            one_based: self.one_based,
            cap: self.cap,
            out: self.out.as_ref().map(|p| p.display().to_string()),
            full_resolution: self.full_resolution.then_some(true),
            adaptive_hbf: self.adaptive_hbf.then_some(true),
            weighted_swap: self.weighted_swap.then_some(true),
            csv: self.csv.then_some(true),
            json: self.json.then_some(true),
            trace: self.trace.then_some(true),
            ..ConfigBuilder::default()
        };
        if let Some(s) = &self.strategy {
            builder.set("strategy", s)?;
        }
        if let Some(mode) = &self.mode {
            builder.set("mode", mode)?;
        }
        if let Some(range) = &self.q_range {
            builder.set("q-range", range)?;
        }
        if let Some(collapse) = &self.collapse {
            builder.set("collapse", collapse)?;
        }
        Ok(builder)
    }
}

fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let file_builder = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
            ConfigBuilder::from_text(&text)?
        }
        None => ConfigBuilder::default(),
    };
    cli.to_builder()?.overlay(file_builder).build()
}

fn emit(config: &ExperimentConfig, report: &ExperimentReport) -> Result<(), Error> {
    let out_dir = config.out.as_ref().map(Path::new);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }

    if config.csv {
        let name = match config.mode {
            Mode::SingleQ | Mode::CurveSweep => "curves.csv",
            Mode::QcSearch => "qc.csv",
            Mode::AlphaScan | Mode::PopsizeScan => "scan.csv",
        };
        match out_dir {
            Some(dir) => {
                let mut file = fs::File::create(dir.join(name))?;
                emit_csv(report, &mut file)?;
                eprintln!("wrote {}", dir.join(name).display());
            }
            None => emit_csv(report, std::io::stdout().lock())?,
        }
    }
    if config.json {
        match out_dir {
            Some(dir) => {
                let path = dir.join("summary.json");
                let mut file = fs::File::create(&path)?;
                emit_summary_json(report, &mut file)?;
                eprintln!("wrote {}", path.display());
            }
            None => emit_summary_json(report, std::io::stdout().lock())?,
        }
    }
    if config.trace {
        match out_dir {
            Some(dir) => {
                let path = dir.join("trace.csv");
                let mut file = fs::File::create(&path)?;
                emit_trace_csv(report, &mut file)?;
                eprintln!("wrote {}", path.display());
            }
            None => emit_trace_csv(report, std::io::stdout().lock())?,
        }
    }
    Ok(())
}

fn print_console_summary(config: &ExperimentConfig, report: &ExperimentReport) {
    let id_base = usize::from(config.one_based);
    eprintln!(
        "mode {} on {:?} (N per run from the generated graph), {} strategies x {} repeats",
        config.mode.label(),
        config.network.model,
        config.strategies.len(),
        config.repeats
    );
    for (label, summary) in summarize(report) {
        let mut line = format!("  {label:<10} runs={}", summary.runs);
        if let (Some(mean), Some(std)) = (summary.r_mean, summary.r_std) {
            let marker = if summary.r_approximate { "~" } else { "" };
            line.push_str(&format!(" R={marker}{mean:.4}±{std:.4}"));
        }
        if let (Some(mean), Some(std)) = (summary.qc_mean, summary.qc_std) {
            line.push_str(&format!(" qc={mean:.4}±{std:.4}"));
        }
        if let Some(s) = summary.best_s {
            line.push_str(&format!(" best_S={s:.4}"));
        }
        if let Some(kappa) = summary.best_kappa {
            line.push_str(&format!(" kappa={kappa:.4}"));
        }
        if let Some(set) = &summary.best_attack_set {
            line.push_str(&format!(" best_set={set:?}"));
        }
        eprintln!("{line}");
        if let Some(scan) = &summary.scan {
            for point in scan {
                eprintln!(
                    "    {}={:<6} qc={:.4}±{:.4}",
                    point.param, point.value, point.qc_mean, point.qc_std
                );
            }
        }
    }
    let timed: Vec<&netdis_core::experiment::RunRecord> =
        report.runs.iter().filter(|r| r.gen_wall_ms.is_some()).collect();
    if !timed.is_empty() {
        let mean: f64 = timed.iter().filter_map(|r| r.gen_wall_ms).sum::<f64>() / timed.len() as f64;
        eprintln!("  mean wall-clock per optimizer generation: {mean:.3} ms");
    }
    let _ = id_base;
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config = resolve_config(cli)?;
    let report = run_experiment(&config)?;
    print_console_summary(&config, &report);
    if !(config.csv || config.json || config.trace) {
        // nothing requested: default to the JSON summary on stdout
        emit_summary_json(&report, std::io::stdout().lock())?;
    } else {
        emit(&config, &report)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
