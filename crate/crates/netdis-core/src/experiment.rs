//! Configuration-driven experiment runner.
//!
//! A flat key-value config selects a network, a set of strategies and a
//! mode; the runner executes seeded repeats and assembles curves, R values
//! and critical fractions into a report. Identical configs produce
//! byte-identical CSV and JSON artifacts: wall-clock measurements are kept
//! out of everything that gets serialized.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeMask};
use crate::metrics::{
    is_collapsed, robustness_r, robustness_r_interpolated, s_of_q, write_curve_csv, AttackCurve,
    CollapseCriterion,
};
use crate::netgen::{NetworkModel, NetworkSpec};
use crate::rng::derive_seed;
use crate::strategies::{
    brute_force_optimum_with_cap, hbf_attack, hbf_attack_adaptive, hdf_attack, nipa_collapse_search,
    nipa_optimize_traced, oas_collapse_search, oas_optimize_traced, AttackSolution, NipaParams,
    OasParams, DEFAULT_ENUMERATION_CAP,
};

/// Seed stream reserved for network generation; strategy ids start at 1 so
/// network draws never collide with optimizer draws.
const NETWORK_SEED_STREAM: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    Nipa,
    Oas,
    Hdf,
    Hbf,
    BruteForce,
}

impl StrategyKind {
    pub fn label(&self) -> &'static str {
        match self {
            StrategyKind::Nipa => "NIPA",
            StrategyKind::Oas => "OAS",
            StrategyKind::Hdf => "HDF",
            StrategyKind::Hbf => "HBF",
            StrategyKind::BruteForce => "BruteForce",
        }
    }

    fn id(&self) -> u64 {
        match self {
            StrategyKind::Nipa => 1,
            StrategyKind::Oas => 2,
            StrategyKind::Hdf => 3,
            StrategyKind::Hbf => 4,
            StrategyKind::BruteForce => 5,
        }
    }

    pub fn parse(token: &str) -> Result<StrategyKind> {
        match token.trim().to_ascii_lowercase().as_str() {
            "nipa" => Ok(StrategyKind::Nipa),
            "oas" => Ok(StrategyKind::Oas),
            "hdf" => Ok(StrategyKind::Hdf),
            "hbf" => Ok(StrategyKind::Hbf),
            "bruteforce" | "brute-force" => Ok(StrategyKind::BruteForce),
            other => Err(Error::Config(format!("strategy: unknown value {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    SingleQ,
    CurveSweep,
    QcSearch,
    AlphaScan,
    PopsizeScan,
}

impl Mode {
    pub fn parse(token: &str) -> Result<Mode> {
        match token.trim().to_ascii_lowercase().as_str() {
            "single-q" => Ok(Mode::SingleQ),
            "curve-sweep" => Ok(Mode::CurveSweep),
            "qc-search" => Ok(Mode::QcSearch),
            "alpha-scan" => Ok(Mode::AlphaScan),
            "popsize-scan" => Ok(Mode::PopsizeScan),
            other => Err(Error::Config(format!("mode: unknown value {other:?}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mode::SingleQ => "single-q",
            Mode::CurveSweep => "curve-sweep",
            Mode::QcSearch => "qc-search",
            Mode::AlphaScan => "alpha-scan",
            Mode::PopsizeScan => "popsize-scan",
        }
    }
}

/// Fully resolved experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub network: NetworkSpec,
    pub strategies: Vec<StrategyKind>,
    pub mode: Mode,
    pub nipa: NipaParams,
    pub oas: OasParams,
    pub q: Option<usize>,
    /// Inclusive sweep `start:end:step` over Q for curve mode.
    pub q_range: Option<(usize, usize, usize)>,
    /// Sweep every Q = 0..N (exact R); otherwise the default coarse step
    /// is `max(1, N/50)` and R is interpolated.
    pub full_resolution: bool,
    pub repeats: u32,
    pub base_seed: u64,
    pub collapse: CollapseCriterion,
    pub adaptive_hbf: bool,
    pub enumeration_cap: u128,
    /// Emit node ids 1-based in summaries and read 1-based edge lists.
    pub one_based: bool,
    /// Emission plumbing: kept out of the serialized config echo so the
    /// artifact bytes do not depend on where they are written.
    #[serde(skip)]
    pub out: Option<String>,
    #[serde(skip)]
    pub csv: bool,
    #[serde(skip)]
    pub json: bool,
    #[serde(skip)]
    pub trace: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.network.validate().map_err(config_err)?;
        if self.strategies.is_empty() {
            return Err(Error::Config("strategy: at least one is required".to_string()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats: must be positive".to_string()));
        }
        self.nipa.validate().map_err(config_err)?;
        self.oas.validate().map_err(config_err)?;
        match self.mode {
            Mode::SingleQ => {
                if self.q.is_none() {
                    return Err(Error::Config("q: required for single-q mode".to_string()));
                }
            }
            Mode::AlphaScan | Mode::PopsizeScan => {
                if !self.strategies.contains(&StrategyKind::Nipa) {
                    return Err(Error::Config(
                        "strategy: scan modes require NIPA".to_string(),
                    ));
                }
            }
            Mode::CurveSweep | Mode::QcSearch => {}
        }
        if let Some((start, end, step)) = self.q_range {
            if step == 0 || start > end {
                return Err(Error::Config(format!(
                    "q-range: need start <= end and step > 0, got {start}:{end}:{step}"
                )));
            }
        }
        Ok(())
    }
}

fn config_err(e: Error) -> Error {
    Error::Config(e.to_string())
}

/// Incremental configuration source: file keys first, CLI overrides on top.
#[derive(Clone, Debug, Default)]
pub struct ConfigBuilder {
    pub network: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub m0: Option<usize>,
    pub p: Option<f64>,
    pub one_based: Option<bool>,
    pub strategies: Option<Vec<StrategyKind>>,
    pub mode: Option<Mode>,
    pub q: Option<usize>,
    pub q_range: Option<(usize, usize, usize)>,
    pub full_resolution: Option<bool>,
    pub alpha: Option<f64>,
    pub pop_size: Option<usize>,
    pub iters: Option<usize>,
    pub tabu: Option<usize>,
    pub repeats: Option<u32>,
    pub seed: Option<u64>,
    pub collapse: Option<CollapseCriterion>,
    pub adaptive_hbf: Option<bool>,
    pub weighted_swap: Option<bool>,
    pub cap: Option<u128>,
    pub out: Option<String>,
    pub csv: Option<bool>,
    pub json: Option<bool>,
    pub trace: Option<bool>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: invalid value {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::Config(format!("{key}: expected a boolean, got {other:?}"))),
    }
}

impl ConfigBuilder {
    /// Applies one `key = value` assignment. Keys are case-insensitive and
    /// `-`/`_` are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let norm = key.trim().to_ascii_lowercase().replace('_', "-");
        match norm.as_str() {
            "network" => self.network = Some(value.trim().to_string()),
            "n" => self.n = Some(parse_value(&norm, value)?),
            "m" => self.m = Some(parse_value(&norm, value)?),
            "m0" => self.m0 = Some(parse_value(&norm, value)?),
            "p" => self.p = Some(parse_value(&norm, value)?),
            "one-based" => self.one_based = Some(parse_bool(&norm, value)?),
            "strategy" | "strategies" => {
                let kinds = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(StrategyKind::parse)
                    .collect::<Result<Vec<_>>>()?;
                self.strategies = Some(kinds);
            }
            "mode" => self.mode = Some(Mode::parse(value)?),
            "q" => self.q = Some(parse_value(&norm, value)?),
            "q-range" => {
                let parts: Vec<&str> = value.trim().split(':').collect();
                if parts.len() != 3 {
                    return Err(Error::Config(format!(
                        "q-range: expected start:end:step, got {value:?}"
                    )));
                }
                self.q_range = Some((
                    parse_value("q-range", parts[0])?,
                    parse_value("q-range", parts[1])?,
                    parse_value("q-range", parts[2])?,
                ));
            }
            "full-resolution" => self.full_resolution = Some(parse_bool(&norm, value)?),
            "alpha" => self.alpha = Some(parse_value(&norm, value)?),
            "pop-size" | "population-size" => self.pop_size = Some(parse_value(&norm, value)?),
            "iters" | "max-iterations" => self.iters = Some(parse_value(&norm, value)?),
            "tabu" => self.tabu = Some(parse_value(&norm, value)?),
            "repeats" => self.repeats = Some(parse_value(&norm, value)?),
            "seed" => self.seed = Some(parse_value(&norm, value)?),
            "collapse" => {
                let v = value.trim().to_ascii_lowercase();
                if v == "kappa" {
                    self.collapse = Some(CollapseCriterion::Kappa);
                } else if let Some(threshold) = v.strip_prefix("s:") {
                    self.collapse =
                        Some(CollapseCriterion::LccFraction(parse_value("collapse", threshold)?));
                } else {
                    return Err(Error::Config(format!(
                        "collapse: expected kappa or s:<threshold>, got {value:?}"
                    )));
                }
            }
            "adaptive-hbf" => self.adaptive_hbf = Some(parse_bool(&norm, value)?),
            "weighted-swap" => self.weighted_swap = Some(parse_bool(&norm, value)?),
            "cap" => self.cap = Some(parse_value(&norm, value)?),
            "out" => self.out = Some(value.trim().to_string()),
            "csv" => self.csv = Some(parse_bool(&norm, value)?),
            "json" => self.json = Some(parse_bool(&norm, value)?),
            "trace" => self.trace = Some(parse_bool(&norm, value)?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped.
    pub fn from_text(text: &str) -> Result<ConfigBuilder> {
        let mut builder = ConfigBuilder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected key = value, got {line:?}",
                    idx + 1
                )));
            };
            builder.set(key, value)?;
        }
        Ok(builder)
    }

    /// Values set on `self` win over `base`.
    pub fn overlay(self, base: ConfigBuilder) -> ConfigBuilder {
        ConfigBuilder {
            network: self.network.or(base.network),
            n: self.n.or(base.n),
            m: self.m.or(base.m),
            m0: self.m0.or(base.m0),
            p: self.p.or(base.p),
            one_based: self.one_based.or(base.one_based),
            strategies: self.strategies.or(base.strategies),
            mode: self.mode.or(base.mode),
            q: self.q.or(base.q),
            q_range: self.q_range.or(base.q_range),
            full_resolution: self.full_resolution.or(base.full_resolution),
            alpha: self.alpha.or(base.alpha),
            pop_size: self.pop_size.or(base.pop_size),
            iters: self.iters.or(base.iters),
            tabu: self.tabu.or(base.tabu),
            repeats: self.repeats.or(base.repeats),
            seed: self.seed.or(base.seed),
            collapse: self.collapse.or(base.collapse),
            adaptive_hbf: self.adaptive_hbf.or(base.adaptive_hbf),
            weighted_swap: self.weighted_swap.or(base.weighted_swap),
            cap: self.cap.or(base.cap),
            out: self.out.or(base.out),
            csv: self.csv.or(base.csv),
            json: self.json.or(base.json),
            trace: self.trace.or(base.trace),
        }
    }

    /// Resolves defaults and assembles the final config.
    pub fn build(self) -> Result<ExperimentConfig> {
        let one_based = self.one_based.unwrap_or(true);
        let network_name = self
            .network
            .ok_or_else(|| Error::Config("network: required".to_string()))?;
        let need_n = || {
            self.n
                .ok_or_else(|| Error::Config(format!("n: required for {network_name} networks")))
        };
        let (model, n) = match network_name.to_ascii_lowercase().as_str() {
            "karate" => (NetworkModel::Karate, 34),
            "example16" => (NetworkModel::Example16, 16),
            "ba" => (
                NetworkModel::Ba {
                    m: self.m.unwrap_or(3),
                    m0: self.m0.unwrap_or(3),
                    p: self.p,
                },
                need_n()?,
            ),
            "er" => (
                NetworkModel::Er {
                    p: self
                        .p
                        .ok_or_else(|| Error::Config("p: required for er networks".to_string()))?,
                },
                need_n()?,
            ),
            "ws" => (
                NetworkModel::Ws {
                    m: self.m.unwrap_or(4),
                    p: self.p.unwrap_or(0.5),
                },
                need_n()?,
            ),
            _ => (
                NetworkModel::File {
                    path: network_name.clone(),
                    one_based,
                },
                0,
            ),
        };
        let base_seed = self.seed.unwrap_or(0);
        let alpha = self.alpha.unwrap_or(0.3);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Config(format!("alpha: must lie in (0, 1), got {alpha}")));
        }
        let config = ExperimentConfig {
            network: NetworkSpec {
                model,
                n,
                seed: base_seed,
            },
            strategies: self.strategies.unwrap_or_else(|| vec![StrategyKind::Nipa]),
            mode: self.mode.unwrap_or(Mode::SingleQ),
            nipa: NipaParams {
                alpha,
                population_size: self.pop_size.unwrap_or(100),
                max_iterations: self.iters.unwrap_or(100),
                seed: base_seed,
                weighted_swap: self.weighted_swap.unwrap_or(false),
            },
            oas: OasParams {
                population_size: self.pop_size.unwrap_or(100),
                max_iterations: self.iters.unwrap_or(100),
                tabu_length: self.tabu.unwrap_or(10),
                seed: base_seed,
            },
            q: self.q,
            q_range: self.q_range,
            full_resolution: self.full_resolution.unwrap_or(false),
            repeats: self.repeats.unwrap_or(1),
            base_seed,
            collapse: self.collapse.unwrap_or_default(),
            adaptive_hbf: self.adaptive_hbf.unwrap_or(false),
            enumeration_cap: self.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
            one_based,
            out: self.out,
            csv: self.csv.unwrap_or(false),
            json: self.json.unwrap_or(false),
            trace: self.trace.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses a flat key-value config file into a validated config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    ConfigBuilder::from_text(text)?.build()
}

/// One scan sample: a parameter value and the critical fraction it reached.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub param: &'static str,
    pub value: f64,
    pub qc: f64,
}

/// Result of one (strategy, repeat) run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub kind: StrategyKind,
    pub seed: u64,
    pub repeat: u32,
    pub n: usize,
    pub curve: Option<AttackCurve>,
    pub r: Option<f64>,
    pub r_approximate: bool,
    pub qc: Option<f64>,
    pub qc_removed: Option<usize>,
    pub best_set: Option<Vec<usize>>,
    pub best_s: Option<f64>,
    pub kappa: Option<f64>,
    pub scan: Option<Vec<ScanPoint>>,
    pub trace: Option<Vec<(usize, f64)>>,
    /// Mean wall-clock per optimizer generation, milliseconds. Never
    /// serialized: reports must be byte-reproducible.
    pub gen_wall_ms: Option<f64>,
}

/// Assembled experiment output, sorted by strategy label then seed.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub runs: Vec<RunRecord>,
}

struct Solver<'a> {
    config: &'a ExperimentConfig,
    graph: &'a Graph,
    run_seed: u64,
    wall: std::time::Duration,
    generations: usize,
    last_trace: Option<Vec<(usize, f64)>>,
}

impl<'a> Solver<'a> {
    fn new(config: &'a ExperimentConfig, graph: &'a Graph, run_seed: u64) -> Solver<'a> {
        Solver {
            config,
            graph,
            run_seed,
            wall: std::time::Duration::ZERO,
            generations: 0,
            last_trace: None,
        }
    }

    fn solve(&mut self, kind: StrategyKind, q: usize) -> Result<AttackSolution> {
        self.solve_with(kind, q, None, None)
    }

    fn solve_with(
        &mut self,
        kind: StrategyKind,
        q: usize,
        alpha: Option<f64>,
        pop_size: Option<usize>,
    ) -> Result<AttackSolution> {
        if q == 0 {
            return Ok(AttackSolution::all_present(self.graph.node_count()));
        }
        match kind {
            StrategyKind::Hdf => hdf_attack(self.graph, q),
            StrategyKind::Hbf => {
                if self.config.adaptive_hbf {
                    hbf_attack_adaptive(self.graph, q)
                } else {
                    hbf_attack(self.graph, q)
                }
            }
            StrategyKind::Nipa => {
                let params = NipaParams {
                    seed: self.run_seed,
                    alpha: alpha.unwrap_or(self.config.nipa.alpha),
                    population_size: pop_size.unwrap_or(self.config.nipa.population_size),
                    ..self.config.nipa.clone()
                };
                let start = Instant::now();
                let (sol, _, trace) = nipa_optimize_traced(self.graph, q, &params)?;
                self.wall += start.elapsed();
                self.generations += params.max_iterations;
                self.last_trace = Some(trace);
                Ok(sol)
            }
            StrategyKind::Oas => {
                let params = OasParams {
                    seed: self.run_seed,
                    population_size: pop_size.unwrap_or(self.config.oas.population_size),
                    ..self.config.oas.clone()
                };
                let start = Instant::now();
                let (sol, _, trace) = oas_optimize_traced(self.graph, q, &params)?;
                self.wall += start.elapsed();
                self.generations += params.max_iterations;
                self.last_trace = Some(trace);
                Ok(sol)
            }
            StrategyKind::BruteForce => {
                brute_force_optimum_with_cap(self.graph, q, self.config.enumeration_cap)
                    .map(|(sol, _)| sol)
            }
        }
    }

    fn gen_wall_ms(&self) -> Option<f64> {
        (self.generations > 0).then(|| self.wall.as_secs_f64() * 1e3 / self.generations as f64)
    }
}

fn sweep_points(config: &ExperimentConfig, n: usize) -> Vec<usize> {
    let mut qs = Vec::new();
    if config.full_resolution {
        qs.extend(0..=n);
    } else if let Some((start, end, step)) = config.q_range {
        let mut q = start;
        while q <= end.min(n) {
            qs.push(q);
            q += step;
        }
    } else {
        let step = (n / 50).max(1);
        let mut q = 0;
        while q <= n {
            qs.push(q);
            q += step;
        }
        if *qs.last().unwrap() != n {
            qs.push(n);
        }
    }
    qs
}

/// Searches the smallest collapsing Q for this run, returning
/// `(Q, fraction, attack set at Q)`. The population strategies run in
/// collapse mode: their loop stops the moment the incumbent collapses the
/// network.
fn qc_search(
    solver: &mut Solver,
    kind: StrategyKind,
    alpha: Option<f64>,
    pop_size: Option<usize>,
) -> Result<(usize, f64, Vec<usize>)> {
    let g = solver.graph;
    let n = g.node_count();
    let criterion = solver.config.collapse;
    if is_collapsed(g, &NodeMask::none(n), criterion) {
        return Ok((0, 0.0, Vec::new()));
    }
    for q in 1..=n {
        let collapsing = match kind {
            StrategyKind::Nipa => {
                let params = NipaParams {
                    seed: solver.run_seed,
                    alpha: alpha.unwrap_or(solver.config.nipa.alpha),
                    population_size: pop_size.unwrap_or(solver.config.nipa.population_size),
                    ..solver.config.nipa.clone()
                };
                nipa_collapse_search(g, q, &params, criterion)?.map(|(sol, _)| sol)
            }
            StrategyKind::Oas => {
                let params = OasParams {
                    seed: solver.run_seed,
                    population_size: pop_size.unwrap_or(solver.config.oas.population_size),
                    ..solver.config.oas.clone()
                };
                oas_collapse_search(g, q, &params, criterion)?.map(|(sol, _)| sol)
            }
            _ => {
                let sol = solver.solve_with(kind, q, alpha, pop_size)?;
                is_collapsed(g, &sol.mask(), criterion).then_some(sol)
            }
        };
        if let Some(sol) = collapsing {
            return Ok((q, q as f64 / n as f64, sol.attack_set()));
        }
    }
    Ok((n, 1.0, (0..n).collect()))
}

fn run_one(
    config: &ExperimentConfig,
    graph: &Graph,
    kind: StrategyKind,
    repeat: u32,
    run_seed: u64,
) -> Result<RunRecord> {
    let n = graph.node_count();
    let mut solver = Solver::new(config, graph, run_seed);
    let mut record = RunRecord {
        kind,
        seed: run_seed,
        repeat,
        n,
        curve: None,
        r: None,
        r_approximate: false,
        qc: None,
        qc_removed: None,
        best_set: None,
        best_s: None,
        kappa: None,
        scan: None,
        trace: None,
        gen_wall_ms: None,
    };
    match config.mode {
        Mode::SingleQ => {
            let q = config.q.expect("validated");
            let sol = solver.solve(kind, q)?;
            let s = s_of_q(graph, &sol);
            let mut curve = AttackCurve::new(kind.label(), run_seed, n);
            curve.push(q, s);
            record.kappa = Some(graph.kappa(&sol.mask()).unwrap_or(0.0));
            record.best_set = Some(sol.attack_set());
            record.best_s = Some(s);
            record.curve = Some(curve);
            if config.trace {
                record.trace = solver.last_trace.take();
            }
        }
        Mode::CurveSweep => {
            let mut curve = AttackCurve::new(kind.label(), run_seed, n);
            let mut best: Option<(f64, Vec<usize>)> = None;
            for q in sweep_points(config, n) {
                let sol = solver.solve(kind, q)?;
                let s = s_of_q(graph, &sol);
                if q > 0 && best.as_ref().is_none_or(|(bs, _)| s < *bs) {
                    best = Some((s, sol.attack_set()));
                }
                curve.push(q, s);
            }
            if config.full_resolution {
                record.r = Some(robustness_r(&curve)?);
            } else {
                record.r = robustness_r_interpolated(&curve).ok();
                record.r_approximate = true;
            }
            if let Some((s, set)) = best {
                record.best_s = Some(s);
                record.best_set = Some(set);
            }
            record.curve = Some(curve);
        }
        Mode::QcSearch => {
            let (removed, fraction, set) = qc_search(&mut solver, kind, None, None)?;
            let mask = NodeMask::from_removed(n, set.iter().copied());
            record.kappa = graph.kappa(&mask).ok();
            record.best_s = Some(graph.largest_connected_cluster(&mask).len() as f64 / n as f64);
            record.qc = Some(fraction);
            record.qc_removed = Some(removed);
            record.best_set = Some(set);
        }
        Mode::AlphaScan => {
            let mut points = Vec::new();
            if kind == StrategyKind::Nipa {
                for step in 1..=9 {
                    let alpha = step as f64 / 10.0;
                    let (_, fraction, _) = qc_search(&mut solver, kind, Some(alpha), None)?;
                    points.push(ScanPoint {
                        param: "alpha",
                        value: alpha,
                        qc: fraction,
                    });
                }
            }
            record.scan = Some(points);
        }
        Mode::PopsizeScan => {
            let mut points = Vec::new();
            if kind == StrategyKind::Nipa {
                for pop in [100, 200, 300, 400, 500] {
                    let (_, fraction, _) = qc_search(&mut solver, kind, None, Some(pop))?;
                    points.push(ScanPoint {
                        param: "popsize",
                        value: pop as f64,
                        qc: fraction,
                    });
                }
            }
            record.scan = Some(points);
        }
    }
    record.gen_wall_ms = solver.gen_wall_ms();
    Ok(record)
}

/// Runs every configured (strategy, repeat) combination. Strategies share
/// the same network instance within a repeat; run seeds derive from
/// `(base seed, strategy id, repeat)`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut runs = Vec::new();
    for repeat in 0..config.repeats {
        let network_seed = derive_seed(config.base_seed, NETWORK_SEED_STREAM, repeat as u64);
        let graph = config.network.with_seed(network_seed).build()?;
        for &kind in &config.strategies {
            let run_seed = derive_seed(config.base_seed, kind.id(), repeat as u64);
            let record = run_one(config, &graph, kind, repeat, run_seed).map_err(|e| Error::Run {
                strategy: kind.label(),
                repeat,
                source: Box::new(e),
            })?;
            runs.push(record);
        }
    }
    runs.sort_by(|a, b| {
        a.kind
            .label()
            .cmp(b.kind.label())
            .then(a.seed.cmp(&b.seed))
    });
    Ok(ExperimentReport {
        config: config.clone(),
        runs,
    })
}

/// Per-strategy aggregate for the JSON summary.
#[derive(Debug, Serialize)]
pub struct StrategySummary {
    pub runs: usize,
    pub r_mean: Option<f64>,
    pub r_std: Option<f64>,
    pub r_approximate: bool,
    pub qc_mean: Option<f64>,
    pub qc_std: Option<f64>,
    pub best_s: Option<f64>,
    pub best_kappa: Option<f64>,
    pub best_attack_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<Vec<ScanSummary>>,
}

#[derive(Debug, Serialize)]
pub struct ScanSummary {
    pub param: &'static str,
    pub value: f64,
    pub qc_mean: f64,
    pub qc_std: f64,
}

#[derive(Debug, Serialize)]
struct SummaryDocument<'a> {
    artifact_version: &'static str,
    mode: &'static str,
    id_base: u8,
    config: &'a ExperimentConfig,
    strategies: BTreeMap<&'static str, StrategySummary>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Aggregates the report per strategy.
pub fn summarize(report: &ExperimentReport) -> BTreeMap<&'static str, StrategySummary> {
    let id_base = usize::from(report.config.one_based);
    let mut by_strategy: BTreeMap<&'static str, Vec<&RunRecord>> = BTreeMap::new();
    for run in &report.runs {
        by_strategy.entry(run.kind.label()).or_default().push(run);
    }
    let mut result = BTreeMap::new();
    for (label, runs) in by_strategy {
        let rs: Vec<f64> = runs.iter().filter_map(|r| r.r).collect();
        let qcs: Vec<f64> = runs.iter().filter_map(|r| r.qc).collect();
        let (r_mean, r_std) = match rs.is_empty() {
            true => (None, None),
            false => {
                let (m, s) = mean_std(&rs);
                (Some(m), Some(s))
            }
        };
        let (qc_mean, qc_std) = match qcs.is_empty() {
            true => (None, None),
            false => {
                let (m, s) = mean_std(&qcs);
                (Some(m), Some(s))
            }
        };

        // representative set: lowest qc, then lowest S, then seed order
        let mut best_run: Option<&RunRecord> = None;
        for &run in &runs {
            if run.best_set.is_none() {
                continue;
            }
            let key = |r: &RunRecord| {
                (
                    r.qc.unwrap_or(f64::INFINITY),
                    r.best_s.unwrap_or(f64::INFINITY),
                    r.seed,
                )
            };
            let better = match best_run {
                None => true,
                Some(current) => {
                    let (a, b) = (key(run), key(current));
                    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2))
                        == std::cmp::Ordering::Less
                }
            };
            if better {
                best_run = Some(run);
            }
        }

        let mut scan: Option<Vec<ScanSummary>> = None;
        if runs.iter().any(|r| r.scan.is_some()) {
            let mut order: Vec<(&'static str, f64)> = Vec::new();
            let mut grouped: BTreeMap<(&'static str, u64), Vec<f64>> = BTreeMap::new();
            for run in &runs {
                if let Some(points) = &run.scan {
                    for p in points {
                        let key = (p.param, p.value.to_bits());
                        if !grouped.contains_key(&key) {
                            order.push((p.param, p.value));
                        }
                        grouped.entry(key).or_default().push(p.qc);
                    }
                }
            }
            order.sort_by(|a, b| a.0.cmp(b.0).then(a.1.total_cmp(&b.1)));
            scan = Some(
                order
                    .into_iter()
                    .map(|(param, value)| {
                        let (m, s) = mean_std(&grouped[&(param, value.to_bits())]);
                        ScanSummary {
                            param,
                            value,
                            qc_mean: m,
                            qc_std: s,
                        }
                    })
                    .collect(),
            );
        }

        result.insert(
            label,
            StrategySummary {
                runs: runs.len(),
                r_mean,
                r_std,
                r_approximate: runs.iter().any(|r| r.r_approximate),
                qc_mean,
                qc_std,
                best_s: best_run.and_then(|r| r.best_s),
                best_kappa: best_run.and_then(|r| r.kappa),
                best_attack_set: best_run.and_then(|r| {
                    r.best_set
                        .as_ref()
                        .map(|set| set.iter().map(|v| v + id_base).collect())
                }),
                scan,
            },
        );
    }
    result
}

/// Writes the report's tabular data as CSV. Curve modes use the header
/// `strategy,seed,N,Q,q,S`; qc-search uses `strategy,seed,N,Q_c,q_c`; scans
/// use `strategy,seed,N,param,value,q_c`.
pub fn emit_csv<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    match report.config.mode {
        Mode::SingleQ | Mode::CurveSweep => {
            let curves: Vec<AttackCurve> = report
                .runs
                .iter()
                .filter_map(|r| r.curve.clone())
                .collect();
            write_curve_csv(&curves, out)?;
        }
        Mode::QcSearch => {
            writeln!(out, "strategy,seed,N,Q_c,q_c")?;
            for run in &report.runs {
                if let (Some(removed), Some(qc)) = (run.qc_removed, run.qc) {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        run.kind.label(),
                        run.seed,
                        run.n,
                        removed,
                        qc
                    )?;
                }
            }
        }
        Mode::AlphaScan | Mode::PopsizeScan => {
            writeln!(out, "strategy,seed,N,param,value,q_c")?;
            for run in &report.runs {
                if let Some(points) = &run.scan {
                    for p in points {
                        writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            run.kind.label(),
                            run.seed,
                            run.n,
                            p.param,
                            p.value,
                            p.qc
                        )?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Writes optimizer convergence traces as `strategy,seed,iteration,best_S`.
pub fn emit_trace_csv<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    writeln!(out, "strategy,seed,iteration,best_S")?;
    for run in &report.runs {
        if let Some(trace) = &run.trace {
            for (iteration, best_s) in trace {
                writeln!(out, "{},{},{},{}", run.kind.label(), run.seed, iteration, best_s)?;
            }
        }
    }
    Ok(())
}

/// Writes the aggregate summary as JSON with stable key ordering.
pub fn emit_summary_json<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    let document = SummaryDocument {
        artifact_version: env!("CARGO_PKG_VERSION"),
        mode: report.config.mode.label(),
        id_base: u8::from(report.config.one_based),
        config: &report.config,
        strategies: summarize(report),
    };
    serde_json::to_writer_pretty(&mut out, &document)
        .map_err(|e| Error::Config(format!("summary serialization failed: {e}")))?;
    writeln!(out)?;
    Ok(())
}
