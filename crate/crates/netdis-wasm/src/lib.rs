//! Browser demo: generate a network, attack it with a chosen strategy and
//! watch the surviving-cluster curve. Compiled to WebAssembly; the page in
//! `www/` drives the three exported operations.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use netdis_core::graph::{Graph, NodeMask};
use netdis_core::metrics::{s_of_q, CollapseCriterion};
use netdis_core::netgen;
use netdis_core::rng::stream_rng;
use netdis_core::strategies::{
    brute_force_optimum_with_cap, hbf_attack, hdf_attack, nipa_collapse_search, nipa_optimize,
    oas_optimize, AttackSolution, NipaParams, OasParams,
};

#[derive(Serialize)]
struct GraphView {
    n: usize,
    edges: Vec<(usize, usize)>,
    positions: Vec<(f64, f64)>,
    degrees: Vec<usize>,
    kappa: f64,
}

#[derive(Serialize)]
struct AttackView {
    strategy: String,
    q: usize,
    attack: Vec<usize>,
    s: f64,
    kappa: f64,
    collapsed: bool,
    cluster: Vec<usize>,
}

#[derive(Serialize)]
struct CurvePointView {
    q: usize,
    fraction: f64,
    s: f64,
    collapsed: bool,
}

#[derive(Serialize)]
struct CurveView {
    strategy: String,
    points: Vec<CurvePointView>,
    qc: Option<f64>,
}

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Force-directed layout, deterministic in the seed. Positions land in the
/// unit square.
fn layout(graph: &Graph, seed: u64) -> Vec<(f64, f64)> {
    use rand::Rng;
    let n = graph.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = stream_rng(seed, 7);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let angle = i as f64 / n as f64 * std::f64::consts::TAU;
            let jitter = rng.random::<f64>() * 0.05;
            (
                0.5 + (0.38 + jitter) * angle.cos(),
                0.5 + (0.38 + jitter) * angle.sin(),
            )
        })
        .collect();
    let k = (1.0 / n as f64).sqrt();
    let mut displacement = vec![(0.0f64, 0.0f64); n];
    let mut temperature = 0.1;
    for _ in 0..200 {
        for d in displacement.iter_mut() {
            *d = (0.0, 0.0);
        }
        for i in 0..n {
            for j in i + 1..n {
                let dx = pos[i].0 - pos[j].0;
                let dy = pos[i].1 - pos[j].1;
                let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
                let force = k * k / dist;
                displacement[i].0 += dx / dist * force;
                displacement[i].1 += dy / dist * force;
                displacement[j].0 -= dx / dist * force;
                displacement[j].1 -= dy / dist * force;
            }
        }
        for (u, v) in graph.edges() {
            let dx = pos[u].0 - pos[v].0;
            let dy = pos[u].1 - pos[v].1;
            let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
            let force = dist * dist / k;
            displacement[u].0 -= dx / dist * force;
            displacement[u].1 -= dy / dist * force;
            displacement[v].0 += dx / dist * force;
            displacement[v].1 += dy / dist * force;
        }
        for i in 0..n {
            let (dx, dy) = displacement[i];
            let len = (dx * dx + dy * dy).sqrt().max(1e-9);
            let step = len.min(temperature);
            pos[i].0 += dx / len * step;
            pos[i].1 += dy / len * step;
        }
        temperature *= 0.97;
    }
    // normalize into [0.05, 0.95]
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pos {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    pos.iter()
        .map(|&(x, y)| {
            (
                0.05 + 0.9 * (x - min_x) / span_x,
                0.05 + 0.9 * (y - min_y) / span_y,
            )
        })
        .collect()
}

#[wasm_bindgen]
pub struct Demo {
    graph: Graph,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        Demo {
            graph: netgen::karate(),
        }
    }

    /// Builds a network (`karate`, `example16`, `ba`, `er` or `ws`) and
    /// returns its JSON view with layout positions.
    pub fn generate(
        &mut self,
        model: &str,
        n: u32,
        m: u32,
        p: f64,
        seed: u32,
    ) -> Result<String, JsValue> {
        let n = n as usize;
        let m = m as usize;
        let seed = seed as u64;
        self.graph = match model {
            "karate" => netgen::karate(),
            "example16" => netgen::example16(),
            "ba" => netgen::generate_ba(n, m.max(1), m.max(1), seed).map_err(js_err)?,
            "er" => netgen::generate_er(n, p, seed).map_err(js_err)?,
            "ws" => {
                let even = if m.is_multiple_of(2) { m } else { m + 1 };
                netgen::generate_ws(n, even.max(2), p, seed).map_err(js_err)?
            }
            other => return Err(js_err(format!("unknown model {other:?}"))),
        };
        let mask = NodeMask::none(self.graph.node_count());
        let view = GraphView {
            n: self.graph.node_count(),
            edges: self.graph.edges().collect(),
            positions: layout(&self.graph, seed),
            degrees: (0..self.graph.node_count())
                .map(|v| self.graph.neighbor_slice(v).len())
                .collect(),
            kappa: self.graph.kappa(&mask).unwrap_or(0.0),
        };
        serde_json::to_string(&view).map_err(js_err)
    }

    /// Runs one strategy at fixed attack intensity and reports the attacked
    /// nodes, the surviving cluster and the percolation state.
    pub fn run_attack(
        &self,
        strategy: &str,
        q: u32,
        alpha: f64,
        pop_size: u32,
        iters: u32,
        seed: u32,
    ) -> Result<String, JsValue> {
        let solution = self
            .solve(strategy, q as usize, alpha, pop_size, iters, seed as u64)
            .map_err(js_err)?;
        let mask = solution.mask();
        let kappa = self.graph.kappa(&mask).unwrap_or(0.0);
        let view = AttackView {
            strategy: strategy.to_string(),
            q: q as usize,
            attack: solution.attack_set(),
            s: s_of_q(&self.graph, &solution),
            kappa,
            collapsed: kappa <= 2.0,
            cluster: self.graph.largest_connected_cluster(&mask),
        };
        serde_json::to_string(&view).map_err(js_err)
    }

    /// Sweeps the attack intensity and returns the S(q) curve plus the
    /// first collapsing fraction.
    pub fn attack_curve(
        &self,
        strategy: &str,
        step: u32,
        alpha: f64,
        pop_size: u32,
        iters: u32,
        seed: u32,
    ) -> Result<String, JsValue> {
        let n = self.graph.node_count();
        let step = (step as usize).max(1);
        let mut points = Vec::new();
        let mut qc = None;
        let mut q = 0;
        loop {
            let q_eff = q.min(n);
            let solution = self
                .solve(strategy, q_eff, alpha, pop_size, iters, seed as u64)
                .map_err(js_err)?;
            let mask = solution.mask();
            let collapsed = match self.graph.kappa(&mask) {
                Ok(kappa) => kappa <= 2.0,
                Err(_) => true,
            };
            if collapsed && qc.is_none() {
                qc = Some(q_eff as f64 / n as f64);
            }
            points.push(CurvePointView {
                q: q_eff,
                fraction: q_eff as f64 / n as f64,
                s: s_of_q(&self.graph, &solution),
                collapsed,
            });
            if q_eff == n {
                break;
            }
            q += step;
        }
        let view = CurveView {
            strategy: strategy.to_string(),
            points,
            qc,
        };
        serde_json::to_string(&view).map_err(js_err)
    }
}

impl Demo {
    fn solve(
        &self,
        strategy: &str,
        q: usize,
        alpha: f64,
        pop_size: u32,
        iters: u32,
        seed: u64,
    ) -> netdis_core::Result<AttackSolution> {
        let g = &self.graph;
        if q == 0 {
            return Ok(AttackSolution::all_present(g.node_count()));
        }
        match strategy {
            "HDF" => hdf_attack(g, q),
            "HBF" => hbf_attack(g, q),
            "NIPA" => {
                let params = NipaParams {
                    alpha,
                    population_size: pop_size as usize,
                    max_iterations: iters as usize,
                    seed,
                    weighted_swap: false,
                };
                // prefer a collapsing plateau point when one is reachable
                if let Some((sol, _)) =
                    nipa_collapse_search(g, q, &params, CollapseCriterion::Kappa)?
                {
                    return Ok(sol);
                }
                nipa_optimize(g, q, &params).map(|(sol, _)| sol)
            }
            "OAS" => {
                let params = OasParams {
                    population_size: pop_size as usize,
                    max_iterations: iters as usize,
                    tabu_length: 10,
                    seed,
                };
                oas_optimize(g, q, &params).map(|(sol, _)| sol)
            }
            "BruteForce" => brute_force_optimum_with_cap(g, q, 2_000_000).map(|(sol, _)| sol),
            other => Err(netdis_core::Error::InvalidInput(format!(
                "unknown strategy {other:?}"
            ))),
        }
    }
}

impl Default for Demo {
    fn default() -> Self {
        Demo::new()
    }
}
