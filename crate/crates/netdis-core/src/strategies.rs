//! Attack strategies: static rankings (HDF, HBF), the random-swap tabu
//! baseline (OAS) and the neighborhood-information probabilistic search
//! (NIPA), plus an exhaustive oracle for desk-scale verification.
//!
//! Both optimizers are bit-reproducible: every candidate draws from its own
//! stream derived from `(seed, iteration, candidate-index)`, so a parallel
//! evaluation order would produce the identical population and the same
//! generation best (ties go to the lowest candidate index).

use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{attack_probabilities, betweenness, degree_ranking, ProbabilityVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeMask};
use crate::metrics::{is_collapsed, s_of_q, CollapseCriterion};
use crate::rng::stream_rng;

/// Stream id for an optimizer's initialization draws; candidate streams
/// start right after it.
const INIT_STREAM: u64 = 0;

/// (best solution, best S, trace, iteration of early stop if any)
type RunResult = Result<(AttackSolution, f64, Trace, Option<usize>)>;

fn candidate_stream(iteration: usize, population_size: usize, candidate: usize) -> u64 {
    1 + (iteration as u64) * (population_size as u64) + candidate as u64
}

/// Convergence trace rows `(iteration, best_s)`.
pub type Trace = Vec<(usize, f64)>;

/// A length-N binary attack string: `false` marks an attacked (removed)
/// node, `true` a present one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackSolution {
    present: Vec<bool>,
}

impl AttackSolution {
    /// Solution attacking nothing.
    pub fn all_present(n: usize) -> AttackSolution {
        AttackSolution {
            present: vec![true; n],
        }
    }

    /// Solution attacking exactly the listed nodes.
    pub fn from_attack_set(n: usize, attack: &[usize]) -> Result<AttackSolution> {
        let mut sol = AttackSolution::all_present(n);
        for &v in attack {
            if v >= n {
                return Err(Error::InvalidNode { node: v, n });
            }
            sol.present[v] = false;
        }
        Ok(sol)
    }

    pub fn len(&self) -> usize {
        self.present.len()
    }

    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }

    pub fn is_present(&self, v: usize) -> bool {
        self.present[v]
    }

    /// Number of attacked nodes (zeros in the string).
    pub fn attack_count(&self) -> usize {
        self.present.iter().filter(|&&p| !p).count()
    }

    /// Attacked node ids, ascending.
    pub fn attack_set(&self) -> Vec<usize> {
        (0..self.present.len())
            .filter(|&v| !self.present[v])
            .collect()
    }

    /// Removal mask equivalent to this solution.
    pub fn mask(&self) -> NodeMask {
        NodeMask::from_removed(self.present.len(), self.attack_set())
    }

    /// New solution with `restore` flipped to present and `remove` flipped
    /// to attacked.
    fn swapped(&self, restore: usize, remove: usize) -> AttackSolution {
        let mut next = self.clone();
        next.present[restore] = true;
        next.present[remove] = false;
        next
    }
}

/// Parameters of the neighborhood-information probabilistic search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NipaParams {
    /// Reservation fraction: the `floor(alpha * Q)` attack nodes with the
    /// highest attack probability survive each generation unchanged.
    pub alpha: f64,
    pub population_size: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Experimental: bias the swapped-out choice towards low-probability
    /// attack nodes instead of drawing uniformly.
    pub weighted_swap: bool,
}

impl Default for NipaParams {
    fn default() -> Self {
        NipaParams {
            alpha: 0.3,
            population_size: 100,
            max_iterations: 100,
            seed: 0,
            weighted_swap: false,
        }
    }
}

impl NipaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.population_size == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidSpec(
                "population size and iteration count must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// Parameters of the random-swap tabu baseline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OasParams {
    pub population_size: usize,
    pub max_iterations: usize,
    pub tabu_length: usize,
    pub seed: u64,
}

impl Default for OasParams {
    fn default() -> Self {
        OasParams {
            population_size: 100,
            max_iterations: 100,
            tabu_length: 10,
            seed: 0,
        }
    }
}

impl OasParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidSpec(
                "population size and iteration count must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

fn check_q(q: usize, n: usize) -> Result<()> {
    if q == 0 || q > n {
        return Err(Error::InvalidQ { q, n });
    }
    Ok(())
}

/// High-degree-first attack: the top `q` nodes of the static degree
/// ranking, computed once on the intact graph.
pub fn hdf_attack(g: &Graph, q: usize) -> Result<AttackSolution> {
    check_q(q, g.node_count())?;
    AttackSolution::from_attack_set(g.node_count(), &degree_ranking(g).top(q))
}

/// High-betweenness-first attack on the static ranking.
pub fn hbf_attack(g: &Graph, q: usize) -> Result<AttackSolution> {
    check_q(q, g.node_count())?;
    AttackSolution::from_attack_set(g.node_count(), &betweenness(g).top(q))
}

/// Adaptive HBF variant: recomputes betweenness on the surviving subgraph
/// after each removal. Off by default in the experiment runner.
pub fn hbf_attack_adaptive(g: &Graph, q: usize) -> Result<AttackSolution> {
    let n = g.node_count();
    check_q(q, n)?;
    let mut removed: Vec<usize> = Vec::with_capacity(q);
    let mut alive: Vec<usize> = (0..n).collect();
    for _ in 0..q {
        // induced subgraph over surviving nodes, relabeled to 0..alive.len()
        let mut index_of = vec![usize::MAX; n];
        for (i, &v) in alive.iter().enumerate() {
            index_of[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &alive {
            for &u in g.neighbor_slice(v) {
                if v < u && index_of[u] != usize::MAX {
                    edges.push((index_of[v], index_of[u]));
                }
            }
        }
        let sub = Graph::from_edge_list(alive.len(), &edges)?;
        // relabeling preserves ascending id order, so the tie rule carries over
        let pick = alive[betweenness(&sub).top(1)[0]];
        removed.push(pick);
        alive.retain(|&v| v != pick);
    }
    AttackSolution::from_attack_set(n, &removed)
}

/// Random-swap population search with elitism and a FIFO tabu list.
///
/// Starts from a uniformly random removal of `q` nodes. Each generation
/// derives `population_size` candidates from the incumbent by one random
/// 0/1 state swap; a candidate touching a tabu node is redrawn (up to 10
/// tries, then accepted). The incumbent is only replaced by a strictly
/// better generation best, whose swapped pair then enters the tabu list.
pub fn oas_optimize(g: &Graph, q: usize, params: &OasParams) -> Result<(AttackSolution, f64)> {
    let (sol, s, _) = oas_optimize_traced(g, q, params)?;
    Ok((sol, s))
}

/// [`oas_optimize`] plus the per-iteration `(iteration, best_s)` trace.
pub fn oas_optimize_traced(
    g: &Graph,
    q: usize,
    params: &OasParams,
) -> Result<(AttackSolution, f64, Trace)> {
    let (sol, s, trace, _) = oas_run(g, q, params, None)?;
    Ok((sol, s, trace))
}

/// Runs OAS with the per-iteration collapse termination: the loop stops as
/// soon as the incumbent satisfies the criterion. Returns `None` when the
/// iteration budget runs out without a collapse.
pub fn oas_collapse_search(
    g: &Graph,
    q: usize,
    params: &OasParams,
    criterion: CollapseCriterion,
) -> Result<Option<(AttackSolution, f64)>> {
    let stop = |sol: &AttackSolution| is_collapsed(g, &sol.mask(), criterion);
    let (sol, s, _, stopped) = oas_run(g, q, params, Some(&stop))?;
    Ok(stopped.map(|_| (sol, s)))
}

fn oas_run(
    g: &Graph,
    q: usize,
    params: &OasParams,
    stop: Option<&dyn Fn(&AttackSolution) -> bool>,
) -> RunResult {
    let n = g.node_count();
    check_q(q, n)?;
    params.validate()?;

    let mut init_rng = stream_rng(params.seed, INIT_STREAM);
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..q {
        let j = init_rng.random_range(i..n);
        ids.swap(i, j);
    }
    let mut best = AttackSolution::from_attack_set(n, &ids[..q])?;
    let mut best_s = s_of_q(g, &best);
    let mut trace = vec![(0, best_s)];

    if stop.is_some_and(|pred| pred(&best)) {
        return Ok((best, best_s, trace, Some(0)));
    }
    if q == n {
        return Ok((best, best_s, trace, None));
    }

    let mut tabu: VecDeque<usize> = VecDeque::new();
    for iteration in 0..params.max_iterations {
        let attacked = best.attack_set();
        let present: Vec<usize> = (0..n).filter(|&v| best.is_present(v)).collect();
        let mut generation_best: Option<(AttackSolution, f64, usize, usize)> = None;
        for candidate in 0..params.population_size {
            let mut rng = stream_rng(
                params.seed,
                candidate_stream(iteration, params.population_size, candidate),
            );
            let (mut restore, mut remove) = (0, 0);
            for attempt in 0..=10 {
                restore = attacked[rng.random_range(0..attacked.len())];
                remove = present[rng.random_range(0..present.len())];
                let touches_tabu = tabu.contains(&restore) || tabu.contains(&remove);
                if !touches_tabu || attempt == 10 {
                    break;
                }
            }
            let sol = best.swapped(restore, remove);
            let s = s_of_q(g, &sol);
            if generation_best.as_ref().is_none_or(|(_, gs, _, _)| s < *gs) {
                generation_best = Some((sol, s, restore, remove));
            }
        }
        let (sol, s, restore, remove) = generation_best.expect("population is nonempty");
        if s < best_s {
            best = sol;
            best_s = s;
            if params.tabu_length > 0 {
                tabu.push_back(restore);
                tabu.push_back(remove);
                while tabu.len() > params.tabu_length {
                    tabu.pop_front();
                }
            }
        }
        trace.push((iteration + 1, best_s));
        if stop.is_some_and(|pred| pred(&best)) {
            return Ok((best, best_s, trace, Some(iteration + 1)));
        }
    }
    Ok((best, best_s, trace, None))
}

/// Degree-based initial solution: the top-`q` degree attack.
pub fn nipa_initialize(g: &Graph, q: usize) -> Result<AttackSolution> {
    hdf_attack(g, q)
}

/// The `floor(alpha * q)` attack nodes with the highest attack probability
/// (ties by ascending id), to be kept unchanged in the next generation.
pub fn nipa_reserve(probs: &ProbabilityVector, alpha: f64, q: usize) -> Vec<usize> {
    let lambda = ((alpha * q as f64).floor() as usize).min(probs.len());
    let mut ranked: Vec<(usize, f64)> = probs.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut reserved: Vec<usize> = ranked.into_iter().take(lambda).map(|(v, _)| v).collect();
    reserved.sort_unstable();
    reserved
}

/// One mutation step: a uniformly chosen non-reserved attack node returns
/// to the network, and a uniformly chosen present node is attacked instead.
/// The attack count is preserved and reserved bits never change.
pub fn nipa_mutate(
    solution: &AttackSolution,
    reserved: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<AttackSolution> {
    let swappable: Vec<usize> = solution
        .attack_set()
        .into_iter()
        .filter(|v| !reserved.contains(v))
        .collect();
    let present: Vec<usize> = (0..solution.len())
        .filter(|&v| solution.is_present(v))
        .collect();
    if swappable.is_empty() || present.is_empty() {
        return Err(Error::NoMutationPossible);
    }
    let restore = swappable[rng.random_range(0..swappable.len())];
    let remove = present[rng.random_range(0..present.len())];
    Ok(solution.swapped(restore, remove))
}

fn mutate_weighted(
    solution: &AttackSolution,
    reserved: &[usize],
    probs: &ProbabilityVector,
    rng: &mut ChaCha8Rng,
) -> Result<AttackSolution> {
    let swappable: Vec<usize> = solution
        .attack_set()
        .into_iter()
        .filter(|v| !reserved.contains(v))
        .collect();
    let present: Vec<usize> = (0..solution.len())
        .filter(|&v| solution.is_present(v))
        .collect();
    if swappable.is_empty() || present.is_empty() {
        return Err(Error::NoMutationPossible);
    }
    // weight each swappable node by how much probability it lacks
    let total: f64 = swappable.iter().filter_map(|&v| probs.get(v)).sum();
    let weights: Vec<f64> = swappable
        .iter()
        .map(|&v| {
            if total > 0.0 {
                1.0 - probs.get(v).unwrap_or(0.0) / total
            } else {
                1.0
            }
        })
        .collect();
    let weight_sum: f64 = weights.iter().sum();
    let restore = if weight_sum > 0.0 {
        let mut draw = rng.random::<f64>() * weight_sum;
        let mut chosen = swappable[swappable.len() - 1];
        for (i, &v) in swappable.iter().enumerate() {
            draw -= weights[i];
            if draw <= 0.0 {
                chosen = v;
                break;
            }
        }
        chosen
    } else {
        swappable[rng.random_range(0..swappable.len())]
    };
    let remove = present[rng.random_range(0..present.len())];
    Ok(solution.swapped(restore, remove))
}

/// Neighborhood-information probabilistic attack search at fixed `q`.
///
/// Each iteration computes the attack probabilities of the incumbent,
/// reserves the top `floor(alpha * q)` attack nodes, derives
/// `population_size` mutated candidates from the incumbent, and accepts the
/// generation best only on strict improvement of the surviving-cluster
/// fraction.
pub fn nipa_optimize(g: &Graph, q: usize, params: &NipaParams) -> Result<(AttackSolution, f64)> {
    let (sol, s, _) = nipa_optimize_traced(g, q, params)?;
    Ok((sol, s))
}

/// [`nipa_optimize`] plus the per-iteration `(iteration, best_s)` trace.
pub fn nipa_optimize_traced(
    g: &Graph,
    q: usize,
    params: &NipaParams,
) -> Result<(AttackSolution, f64, Trace)> {
    let (sol, s, trace, _) = nipa_run(g, q, params, None)?;
    Ok((sol, s, trace))
}

/// Runs NIPA with the per-iteration collapse termination: after each
/// generation the incumbent is tested against the criterion and the loop
/// stops on the first collapse. Returns `None` when the iteration budget
/// runs out without one. This is the mode used to search minimal
/// collapsing sets.
pub fn nipa_collapse_search(
    g: &Graph,
    q: usize,
    params: &NipaParams,
    criterion: CollapseCriterion,
) -> Result<Option<(AttackSolution, f64)>> {
    let stop = |sol: &AttackSolution| is_collapsed(g, &sol.mask(), criterion);
    let (sol, s, _, stopped) = nipa_run(g, q, params, Some(&stop))?;
    Ok(stopped.map(|_| (sol, s)))
}

fn nipa_run(
    g: &Graph,
    q: usize,
    params: &NipaParams,
    stop: Option<&dyn Fn(&AttackSolution) -> bool>,
) -> RunResult {
    let n = g.node_count();
    check_q(q, n)?;
    params.validate()?;

    let mut best = nipa_initialize(g, q)?;
    let mut best_s = s_of_q(g, &best);
    let mut trace = vec![(0, best_s)];

    if stop.is_some_and(|pred| pred(&best)) {
        return Ok((best, best_s, trace, Some(0)));
    }
    if q == n {
        return Ok((best, best_s, trace, None));
    }

    for iteration in 0..params.max_iterations {
        let probs = attack_probabilities(g, &best)?;
        let reserved = nipa_reserve(&probs, params.alpha, q);
        let mut generation_best: Option<(AttackSolution, f64)> = None;
        for candidate in 0..params.population_size {
            let mut rng = stream_rng(
                params.seed,
                candidate_stream(iteration, params.population_size, candidate),
            );
            let sol = if params.weighted_swap {
                mutate_weighted(&best, &reserved, &probs, &mut rng)?
            } else {
                nipa_mutate(&best, &reserved, &mut rng)?
            };
            let s = s_of_q(g, &sol);
            if generation_best.as_ref().is_none_or(|(_, gs)| s < *gs) {
                generation_best = Some((sol, s));
            }
        }
        let (sol, s) = generation_best.expect("population is nonempty");
        // Equal-S generation bests replace the incumbent: on plateaus of the
        // objective the search keeps moving between equally good sets, which
        // is what lets the collapse termination find a fragmenting one.
        if s <= best_s {
            best = sol;
            best_s = s;
        }
        trace.push((iteration + 1, best_s));
        if stop.is_some_and(|pred| pred(&best)) {
            return Ok((best, best_s, trace, Some(iteration + 1)));
        }
    }
    Ok((best, best_s, trace, None))
}

/// Default cap on exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 2_000_000;

/// Exact minimum of the surviving-cluster fraction over all `q`-subsets,
/// breaking ties towards the lexicographically smallest attack set.
pub fn brute_force_optimum(g: &Graph, q: usize) -> Result<(AttackSolution, f64)> {
    brute_force_optimum_with_cap(g, q, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_force_optimum_with_cap(
    g: &Graph,
    q: usize,
    cap: u128,
) -> Result<(AttackSolution, f64)> {
    let n = g.node_count();
    check_q(q, n)?;
    let combinations = binomial(n, q, cap);
    if combinations > cap {
        return Err(Error::TooLarge { combinations, cap });
    }

    let mut indices: Vec<usize> = (0..q).collect();
    let mut mask = NodeMask::none(n);
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        for &v in &indices {
            mask.set_removed(v, true);
        }
        let s = g.largest_connected_cluster(&mask).len() as f64 / n as f64;
        for &v in &indices {
            mask.set_removed(v, false);
        }
        // lexicographic enumeration order makes strict < keep the smallest set
        if best.as_ref().is_none_or(|(_, bs)| s < *bs) {
            best = Some((indices.clone(), s));
        }

        // advance to the next q-combination of 0..n
        let mut i = q;
        loop {
            if i == 0 {
                let (set, s) = best.expect("at least one combination was evaluated");
                let sol = AttackSolution::from_attack_set(n, &set)?;
                return Ok((sol, s));
            }
            i -= 1;
            if indices[i] != i + n - q {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..q {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// C(n, q), saturating once it exceeds `cap`.
fn binomial(n: usize, q: usize, cap: u128) -> u128 {
    let q = q.min(n - q);
    let mut value: u128 = 1;
    for i in 0..q {
        value = value * (n - i) as u128 / (i + 1) as u128;
        if value > cap.saturating_mul(2) {
            return value;
        }
    }
    value
}
