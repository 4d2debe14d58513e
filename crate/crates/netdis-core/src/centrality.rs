//! Node-importance computations.
//!
//! Besides the classical degree and betweenness rankings this module holds
//! the neighborhood-information measures driving the probabilistic attack
//! search: per-neighbor contribution ratios, the two-hop importance measure
//! (IM) of each attack node, and the attack-probability vector derived from
//! it.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::strategies::AttackSolution;

/// Nodes ordered by a score, descending; ties broken by ascending node id.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedNodes {
    entries: Vec<(usize, f64)>,
}

impl RankedNodes {
    fn from_scores(scores: Vec<f64>) -> RankedNodes {
        let mut entries: Vec<(usize, f64)> = scores.into_iter().enumerate().collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        RankedNodes { entries }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    /// The `q` highest-ranked nodes.
    pub fn top(&self, q: usize) -> Vec<usize> {
        self.entries.iter().take(q).map(|&(v, _)| v).collect()
    }
}

/// Attack probability per attack node. Values are nonnegative and need not
/// sum to 1: each is the node's importance measure divided by N.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    probs: BTreeMap<usize, f64>,
}

impl ProbabilityVector {
    pub fn get(&self, node: usize) -> Option<f64> {
        self.probs.get(&node).copied()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `(node, probability)` pairs ascending by node id.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().map(|(&v, &p)| (v, p))
    }
}

/// Nodes ranked by degree in the intact graph.
pub fn degree_ranking(g: &Graph) -> RankedNodes {
    let scores = (0..g.node_count())
        .map(|v| g.neighbor_slice(v).len() as f64)
        .collect();
    RankedNodes::from_scores(scores)
}

/// Exact shortest-path betweenness for every node (Brandes' accumulation
/// over BFS shortest-path DAGs). Scores are raw unordered-pair counts: each
/// node pair contributes once, split across its shortest paths.
pub fn betweenness(g: &Graph) -> RankedNodes {
    let n = g.node_count();
    let mut score = vec![0.0f64; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut delta = vec![0.0f64; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for s in 0..n {
        for v in 0..n {
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
            preds[v].clear();
        }
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbor_slice(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    // every unordered pair was accumulated from both endpoints
    for v in &mut score {
        *v /= 2.0;
    }
    RankedNodes::from_scores(score)
}

/// Contribution ratio of every node adjacent (in the original graph) to at
/// least one attack node: the reciprocal of how many attack nodes it
/// touches. Adjacent attack nodes count each other as neighbors.
pub fn contribution_ratios(g: &Graph, attack_set: &[usize]) -> Result<BTreeMap<usize, f64>> {
    if attack_set.is_empty() {
        return Err(Error::InvalidInput("attack set is empty".to_string()));
    }
    let n = g.node_count();
    let mut is_attack = vec![false; n];
    for &a in attack_set {
        if a >= n {
            return Err(Error::InvalidNode { node: a, n });
        }
        is_attack[a] = true;
    }
    let mut touches = vec![0usize; n];
    for (a, flagged) in is_attack.iter().enumerate() {
        if *flagged {
            for &u in g.neighbor_slice(a) {
                touches[u] += 1;
            }
        }
    }
    Ok(touches
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(u, &c)| (u, 1.0 / c as f64))
        .collect())
}

/// Importance measure of each attack node: the sum, over its neighbors that
/// fall outside the post-attack largest connected cluster, of the neighbor's
/// original degree weighted by its contribution ratio. Attack nodes whose
/// neighbors all survive in the cluster get 0.
pub fn importance_measure(g: &Graph, solution: &AttackSolution) -> Result<BTreeMap<usize, f64>> {
    let attack_set = solution.attack_set();
    if attack_set.is_empty() {
        return Err(Error::InvalidInput("solution attacks no nodes".to_string()));
    }
    let n = g.node_count();
    let mask = solution.mask();
    let mut in_lcc = vec![false; n];
    for v in g.largest_connected_cluster(&mask) {
        in_lcc[v] = true;
    }
    let ratios = contribution_ratios(g, &attack_set)?;
    let mut measures = BTreeMap::new();
    for &j in &attack_set {
        let mut im = 0.0;
        for &u in g.neighbor_slice(j) {
            if in_lcc[u] {
                continue;
            }
            // u is adjacent to attack node j, so it always has a ratio
            im += ratios[&u] * g.neighbor_slice(u).len() as f64;
        }
        measures.insert(j, im);
    }
    Ok(measures)
}

/// Attack probability of each attack node: its importance measure divided
/// by the node count.
pub fn attack_probabilities(g: &Graph, solution: &AttackSolution) -> Result<ProbabilityVector> {
    let n = g.node_count() as f64;
    let probs = importance_measure(g, solution)?
        .into_iter()
        .map(|(v, im)| (v, im / n))
        .collect();
    Ok(ProbabilityVector { probs })
}
