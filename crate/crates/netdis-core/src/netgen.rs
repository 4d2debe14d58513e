//! Seeded network generators and embedded benchmark graphs.
//!
//! All generators are pure functions of `(spec, seed)`: the same inputs
//! produce a bit-identical graph on every platform. Draws come from a
//! dedicated stream (see [`crate::rng`]) so generation never shares state
//! with optimizer draws.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::stream_rng;

/// Stream id for generator draws.
const GENERATOR_STREAM: u64 = 0;

/// Zachary's karate club, 34 nodes / 78 edges, 1-based ids as published.
const KARATE_EDGES: [(usize, usize); 78] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 11),
    (1, 12),
    (1, 13),
    (1, 14),
    (1, 18),
    (1, 20),
    (1, 22),
    (1, 32),
    (2, 3),
    (2, 4),
    (2, 8),
    (2, 14),
    (2, 18),
    (2, 20),
    (2, 22),
    (2, 31),
    (3, 4),
    (3, 8),
    (3, 9),
    (3, 10),
    (3, 14),
    (3, 28),
    (3, 29),
    (3, 33),
    (4, 8),
    (4, 13),
    (4, 14),
    (5, 7),
    (5, 11),
    (6, 7),
    (6, 11),
    (6, 17),
    (7, 17),
    (9, 31),
    (9, 33),
    (9, 34),
    (10, 34),
    (14, 34),
    (15, 33),
    (15, 34),
    (16, 33),
    (16, 34),
    (19, 33),
    (19, 34),
    (20, 34),
    (21, 33),
    (21, 34),
    (23, 33),
    (23, 34),
    (24, 26),
    (24, 28),
    (24, 30),
    (24, 33),
    (24, 34),
    (25, 26),
    (25, 28),
    (25, 32),
    (26, 32),
    (27, 30),
    (27, 34),
    (28, 34),
    (29, 32),
    (29, 34),
    (30, 33),
    (30, 34),
    (31, 33),
    (31, 34),
    (32, 33),
    (32, 34),
    (33, 34),
];

/// A 16-node benchmark (1-based ids) where the highest-degree node is a
/// decoy: node 2 has the top degree but attacking node 1 fragments the
/// graph far more. Useful for exercising the two-hop importance measure.
const EXAMPLE16_EDGES: [(usize, usize); 16] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 6),
    (2, 7),
    (2, 8),
    (3, 9),
    (5, 10),
    (5, 11),
    (5, 12),
    (4, 13),
    (4, 14),
    (4, 15),
    (13, 16),
];

fn from_one_based(n: usize, edges: &[(usize, usize)]) -> Graph {
    let shifted: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    Graph::from_edge_list(n, &shifted).expect("embedded edge list is valid")
}

/// The Zachary karate club graph (N=34, M=78), internally 0-based.
pub fn karate() -> Graph {
    from_one_based(34, &KARATE_EDGES)
}

/// The embedded 16-node decoy-hub benchmark, internally 0-based.
pub fn example16() -> Graph {
    from_one_based(16, &EXAMPLE16_EDGES)
}

/// Which random-graph family (or embedded benchmark) to build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NetworkModel {
    /// Barabási–Albert preferential attachment. `p` is accepted for
    /// compatibility with published parameter tables but plays no role in
    /// standard preferential attachment and is ignored.
    Ba {
        m: usize,
        m0: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
    },
    /// Erdős–Rényi G(n, p).
    Er { p: f64 },
    /// Watts–Strogatz ring rewiring with mean degree `m`.
    Ws { m: usize, p: f64 },
    Karate,
    Example16,
    /// Edge-list file; `one_based` selects the id convention of the file.
    File { path: String, one_based: bool },
}

/// A buildable network description: model, size and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub model: NetworkModel,
    pub n: usize,
    pub seed: u64,
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<()> {
        match &self.model {
            NetworkModel::Ba { m, m0, .. } => {
                if !(1 <= *m && *m <= *m0 && *m0 < self.n) {
                    return Err(Error::InvalidSpec(format!(
                        "BA requires 1 <= m <= m0 < n, got m={m}, m0={m0}, n={}",
                        self.n
                    )));
                }
            }
            NetworkModel::Er { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidSpec(format!("ER requires 0 <= p <= 1, got p={p}")));
                }
            }
            NetworkModel::Ws { m, p } => {
                if *m % 2 != 0 || *m >= self.n {
                    return Err(Error::InvalidSpec(format!(
                        "WS requires even m < n, got m={m}, n={}",
                        self.n
                    )));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidSpec(format!("WS requires 0 <= p <= 1, got p={p}")));
                }
            }
            NetworkModel::Karate | NetworkModel::Example16 | NetworkModel::File { .. } => {}
        }
        Ok(())
    }

    /// Builds the graph this spec describes.
    pub fn build(&self) -> Result<Graph> {
        self.validate()?;
        match &self.model {
            NetworkModel::Ba { m, m0, .. } => generate_ba(self.n, *m, *m0, self.seed),
            NetworkModel::Er { p } => generate_er(self.n, *p, self.seed),
            NetworkModel::Ws { m, p } => generate_ws(self.n, *m, *p, self.seed),
            NetworkModel::Karate => Ok(karate()),
            NetworkModel::Example16 => Ok(example16()),
            NetworkModel::File { path, one_based } => {
                let file = std::fs::File::open(path)?;
                read_edge_list(std::io::BufReader::new(file), *one_based)
            }
        }
    }

    /// Same spec with a different seed; embedded benchmarks ignore it.
    pub fn with_seed(&self, seed: u64) -> NetworkSpec {
        NetworkSpec {
            model: self.model.clone(),
            n: self.n,
            seed,
        }
    }
}

/// Barabási–Albert preferential attachment: the first `m0` nodes are wired
/// as a path, then each new node attaches `m` edges to distinct existing
/// nodes with probability proportional to current degree. Edge count is
/// always `(m0 - 1) + m * (n - m0)`.
pub fn generate_ba(n: usize, m: usize, m0: usize, seed: u64) -> Result<Graph> {
    NetworkSpec {
        model: NetworkModel::Ba { m, m0, p: None },
        n,
        seed,
    }
    .validate()?;
    let mut rng = stream_rng(seed, GENERATOR_STREAM);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity((m0 - 1) + m * (n - m0));
    // One pool entry per edge endpoint makes a uniform pool draw
    // degree-proportional.
    let mut pool: Vec<usize> = Vec::new();
    for i in 0..m0 - 1 {
        edges.push((i, i + 1));
        pool.push(i);
        pool.push(i + 1);
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    for v in m0..n {
        chosen.clear();
        while chosen.len() < m {
            let target = if pool.is_empty() {
                rng.random_range(0..v)
            } else {
                pool[rng.random_range(0..pool.len())]
            };
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        for &t in &chosen {
            edges.push((t, v));
            pool.push(t);
            pool.push(v);
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Erdős–Rényi G(n, p): each unordered pair is an edge independently with
/// probability `p`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    NetworkSpec {
        model: NetworkModel::Er { p },
        n,
        seed,
    }
    .validate()?;
    let mut rng = stream_rng(seed, GENERATOR_STREAM);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Watts–Strogatz: ring lattice connecting each node to `m/2` neighbors on
/// each side, then each lattice edge's far endpoint is rewired with
/// probability `p` to a uniform non-duplicate, non-self target. A rewire
/// that cannot find a valid target within `n` tries keeps the original
/// edge, so the edge count is always `n * m / 2`.
pub fn generate_ws(n: usize, m: usize, p: f64, seed: u64) -> Result<Graph> {
    NetworkSpec {
        model: NetworkModel::Ws { m, p },
        n,
        seed,
    }
    .validate()?;
    let mut rng = stream_rng(seed, GENERATOR_STREAM);
    let mut adjacency: Vec<std::collections::BTreeSet<usize>> =
        vec![std::collections::BTreeSet::new(); n];
    let half = m / 2;
    for d in 1..=half {
        for i in 0..n {
            let j = (i + d) % n;
            adjacency[i].insert(j);
            adjacency[j].insert(i);
        }
    }
    for d in 1..=half {
        for i in 0..n {
            let j = (i + d) % n;
            if !adjacency[i].contains(&j) {
                continue; // already rewired away by an earlier pass
            }
            if rng.random::<f64>() >= p {
                continue;
            }
            let mut target = None;
            for _ in 0..n {
                let t = rng.random_range(0..n);
                if t != i && !adjacency[i].contains(&t) {
                    target = Some(t);
                    break;
                }
            }
            if let Some(t) = target {
                adjacency[i].remove(&j);
                adjacency[j].remove(&i);
                adjacency[i].insert(t);
                adjacency[t].insert(i);
            }
        }
    }
    let mut edges = Vec::with_capacity(n * half);
    for (i, nbrs) in adjacency.iter().enumerate() {
        for &j in nbrs {
            if i < j {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Reads a whitespace-separated edge list; lines starting with `#` are
/// ignored. Node count is inferred from the largest id seen.
pub fn read_edge_list<R: BufRead>(reader: R, one_based: bool) -> Result<Graph> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two node ids, got {trimmed:?}"),
                })
            }
        };
        let parse = |token: &str| -> Result<usize> {
            let raw: usize = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id {token:?}"),
            })?;
            if one_based {
                raw.checked_sub(1).ok_or(Error::Parse {
                    line: line_no,
                    message: "node id 0 in 1-based input".to_string(),
                })
            } else {
                Ok(raw)
            }
        };
        let (u, v) = (parse(u)?, parse(v)?);
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::InvalidInput("edge list contains no edges".to_string()));
    }
    Graph::from_edge_list(max_id + 1, &edges)
}

/// Writes the graph as one edge per line, ascending.
pub fn write_edge_list<W: Write>(g: &Graph, mut writer: W, one_based: bool) -> Result<()> {
    let base = usize::from(one_based);
    for (u, v) in g.edges() {
        writeln!(writer, "{} {}", u + base, v + base)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeMask;

    #[test]
    fn karate_shape() {
        let g = karate();
        assert_eq!(g.node_count(), 34);
        assert_eq!(g.edge_count(), 78);
        assert_eq!(g.largest_connected_cluster(&NodeMask::none(34)).len(), 34);
        // published degrees, 1-based nodes 34 and 1
        assert_eq!(g.degree(33, None).unwrap(), 17);
        assert_eq!(g.degree(0, None).unwrap(), 16);
    }

    #[test]
    fn example16_degrees_match_construction() {
        let g = example16();
        assert_eq!(g.node_count(), 16);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.degree(1, None).unwrap(), 5); // node 2, the decoy hub
        for v in [0, 3, 4] {
            assert_eq!(g.degree(v, None).unwrap(), 4);
        }
        assert_eq!(g.degree(2, None).unwrap(), 3);
    }

    #[test]
    fn example16_fragmentation_after_double_hub_attack() {
        // removing nodes 1 and 2 (1-based) leaves {4,13,14,15,16} as the
        // largest surviving cluster
        let g = example16();
        let mask = NodeMask::from_removed(16, [0, 1]);
        assert_eq!(g.largest_connected_cluster(&mask), vec![3, 12, 13, 14, 15]);
        // node 1's surviving neighborhood once the cluster is also gone
        let reduced = NodeMask::from_removed(16, [3, 12, 13, 14, 15]);
        assert_eq!(g.neighbors(0, Some(&reduced)).unwrap(), vec![1, 2, 4]);
    }

    #[test]
    fn ba_tree_when_m_is_one() {
        let g = generate_ba(4, 1, 1, 99).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.largest_connected_cluster(&NodeMask::none(4)).len(), 4);
    }

    #[test]
    fn ba_edge_count_formula() {
        let g = generate_ba(300, 3, 3, 7).unwrap();
        assert_eq!(g.edge_count(), 2 + 3 * 297);
        let degree_sum: usize = (0..300).map(|v| g.degree(v, None).unwrap()).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn ba_rejects_bad_params() {
        assert!(generate_ba(5, 3, 2, 0).is_err());
        assert!(generate_ba(3, 1, 3, 0).is_err());
    }

    #[test]
    fn ba_early_nodes_gain_highest_mean_degree() {
        // statistical sanity with wide tolerance: the seed nodes of the
        // preferential attachment should dominate mean degree
        let trials = 40;
        let n = 120;
        let m0 = 3;
        let mut early = 0.0;
        let mut late = 0.0;
        for seed in 0..trials {
            let g = generate_ba(n, 2, m0, seed).unwrap();
            for v in 0..m0 {
                early += g.degree(v, None).unwrap() as f64;
            }
            for v in n - m0..n {
                late += g.degree(v, None).unwrap() as f64;
            }
        }
        assert!(early / (trials as f64 * m0 as f64) > late / (trials as f64 * m0 as f64));
    }

    #[test]
    fn er_extremes() {
        let g0 = generate_er(10, 0.0, 1).unwrap();
        assert_eq!(g0.edge_count(), 0);
        let g1 = generate_er(10, 1.0, 1).unwrap();
        assert_eq!(g1.edge_count(), 45);
    }

    #[test]
    fn er_mean_edge_count_near_expectation() {
        // mean over 1000 seeds vs binomial expectation; 3 sigma of the mean
        let n = 300;
        let p = 0.02;
        let pairs = (n * (n - 1) / 2) as f64;
        let expected = pairs * p;
        let sigma_mean = (pairs * p * (1.0 - p) / 1000.0).sqrt();
        let mut total = 0.0;
        for seed in 0..1000 {
            total += generate_er(n, p, seed).unwrap().edge_count() as f64;
        }
        let mean = total / 1000.0;
        assert!(
            (mean - expected).abs() < 3.0 * sigma_mean,
            "mean {mean} vs expected {expected} (3 sigma {})",
            3.0 * sigma_mean
        );
    }

    #[test]
    fn ws_lattice_when_p_zero() {
        let g = generate_ws(10, 4, 0.0, 5).unwrap();
        assert_eq!(g.edge_count(), 20);
        for v in 0..10 {
            assert_eq!(g.degree(v, None).unwrap(), 4);
        }
    }

    #[test]
    fn ws_edge_count_conserved_under_rewiring() {
        for seed in 0..20 {
            let g = generate_ws(10, 4, 0.7, seed).unwrap();
            assert_eq!(g.edge_count(), 20);
        }
        let g = generate_ws(300, 4, 0.5, 11).unwrap();
        assert_eq!(g.edge_count(), 600);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(generate_ba(50, 2, 3, 123).unwrap(), generate_ba(50, 2, 3, 123).unwrap());
        assert_eq!(generate_er(50, 0.1, 123).unwrap(), generate_er(50, 0.1, 123).unwrap());
        assert_eq!(
            generate_ws(50, 4, 0.3, 123).unwrap(),
            generate_ws(50, 4, 0.3, 123).unwrap()
        );
        assert_ne!(generate_er(50, 0.1, 123).unwrap(), generate_er(50, 0.1, 124).unwrap());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = karate();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf, true).unwrap();
        let back = read_edge_list(&buf[..], true).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_parses_one_based_path() {
        let g = read_edge_list("1 2\n2 3\n".as_bytes(), true).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1, None).unwrap(), vec![0, 2]);
    }

    #[test]
    fn edge_list_comments_and_errors() {
        let g = read_edge_list("# header\n0 1\n\n1 2\n".as_bytes(), false).unwrap();
        assert_eq!(g.edge_count(), 2);
        match read_edge_list("1 x\n".as_bytes(), true) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error at line 1, got {other:?}"),
        }
        match read_edge_list("1 2 3\n".as_bytes(), true) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error at line 1, got {other:?}"),
        }
        match read_edge_list("1 2\n0 2\n".as_bytes(), true) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error for id 0 in 1-based input, got {other:?}"),
        }
    }
}
