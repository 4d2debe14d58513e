//! Shared fixtures and independent oracles for integration tests. The
//! oracles deliberately re-derive quantities from first principles (dense
//! matrices, exhaustive scans) so they share no code path with the
//! implementations they check.

// not every test target uses every oracle
#![allow(dead_code)]

use std::collections::BTreeMap;

use netdis_core::graph::{Graph, NodeMask};
use netdis_core::strategies::AttackSolution;

/// Complete graph on `n` nodes.
pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edge_list(n, &edges).unwrap()
}

/// Dense adjacency matrix of a graph.
pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut matrix = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        matrix[u][v] = true;
        matrix[v][u] = true;
    }
    matrix
}

/// Largest component by recursive depth-first search over unmasked nodes,
/// smallest-minimum-id component on size ties. Cross-checks the BFS-based
/// implementation.
pub fn largest_component_dfs(g: &Graph, mask: &NodeMask) -> Vec<usize> {
    let n = g.node_count();
    let matrix = adjacency_matrix(g);
    let mut seen = vec![false; n];
    let mut best: Vec<usize> = Vec::new();

    fn visit(v: usize, matrix: &Vec<Vec<bool>>, mask: &NodeMask, seen: &mut [bool], out: &mut Vec<usize>) {
        seen[v] = true;
        out.push(v);
        for (u, &adjacent) in matrix[v].iter().enumerate() {
            if adjacent && !seen[u] && !mask.is_removed(u) {
                visit(u, matrix, mask, seen, out);
            }
        }
    }

    for start in 0..n {
        if seen[start] || mask.is_removed(start) {
            continue;
        }
        let mut component = Vec::new();
        visit(start, &matrix, mask, &mut seen, &mut component);
        if component.len() > best.len() {
            best = component;
        }
    }
    best.sort_unstable();
    best
}

/// Betweenness by Floyd–Warshall distance/path counting: O(N^3), entirely
/// different machinery from the BFS accumulation it verifies. Scores count
/// each unordered pair once.
pub fn betweenness_floyd_warshall(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let inf = usize::MAX / 2;
    let mut dist = vec![vec![inf; n]; n];
    let mut paths = vec![vec![0f64; n]; n];
    for v in 0..n {
        dist[v][v] = 0;
        paths[v][v] = 1.0;
    }
    for (u, v) in g.edges() {
        dist[u][v] = 1;
        dist[v][u] = 1;
        paths[u][v] = 1.0;
        paths[v][u] = 1.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][k] + dist[k][j] < dist[i][j] {
                    dist[i][j] = dist[i][k] + dist[k][j];
                    paths[i][j] = paths[i][k] * paths[k][j];
                } else if dist[i][k] + dist[k][j] == dist[i][j] && k != i && k != j && dist[i][j] < inf
                {
                    paths[i][j] += paths[i][k] * paths[k][j];
                }
            }
        }
    }
    let mut score = vec![0.0; n];
    for v in 0..n {
        for i in 0..n {
            if i == v {
                continue;
            }
            for j in i + 1..n {
                if j == v || dist[i][j] >= inf {
                    continue;
                }
                if dist[i][v] + dist[v][j] == dist[i][j] {
                    score[v] += paths[i][v] * paths[v][j] / paths[i][j];
                }
            }
        }
    }
    score
}

/// Importance measure recomputed literally from its definition on dense
/// matrices: remove attack nodes, find the largest cluster, exclude its
/// members from a copy of the adjacency, then sum contribution-weighted
/// original degrees of each attack node's remaining neighbors.
pub fn naive_importance_measure(g: &Graph, solution: &AttackSolution) -> BTreeMap<usize, f64> {
    let n = g.node_count();
    let attack = solution.attack_set();
    let matrix = adjacency_matrix(g);

    let mask = NodeMask::from_removed(n, attack.iter().copied());
    let cluster = largest_component_dfs(g, &mask);
    let mut reduced = matrix.clone();
    for &c in &cluster {
        reduced[c] = vec![false; n];
        for row in reduced.iter_mut() {
            row[c] = false;
        }
    }

    let degree = |u: usize| matrix[u].iter().filter(|&&a| a).count() as f64;
    let ratio = |u: usize| {
        let touches = attack.iter().filter(|&&a| matrix[u][a]).count();
        1.0 / touches as f64
    };

    let mut measures = BTreeMap::new();
    for &j in &attack {
        let mut im = 0.0;
        for (u, &adjacent) in reduced[j].iter().enumerate() {
            if adjacent {
                im += ratio(u) * degree(u);
            }
        }
        measures.insert(j, im);
    }
    measures
}

/// Deterministic pseudo-random graph for oracle sweeps: mixes the three
/// generator families by `index`.
pub fn mixed_model_graph(index: u64, n: usize) -> Graph {
    match index % 3 {
        0 => netdis_core::netgen::generate_er(n, 0.35, 1000 + index).unwrap(),
        1 => netdis_core::netgen::generate_ba(n, 2, 2, 2000 + index).unwrap(),
        _ => netdis_core::netgen::generate_ws(n, 2, 0.4, 3000 + index).unwrap(),
    }
}
