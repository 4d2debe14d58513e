//! Undirected simple-graph substrate.
//!
//! A [`Graph`] is immutable after construction. Node removal is expressed
//! through a [`NodeMask`] instead of mutating or copying adjacency; the
//! optimizers evaluate thousands of candidate removals per generation and
//! every query here accepts a mask for that reason.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Immutable undirected simple graph over nodes `0..n`.
///
/// Stored in compressed sparse row form with neighbor lists sorted
/// ascending, which makes structural equality canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse to one; self-loops are rejected.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::InvalidNode { node: u, n });
            }
            if v >= n {
                return Err(Error::InvalidNode { node: v, n });
            }
            if u == v {
                return Err(Error::InvalidEdge { node: u });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in &set {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut adjacency = vec![0usize; acc];
        let mut cursor = offsets[..n].to_vec();
        for &(u, v) in &set {
            adjacency[cursor[u]] = v;
            cursor[u] += 1;
            adjacency[cursor[v]] = u;
            cursor[v] += 1;
        }
        // BTreeSet order inserts each node's neighbors ascending already for
        // the first endpoint, but not for the second; sort per node.
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(Graph {
            offsets,
            adjacency,
            edge_count: set.len(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `v` in the intact graph, ascending.
    pub fn neighbor_slice(&self, v: usize) -> &[usize] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbor_slice(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbor_slice(u).binary_search(&v).is_ok()
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.node_count() {
            return Err(Error::InvalidNode {
                node: v,
                n: self.node_count(),
            });
        }
        Ok(())
    }

    /// Degree of `v`, counting only unmasked neighbors when a mask is given.
    /// A masked `v` has degree 0.
    pub fn degree(&self, v: usize, mask: Option<&NodeMask>) -> Result<usize> {
        self.check_node(v)?;
        match mask {
            None => Ok(self.neighbor_slice(v).len()),
            Some(m) => {
                if m.is_removed(v) {
                    return Ok(0);
                }
                Ok(self
                    .neighbor_slice(v)
                    .iter()
                    .filter(|&&u| !m.is_removed(u))
                    .count())
            }
        }
    }

    /// Unmasked neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize, mask: Option<&NodeMask>) -> Result<Vec<usize>> {
        self.check_node(v)?;
        match mask {
            None => Ok(self.neighbor_slice(v).to_vec()),
            Some(m) => Ok(self
                .neighbor_slice(v)
                .iter()
                .copied()
                .filter(|&u| !m.is_removed(u))
                .collect()),
        }
    }

    /// Node set of the largest connected component among unmasked nodes,
    /// sorted ascending. Ties go to the component containing the smallest
    /// node id. Empty when every node is masked.
    pub fn largest_connected_cluster(&self, mask: &NodeMask) -> Vec<usize> {
        let n = self.node_count();
        debug_assert_eq!(mask.len(), n);
        let mut visited = vec![false; n];
        let mut best: Vec<usize> = Vec::new();
        let mut queue = Vec::new();
        let mut component = Vec::new();
        for start in 0..n {
            if visited[start] || mask.is_removed(start) {
                continue;
            }
            component.clear();
            queue.clear();
            visited[start] = true;
            queue.push(start);
            while let Some(v) = queue.pop() {
                component.push(v);
                for &u in self.neighbor_slice(v) {
                    if !visited[u] && !mask.is_removed(u) {
                        visited[u] = true;
                        queue.push(u);
                    }
                }
            }
            // Strict > keeps the earlier (smallest min-id) component on ties:
            // start nodes are scanned in ascending order.
            if component.len() > best.len() {
                std::mem::swap(&mut best, &mut component);
            }
        }
        best.sort_unstable();
        best
    }

    fn masked_degree_sums(&self, mask: &NodeMask) -> Result<(u64, u64, usize)> {
        let n = self.node_count();
        debug_assert_eq!(mask.len(), n);
        let mut sum_k = 0u64;
        let mut sum_k2 = 0u64;
        let mut unmasked = 0usize;
        for v in 0..n {
            if mask.is_removed(v) {
                continue;
            }
            unmasked += 1;
            let k = self
                .neighbor_slice(v)
                .iter()
                .filter(|&&u| !mask.is_removed(u))
                .count() as u64;
            sum_k += k;
            sum_k2 += k * k;
        }
        if unmasked == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok((sum_k, sum_k2, unmasked))
    }

    /// Percolation ratio `<k^2>/<k>` over unmasked nodes with mask-respecting
    /// degrees. An edgeless remainder yields 0 by convention (treated as fully
    /// disintegrated); a fully masked graph is an error.
    pub fn kappa(&self, mask: &NodeMask) -> Result<f64> {
        let (sum_k, sum_k2, _) = self.masked_degree_sums(mask)?;
        if sum_k == 0 {
            return Ok(0.0);
        }
        Ok(sum_k2 as f64 / sum_k as f64)
    }

    /// Normalized degree ratio `<k^2>/<k>^2` over unmasked nodes. Published
    /// disintegration reports sometimes quote this quantity in place of
    /// `<k^2>/<k>`; it is exposed for reproducing such figures and is not
    /// used as a collapse criterion.
    pub fn degree_heterogeneity(&self, mask: &NodeMask) -> Result<f64> {
        let (sum_k, sum_k2, unmasked) = self.masked_degree_sums(mask)?;
        if sum_k == 0 {
            return Ok(0.0);
        }
        Ok(sum_k2 as f64 * unmasked as f64 / (sum_k as f64 * sum_k as f64))
    }
}

/// Boolean removal vector over a graph's nodes; `true` means logically
/// removed. Plain data, freely copyable and sendable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMask {
    removed: Vec<bool>,
}

impl NodeMask {
    /// Mask with every node present.
    pub fn none(n: usize) -> NodeMask {
        NodeMask {
            removed: vec![false; n],
        }
    }

    /// Mask removing exactly the listed nodes.
    pub fn from_removed<I: IntoIterator<Item = usize>>(n: usize, removed: I) -> NodeMask {
        let mut mask = NodeMask::none(n);
        for v in removed {
            mask.removed[v] = true;
        }
        mask
    }

    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }

    pub fn is_removed(&self, v: usize) -> bool {
        self.removed[v]
    }

    pub fn set_removed(&mut self, v: usize, removed: bool) {
        self.removed[v] = removed;
    }

    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn from_edge_list_builds_path() {
        let g = path3();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbor_slice(1), &[0, 2]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        match Graph::from_edge_list(2, &[(0, 0)]) {
            Err(Error::InvalidEdge { node: 0 }) => {}
            other => panic!("expected InvalidEdge, got {other:?}"),
        }
    }

    #[test]
    fn endpoint_out_of_range_rejected() {
        assert!(matches!(
            Graph::from_edge_list(2, &[(0, 2)]),
            Err(Error::InvalidNode { node: 2, n: 2 })
        ));
    }

    #[test]
    fn degree_respects_mask() {
        let g = path3();
        assert_eq!(g.degree(1, None).unwrap(), 2);
        let mask = NodeMask::from_removed(3, [0]);
        assert_eq!(g.degree(1, Some(&mask)).unwrap(), 1);
        assert_eq!(g.degree(0, Some(&mask)).unwrap(), 0);
        assert!(g.degree(3, None).is_err());
    }

    #[test]
    fn complete_graph_degree() {
        let edges: Vec<_> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        let g = Graph::from_edge_list(4, &edges).unwrap();
        for v in 0..4 {
            assert_eq!(g.degree(v, None).unwrap(), 3);
        }
    }

    #[test]
    fn neighbors_of_middle_and_isolated() {
        let g = path3();
        assert_eq!(g.neighbors(1, None).unwrap(), vec![0, 2]);
        let g2 = Graph::from_edge_list(3, &[(0, 1)]).unwrap();
        assert!(g2.neighbors(2, None).unwrap().is_empty());
    }

    #[test]
    fn lcc_tie_breaks_to_smallest_id() {
        let g = path3();
        let mask = NodeMask::from_removed(3, [1]);
        assert_eq!(g.largest_connected_cluster(&mask), vec![0]);
    }

    #[test]
    fn lcc_empty_when_all_masked() {
        let g = path3();
        let mask = NodeMask::from_removed(3, [0, 1, 2]);
        assert!(g.largest_connected_cluster(&mask).is_empty());
    }

    #[test]
    fn kappa_star_and_complete() {
        let star = Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        // degrees 3,1,1,1: <k^2> = 3, <k> = 1.5
        assert!((star.kappa(&NodeMask::none(4)).unwrap() - 2.0).abs() < 1e-12);

        let edges: Vec<_> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        let k4 = Graph::from_edge_list(4, &edges).unwrap();
        assert!((k4.kappa(&NodeMask::none(4)).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_edgeless_is_zero_and_empty_errors() {
        let g = Graph::from_edge_list(3, &[]).unwrap();
        assert_eq!(g.kappa(&NodeMask::none(3)).unwrap(), 0.0);
        assert!(matches!(
            g.kappa(&NodeMask::from_removed(3, [0, 1, 2])),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let sum: usize = (0..5).map(|v| g.degree(v, None).unwrap()).sum();
        assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn graph_and_mask_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Graph>();
        assert_send_sync::<NodeMask>();
    }
}
