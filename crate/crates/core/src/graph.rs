//! Directed communication graphs and exact robustness analysis.
//!
//! Nodes are dense ids `0..n`. Every node keeps a self-loop: an agent always
//! hears its own message. Robustness checking is exhaustive over subset
//! pairs, so it is limited to 16 nodes; larger graphs must be certified
//! externally.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};

/// Hard cap for the exhaustive robustness check.
pub const ROBUSTNESS_NODE_CAP: usize = 16;

/// A directed communication graph with optional per-edge consensus weights.
///
/// `in_neighbors[i]` lists the nodes transmitting to `i` (self included,
/// sorted ascending). When `weights` is present, `weights[i][k]` is the
/// consensus weight node `i` puts on `in_neighbors[i][k]`; each row sums to
/// one and every retained weight stays positive. Without explicit weights the
/// graph is treated as uniformly weighted.
#[derive(Debug, Clone, PartialEq)]
pub struct CommGraph {
    n: usize,
    in_neighbors: Vec<Vec<usize>>,
    weights: Option<Vec<Vec<f64>>>,
}

impl CommGraph {
    /// Complete digraph on `n` nodes (every ordered pair, plus self-loops).
    pub fn complete(n: usize) -> Self {
        let in_neighbors = (0..n).map(|_| (0..n).collect()).collect();
        CommGraph {
            n,
            in_neighbors,
            weights: None,
        }
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0` with self-loops.
    pub fn directed_cycle(n: usize) -> Self {
        let in_neighbors = (0..n)
            .map(|i| {
                let pred = (i + n - 1) % n;
                let mut row = vec![pred, i];
                row.sort_unstable();
                row.dedup();
                row
            })
            .collect();
        CommGraph {
            n,
            in_neighbors,
            weights: None,
        }
    }

    /// Builds a graph from per-node in-neighbor lists. Self-loops are added
    /// when missing; lists are sorted and deduplicated.
    pub fn from_in_neighbors(n: usize, lists: Vec<Vec<usize>>) -> Result<Self> {
        if lists.len() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                got: lists.len(),
            });
        }
        let mut in_neighbors = Vec::with_capacity(n);
        for (i, mut row) in lists.into_iter().enumerate() {
            for &j in &row {
                if j >= n {
                    return Err(CoreError::InvalidInput(format!(
                        "in-neighbor {j} out of range for {n} nodes"
                    )));
                }
            }
            row.push(i);
            row.sort_unstable();
            row.dedup();
            in_neighbors.push(row);
        }
        Ok(CommGraph {
            n,
            in_neighbors,
            weights: None,
        })
    }

    /// Parses an edge-list description: one `src dst [weight]` triple per
    /// line, 0-based node ids, `src -> dst` meaning `src` transmits to `dst`.
    /// Blank lines and lines starting with `#` are skipped. Self-loops are
    /// implied. Either every edge carries a weight or none does; when weights
    /// are given, each node's self-loop weight is one minus the sum of its
    /// in-edge weights and must stay positive.
    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut edges: Vec<(usize, usize, Option<f64>)> = Vec::new();
        let mut max_node = 0usize;
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let src: usize = parts
                .next()
                .ok_or_else(|| CoreError::InvalidInput(format!("line {}: missing src", line_no + 1)))?
                .parse()
                .map_err(|_| CoreError::InvalidInput(format!("line {}: bad src", line_no + 1)))?;
            let dst: usize = parts
                .next()
                .ok_or_else(|| CoreError::InvalidInput(format!("line {}: missing dst", line_no + 1)))?
                .parse()
                .map_err(|_| CoreError::InvalidInput(format!("line {}: bad dst", line_no + 1)))?;
            let weight = match parts.next() {
                Some(tok) => Some(tok.parse::<f64>().map_err(|_| {
                    CoreError::InvalidInput(format!("line {}: bad weight", line_no + 1))
                })?),
                None => None,
            };
            if parts.next().is_some() {
                return Err(CoreError::InvalidInput(format!(
                    "line {}: expected `src dst [weight]`",
                    line_no + 1
                )));
            }
            max_node = max_node.max(src).max(dst);
            edges.push((src, dst, weight));
        }
        if edges.is_empty() {
            return Err(CoreError::InvalidInput("empty edge list".to_string()));
        }
        let n = max_node + 1;
        let weighted = edges.iter().any(|e| e.2.is_some());
        if weighted && edges.iter().any(|e| e.2.is_none()) {
            return Err(CoreError::InvalidInput(
                "either all edges or no edges may carry weights".to_string(),
            ));
        }

        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (src, dst, w) in edges {
            if src == dst {
                continue; // self-loops are implied
            }
            if lists[dst].iter().any(|&(s, _)| s == src) {
                return Err(CoreError::InvalidInput(format!(
                    "duplicate edge {src} -> {dst}"
                )));
            }
            lists[dst].push((src, w.unwrap_or(0.0)));
        }

        let mut in_neighbors = Vec::with_capacity(n);
        let mut weights = if weighted { Some(Vec::with_capacity(n)) } else { None };
        for (i, mut row) in lists.into_iter().enumerate() {
            if weighted {
                let in_sum: f64 = row.iter().map(|&(_, w)| w).sum();
                let self_w = 1.0 - in_sum;
                for &(src, w) in &row {
                    if w <= 0.0 {
                        return Err(CoreError::InvalidInput(format!(
                            "edge {src} -> {i}: weight must be positive"
                        )));
                    }
                }
                if self_w <= 0.0 {
                    return Err(CoreError::InvalidInput(format!(
                        "node {i}: in-edge weights sum to {in_sum}, leaving no positive self weight"
                    )));
                }
                row.push((i, self_w));
            } else {
                row.push((i, 0.0));
            }
            row.sort_unstable_by_key(|&(s, _)| s);
            in_neighbors.push(row.iter().map(|&(s, _)| s).collect::<Vec<_>>());
            if let Some(ws) = weights.as_mut() {
                ws.push(row.iter().map(|&(_, w)| w).collect::<Vec<_>>());
            }
        }
        Ok(CommGraph {
            n,
            in_neighbors,
            weights,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn in_neighbors(&self, node: usize) -> &[usize] {
        &self.in_neighbors[node]
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.in_neighbors[dst].binary_search(&src).is_ok()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Smallest weight retained anywhere in the graph (the `nu` lower bound).
    /// Uniform graphs report `1 / max in-degree`.
    pub fn min_weight(&self) -> f64 {
        match &self.weights {
            Some(ws) => ws
                .iter()
                .flat_map(|row| row.iter().copied())
                .fold(f64::INFINITY, f64::min),
            None => {
                let max_deg = self.in_neighbors.iter().map(|r| r.len()).max().unwrap_or(1);
                1.0 / max_deg as f64
            }
        }
    }

    /// Consensus weights for `node` over a retained subset of its
    /// in-neighbors. Uniform graphs return exactly `1/len`; weighted graphs
    /// renormalize the stored row over the retained set, which reduces to the
    /// stored weights when nothing was trimmed.
    pub fn consensus_weights(&self, node: usize, retained: &[usize]) -> Vec<f64> {
        match &self.weights {
            None => {
                let w = 1.0 / retained.len() as f64;
                vec![w; retained.len()]
            }
            Some(ws) => {
                let row = &self.in_neighbors[node];
                let raw: Vec<f64> = retained
                    .iter()
                    .map(|j| {
                        let k = row.binary_search(j).expect("retained node must be an in-neighbor");
                        ws[node][k]
                    })
                    .collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter().map(|w| w / total).collect()
            }
        }
    }

    fn in_mask_excluding_self(&self, node: usize) -> u32 {
        let mut mask = 0u32;
        for &j in &self.in_neighbors[node] {
            if j != node {
                mask |= 1 << j;
            }
        }
        mask
    }
}

/// A nonempty subset is zeta-reachable when some member has at least `zeta`
/// in-neighbors outside the subset (the self-loop never counts).
pub fn is_zeta_reachable(graph: &CommGraph, subset: &[usize], zeta: usize) -> Result<bool> {
    if subset.is_empty() {
        return Err(CoreError::InvalidInput("subset must be nonempty".to_string()));
    }
    let mut mask = 0u32;
    for &i in subset {
        if i >= graph.n_nodes() {
            return Err(CoreError::InvalidInput(format!("node {i} out of range")));
        }
        mask |= 1 << i;
    }
    Ok(subset_reachable(graph, mask, zeta))
}

fn subset_reachable(graph: &CommGraph, mask: u32, zeta: usize) -> bool {
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let outside = graph.in_mask_excluding_self(i) & !mask;
        if outside.count_ones() as usize >= zeta {
            return true;
        }
    }
    false
}

/// Exhaustive zeta-robustness check: for every pair of nonempty disjoint node
/// subsets at least one must be zeta-reachable. Graphs need at least two
/// nodes; graphs over [`ROBUSTNESS_NODE_CAP`] nodes are rejected.
pub fn is_zeta_robust(graph: &CommGraph, zeta: usize) -> Result<bool> {
    let n = graph.n_nodes();
    if n < 2 {
        return Err(CoreError::InvalidInput(
            "robustness is defined for graphs with at least 2 nodes".to_string(),
        ));
    }
    if n > ROBUSTNESS_NODE_CAP {
        return Err(CoreError::CapacityExceeded {
            size: n,
            cap: ROBUSTNESS_NODE_CAP,
        });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // Memoize reachability per subset mask.
    let mut reach = vec![false; (full as usize) + 1];
    for mask in 1..=full {
        reach[mask as usize] = subset_reachable(graph, mask, zeta);
    }
    for s1 in 1..=full {
        if reach[s1 as usize] {
            continue;
        }
        let comp = full & !s1;
        // Enumerate nonempty submasks of the complement.
        let mut s2 = comp;
        while s2 != 0 {
            if !reach[s2 as usize] {
                return Ok(false);
            }
            s2 = (s2 - 1) & comp;
        }
    }
    Ok(true)
}

/// Largest zeta for which the graph is zeta-robust.
pub fn max_robustness(graph: &CommGraph) -> Result<usize> {
    let n = graph.n_nodes();
    let mut best = 0;
    for zeta in 0..=n {
        if is_zeta_robust(graph, zeta)? {
            best = zeta;
        } else {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_k5_is_exactly_3_robust() {
        let g = CommGraph::complete(5);
        assert!(is_zeta_robust(&g, 3).unwrap());
        assert!(!is_zeta_robust(&g, 4).unwrap());
    }

    #[test]
    fn directed_4_cycle_is_exactly_1_robust() {
        let g = CommGraph::directed_cycle(4);
        assert!(is_zeta_robust(&g, 1).unwrap());
        assert!(!is_zeta_robust(&g, 2).unwrap());
    }

    #[test]
    fn single_node_rejected() {
        let g = CommGraph::complete(1);
        assert!(matches!(
            is_zeta_robust(&g, 0),
            Err(CoreError::InvalidInput(_))
        ));
    }

    #[test]
    fn oversized_graph_rejected() {
        let g = CommGraph::complete(17);
        assert!(matches!(
            is_zeta_robust(&g, 1),
            Err(CoreError::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn reachability_counts_outside_in_neighbors() {
        let g = CommGraph::complete(5);
        // A single node in K5 sees the other four.
        assert!(is_zeta_reachable(&g, &[2], 4).unwrap());
        assert!(!is_zeta_reachable(&g, &[2], 5).unwrap());
        // The full vertex set has no outside nodes at all.
        assert!(is_zeta_reachable(&g, &[0, 1, 2, 3, 4], 0).unwrap());
        assert!(!is_zeta_reachable(&g, &[0, 1, 2, 3, 4], 1).unwrap());
    }

    #[test]
    fn isolated_node_only_0_reachable() {
        // Node 2 receives nothing (beyond its self-loop).
        let g = CommGraph::from_in_neighbors(3, vec![vec![1], vec![0], vec![]]).unwrap();
        assert!(is_zeta_reachable(&g, &[2], 0).unwrap());
        assert!(!is_zeta_reachable(&g, &[2], 1).unwrap());
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# triangle plus a weight-free tail\n0 1\n1 2\n2 0\n0 2\n";
        let g = CommGraph::from_edge_list_str(text).unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(2, 2), "self-loop implied");
        assert!(g.has_edge(0, 2));
        assert!(!g.has_edge(1, 0));
    }

    #[test]
    fn weighted_edge_list_validates_rows() {
        let g = CommGraph::from_edge_list_str("0 1 0.25\n1 0 0.5\n").unwrap();
        assert!(g.is_weighted());
        let w = g.consensus_weights(1, &[0, 1]);
        assert!((w[0] - 0.25).abs() < 1e-15);
        assert!((w[1] - 0.75).abs() < 1e-15);
        // Over-committed row leaves no positive self weight.
        assert!(CommGraph::from_edge_list_str("0 1 0.7\n2 1 0.4\n1 0 0.1\n1 2 0.1\n").is_err());
    }

    #[test]
    fn uniform_weights_are_exact_reciprocals() {
        let g = CommGraph::complete(4);
        let w = g.consensus_weights(0, &[0, 2, 3]);
        assert_eq!(w, vec![1.0 / 3.0; 3]);
    }
}
