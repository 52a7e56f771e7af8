//! Immutable undirected simple graph with contiguous node indices.
//!
//! Every downstream module relies on the invariants established here:
//! no self-loops, no duplicate edges, canonical edge orientation `u < w`,
//! edges sorted lexicographically, and adjacency lists holding incident
//! edge indices in ascending order. Graphs are immutable after
//! construction and safe to share across worker threads.

use std::collections::BTreeMap;

use crate::weighting::WeightScheme;

/// Compacted node index in `0..node_count`.
pub type NodeId = u32;
/// Index into the canonical edge list.
pub type EdgeId = u32;

/// Undirected simple graph. Edges are stored once in canonical orientation
/// `(u, w)` with `u < w`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph from already-canonical edges: every pair must satisfy
    /// `u < w < node_count` and appear at most once.
    pub fn from_canonical_edges(
        node_count: usize,
        edges: Vec<(NodeId, NodeId)>,
    ) -> crate::Result<Self> {
        let mut sorted = edges;
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(crate::Error::Config(format!(
                    "duplicate edge ({}, {})",
                    pair[0].0, pair[0].1
                )));
            }
        }
        for &(u, w) in &sorted {
            if u >= w {
                return Err(crate::Error::Config(format!(
                    "edge ({u}, {w}) is not in canonical orientation u < w"
                )));
            }
            if w as usize >= node_count {
                return Err(crate::Error::Config(format!(
                    "edge ({u}, {w}) references a node >= node_count {node_count}"
                )));
            }
        }
        Ok(Self::from_sorted_unchecked(node_count, sorted))
    }

    fn from_sorted_unchecked(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for (k, &(u, w)) in edges.iter().enumerate() {
            adjacency[u as usize].push(k as EdgeId);
            adjacency[w as usize].push(k as EdgeId);
        }
        // Pushing in edge order keeps every adjacency list ascending, which
        // fixes the accumulation order of all weight sums downstream.
        Graph {
            node_count,
            edges,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Canonical endpoints `(u, w)` with `u < w`.
    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e as usize]
    }

    /// Edge indices incident to `v`, ascending. Panics if `v` is out of range.
    pub fn incident_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v as usize].len()
    }

    /// The endpoint of `e` that is not `v`.
    pub fn opposite(&self, e: EdgeId, v: NodeId) -> NodeId {
        let (u, w) = self.endpoints(e);
        if u == v {
            w
        } else {
            u
        }
    }

    /// Cross-checks the adjacency structure against the edge list in
    /// O(sum of degrees). Used by tests and debug assertions.
    pub fn check_consistency(&self) -> bool {
        let mut seen = vec![0usize; self.edges.len()];
        for (v, list) in self.adjacency.iter().enumerate() {
            for &k in list {
                let Some(&(u, w)) = self.edges.get(k as usize) else {
                    return false;
                };
                if u as usize != v && w as usize != v {
                    return false;
                }
                seen[k as usize] += 1;
            }
        }
        seen.iter().all(|&c| c == 2)
    }
}

/// Result of [`build_graph`]: the compacted graph plus everything needed to
/// map back to the raw input.
#[derive(Debug, Clone)]
pub struct BuiltGraph {
    pub graph: Graph,
    /// Original (pre-compaction) id of each node, ascending.
    pub original_ids: Vec<u64>,
    /// How many raw input pairs were merged into each canonical edge.
    pub multiplicity: Vec<u64>,
    /// Sum of raw weights merged into each canonical edge (1 per occurrence
    /// for unweighted input).
    pub weight_sum: Vec<f64>,
    pub self_loops_dropped: usize,
}

impl BuiltGraph {
    /// Maps an original node id to its compacted index, if present.
    pub fn compact_id(&self, original: u64) -> Option<NodeId> {
        self.original_ids
            .binary_search(&original)
            .ok()
            .map(|i| i as NodeId)
    }
}

/// Builds the canonical graph from raw node-index pairs: self-loops are
/// dropped, duplicates (in either orientation) are merged with multiplicity
/// counts retained, and node ids are compacted to `0..n` in ascending order
/// of the original ids. Empty input yields an empty graph.
pub fn build_graph(raw_edges: &[(u64, u64)]) -> BuiltGraph {
    build_weighted(raw_edges.iter().map(|&(a, b)| (a, b, 1.0)))
}

/// Same as [`build_graph`] for input carrying a raw per-occurrence weight;
/// weights of merged duplicates accumulate in `weight_sum`.
pub fn build_graph_weighted(raw_edges: &[(u64, u64, f64)]) -> BuiltGraph {
    build_weighted(raw_edges.iter().copied())
}

fn build_weighted(raw: impl Iterator<Item = (u64, u64, f64)> + Clone) -> BuiltGraph {
    // Nodes are kept even when they only appear in self-loops.
    let mut ids: Vec<u64> = raw.clone().flat_map(|(a, b, _)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();

    let index_of = |id: u64| ids.binary_search(&id).expect("id collected above") as NodeId;

    let mut merged: BTreeMap<(NodeId, NodeId), (u64, f64)> = BTreeMap::new();
    let mut self_loops = 0usize;
    for (a, b, weight) in raw {
        if a == b {
            self_loops += 1;
            continue;
        }
        let (u, w) = {
            let (x, y) = (index_of(a), index_of(b));
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        };
        let entry = merged.entry((u, w)).or_insert((0, 0.0));
        entry.0 += 1;
        entry.1 += weight;
    }

    let mut edges = Vec::with_capacity(merged.len());
    let mut multiplicity = Vec::with_capacity(merged.len());
    let mut weight_sum = Vec::with_capacity(merged.len());
    for ((u, w), (count, sum)) in merged {
        edges.push((u, w));
        multiplicity.push(count);
        weight_sum.push(sum);
    }

    BuiltGraph {
        graph: Graph::from_sorted_unchecked(ids.len(), edges),
        original_ids: ids,
        multiplicity,
        weight_sum,
        self_loops_dropped: self_loops,
    }
}

/// Per-node degrees: incident edge count, or the sum of incident edge
/// weights when a scheme is given.
pub fn degree_values(g: &Graph, weights: Option<&WeightScheme>) -> Vec<f64> {
    (0..g.node_count() as NodeId)
        .map(|v| match weights {
            None => g.degree(v) as f64,
            Some(w) => g
                .incident_edges(v)
                .iter()
                .map(|&k| w.edge_weight(k))
                .sum(),
        })
        .collect()
}
