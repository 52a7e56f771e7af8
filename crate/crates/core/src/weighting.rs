//! Weight schemes attached to a graph and the topology-derived weightings
//! that produce them.
//!
//! Edge weights live in `(0, 1]` after normalization (the flow may later
//! push them past 1); node weights are the mean of the incident edge
//! weights and are 0 exactly on isolated nodes.
//!
//! The default `detour` weighting scores an edge by the shortest
//! alternative path between its endpoints with the edge itself removed:
//! weight `1/l` for a detour of `l` hops up to the cap, floored otherwise.
//! The `augmented` reading instead inserts virtual edges of weight `1/l`
//! between all node pairs within `l <= cap` hops. Both cap at 6 by default.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};

/// Positive per-edge weights and non-negative per-node weights for one
/// graph. Immutable once constructed; the flow builds fresh schemes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightScheme {
    edge: Vec<f64>,
    node: Vec<f64>,
}

impl WeightScheme {
    /// Validates finiteness and signs: edge weights must be strictly
    /// positive, node weights non-negative.
    pub fn new(edge_weights: Vec<f64>, node_weights: Vec<f64>) -> Result<Self> {
        for (k, &w) in edge_weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::Config(format!(
                    "edge weight {w} at index {k} must be a positive finite number"
                )));
            }
        }
        for (v, &w) in node_weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Config(format!(
                    "node weight {w} at index {v} must be a non-negative finite number"
                )));
            }
        }
        Ok(WeightScheme {
            edge: edge_weights,
            node: node_weights,
        })
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node
    }

    pub fn edge_weight(&self, e: EdgeId) -> f64 {
        self.edge[e as usize]
    }

    pub fn node_weight(&self, v: NodeId) -> f64 {
        self.node[v as usize]
    }

    pub fn matches(&self, g: &Graph) -> bool {
        self.edge.len() == g.edge_count() && self.node.len() == g.node_count()
    }

    /// Stable 64-bit digest of the weight values, used as a staleness guard
    /// on derived curvature fields.
    pub fn fingerprint(&self) -> u64 {
        const PRIME: u64 = 0x100000001b3;
        let mut h: u64 = 0xcbf29ce484222325;
        let mut mix = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        mix(self.edge.len() as u64);
        for &w in &self.edge {
            mix(w.to_bits());
        }
        mix(self.node.len() as u64);
        for &w in &self.node {
            mix(w.to_bits());
        }
        h
    }
}

/// How edge weights are derived from a snapshot's topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingMode {
    /// Shortest alternative path between the endpoints with the edge removed.
    Detour,
    /// Virtual edges of weight `1/l` for all node pairs within `cap` hops.
    Augmented,
    /// Raw merged multiplicities / weight columns, max-normalized.
    Multiplicity,
    /// All edge and node weights 1 (combinatorial baseline).
    Unit,
}

impl std::fmt::Display for WeightingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WeightingMode::Detour => "detour",
            WeightingMode::Augmented => "augmented",
            WeightingMode::Multiplicity => "multiplicity",
            WeightingMode::Unit => "unit",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for WeightingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "detour" => Ok(WeightingMode::Detour),
            "augmented" => Ok(WeightingMode::Augmented),
            "multiplicity" => Ok(WeightingMode::Multiplicity),
            "unit" => Ok(WeightingMode::Unit),
            other => Err(Error::Config(format!(
                "unknown weighting mode '{other}' (expected detour|augmented|multiplicity|unit)"
            ))),
        }
    }
}

/// Parameters of the weighting step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightingConfig {
    pub mode: WeightingMode,
    /// Path-length cap for detour/augmented searches.
    pub cap: u32,
    /// Lower bound applied to every edge weight; curvature divides by them.
    pub epsilon_floor: f64,
    /// Maximum edge count an augmented graph may reach.
    pub augment_edge_budget: usize,
}

impl Default for WeightingConfig {
    fn default() -> Self {
        WeightingConfig {
            mode: WeightingMode::Detour,
            cap: 6,
            epsilon_floor: 1e-6,
            augment_edge_budget: 2_000_000,
        }
    }
}

impl WeightingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_floor > 0.0) || !self.epsilon_floor.is_finite() {
            return Err(Error::Config(format!(
                "epsilon_floor must be positive and finite, got {}",
                self.epsilon_floor
            )));
        }
        let min_cap = match self.mode {
            WeightingMode::Detour => 2,
            WeightingMode::Augmented => 1,
            _ => 0,
        };
        if self.cap < min_cap {
            return Err(Error::Config(format!(
                "cap {} is below the minimum {min_cap} for mode {}",
                self.cap, self.mode
            )));
        }
        Ok(())
    }
}

/// Unweighted BFS hop distances from `source`, `None` beyond `cap` hops.
pub fn bfs_capped(g: &Graph, source: NodeId, cap: u32) -> Vec<Option<u32>> {
    assert!(cap >= 1, "cap must be at least 1");
    let mut scratch = BfsScratch::new(g.node_count());
    scratch.run(g, source, cap, None, None);
    (0..g.node_count())
        .map(|v| scratch.distance(v as NodeId))
        .collect()
}

/// Reusable BFS workspace. Stamps avoid clearing the distance array
/// between runs, which matters when the detour weighting performs one BFS
/// per edge.
struct BfsScratch {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: VecDeque<NodeId>,
}

impl BfsScratch {
    fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }

    /// BFS from `source` up to `cap` hops, optionally skipping one edge and
    /// stopping early when `target` is reached. Returns the distance to
    /// `target` if given and reached.
    fn run(
        &mut self,
        g: &Graph,
        source: NodeId,
        cap: u32,
        skip_edge: Option<EdgeId>,
        target: Option<NodeId>,
    ) -> Option<u32> {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.queue.clear();
        self.visit(source, 0);
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            let d = self.dist[v as usize];
            if d == cap {
                continue;
            }
            for &k in g.incident_edges(v) {
                if skip_edge == Some(k) {
                    continue;
                }
                let u = g.opposite(k, v);
                if self.stamp[u as usize] == self.epoch {
                    continue;
                }
                self.visit(u, d + 1);
                if target == Some(u) {
                    return Some(d + 1);
                }
                self.queue.push_back(u);
            }
        }
        target.and_then(|t| self.distance(t))
    }

    fn visit(&mut self, v: NodeId, d: u32) {
        self.dist[v as usize] = d;
        self.stamp[v as usize] = self.epoch;
    }

    fn distance(&self, v: NodeId) -> Option<u32> {
        (self.stamp[v as usize] == self.epoch).then(|| self.dist[v as usize])
    }
}

/// Raw detour weights before normalization: `1/l` where `l` is the length
/// of the shortest path between the endpoints with the edge removed,
/// `epsilon_floor` when no detour of length `<= cap` exists (bridges).
pub fn detour_raw_weights(g: &Graph, cap: u32, epsilon_floor: f64) -> Vec<f64> {
    let n = g.node_count();
    (0..g.edge_count() as EdgeId)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, e| {
                let (u, w) = g.endpoints(e);
                match scratch.run(g, u, cap, Some(e), Some(w)) {
                    Some(l) => 1.0 / l as f64,
                    None => epsilon_floor,
                }
            },
        )
        .collect()
}

/// Detour weights, max-normalized into `(0, 1]`.
pub fn edge_weights_detour(g: &Graph, cap: u32, epsilon_floor: f64) -> Result<Vec<f64>> {
    let raw = detour_raw_weights(g, cap, epsilon_floor);
    let (gamma, _) = normalize_edge_weights(&raw, epsilon_floor)?;
    Ok(gamma)
}

/// Result of the augmented weighting: the densified graph, its normalized
/// edge weights, and a per-edge flag marking the inserted virtual edges.
#[derive(Debug, Clone)]
pub struct AugmentedWeights {
    pub graph: Graph,
    pub gamma: Vec<f64>,
    pub is_virtual: Vec<bool>,
}

/// Inserts a virtual edge of raw weight `1/l` between every node pair at
/// hop distance `2 <= l <= cap`; original edges get raw weight 1. Refuses
/// to densify past `edge_budget`.
pub fn edge_weights_augmented(
    g: &Graph,
    cap: u32,
    epsilon_floor: f64,
    edge_budget: usize,
) -> Result<AugmentedWeights> {
    assert!(cap >= 1, "cap must be at least 1");
    let n = g.node_count();
    // Each unordered pair is discovered from both endpoints; keep u < w.
    let virtual_pairs: Vec<Vec<(NodeId, NodeId, u32)>> = (0..n as NodeId)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, source| {
                scratch.run(g, source, cap, None, None);
                let mut found = Vec::new();
                for v in source + 1..n as NodeId {
                    if let Some(d) = scratch.distance(v) {
                        if d >= 2 {
                            found.push((source, v, d));
                        }
                    }
                }
                found
            },
        )
        .collect();

    let virtual_count: usize = virtual_pairs.iter().map(Vec::len).sum();
    let total = g.edge_count() + virtual_count;
    if total > edge_budget {
        return Err(Error::Budget(format!(
            "augmentation would produce {total} edges, over the budget of {edge_budget}"
        )));
    }

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(total);
    let mut raw_by_pair: Vec<((NodeId, NodeId), (f64, bool))> = Vec::with_capacity(total);
    for &(u, w) in g.edges() {
        raw_by_pair.push(((u, w), (1.0, false)));
    }
    for (u, w, d) in virtual_pairs.into_iter().flatten() {
        raw_by_pair.push(((u, w), (1.0 / d as f64, true)));
    }
    raw_by_pair.sort_unstable_by_key(|&(pair, _)| pair);

    let mut raw = Vec::with_capacity(total);
    let mut is_virtual = Vec::with_capacity(total);
    for (pair, (weight, virt)) in raw_by_pair {
        edges.push(pair);
        raw.push(weight);
        is_virtual.push(virt);
    }

    let graph = Graph::from_canonical_edges(n, edges)?;
    let (gamma, _) = normalize_edge_weights(&raw, epsilon_floor)?;
    Ok(AugmentedWeights {
        graph,
        gamma,
        is_virtual,
    })
}

/// Node weights as the mean incident edge weight; isolated nodes get 0.
pub fn node_weights(g: &Graph, gamma: &[f64]) -> Vec<f64> {
    (0..g.node_count() as NodeId)
        .into_par_iter()
        .map(|v| {
            let incident = g.incident_edges(v);
            if incident.is_empty() {
                0.0
            } else {
                let sum: f64 = incident.iter().map(|&k| gamma[k as usize]).sum();
                sum / incident.len() as f64
            }
        })
        .collect()
}

/// Max-normalizes raw edge weights into `(0, 1]`. Non-positive or
/// non-finite raws are replaced by `epsilon_floor` first (counted as
/// warnings, not errors); anything ending up below the floor is raised to
/// it. Errors on empty input: a weighting needs at least one edge.
pub fn normalize_edge_weights(raw: &[f64], epsilon_floor: f64) -> Result<(Vec<f64>, usize)> {
    if raw.is_empty() {
        return Err(Error::EmptyGraph(
            "cannot build a weighting scheme without edges".into(),
        ));
    }
    let mut warnings = 0usize;
    let mut vals: Vec<f64> = raw
        .iter()
        .map(|&x| {
            if x.is_finite() && x > 0.0 {
                x
            } else {
                warnings += 1;
                epsilon_floor
            }
        })
        .collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for v in &mut vals {
        *v /= max;
        if *v < epsilon_floor {
            *v = epsilon_floor;
        }
    }
    Ok((vals, warnings))
}

/// Max-normalizes raw node weights into `[0, 1]`. Zeros (isolated nodes)
/// stay zero; positive values below the floor are raised to it.
pub fn normalize_node_weights(raw: &[f64], epsilon_floor: f64) -> Vec<f64> {
    let max = raw.iter().copied().fold(0.0, f64::max);
    raw.iter()
        .map(|&x| {
            if !(x > 0.0) || max <= 0.0 {
                0.0
            } else {
                (x / max).max(epsilon_floor)
            }
        })
        .collect()
}

/// Normalizes a full raw scheme (edge and node weights each divided by
/// their own maximum). Returns the scheme and the count of replaced
/// non-positive edge raws.
pub fn normalize_scheme(
    edge_raw: &[f64],
    node_raw: &[f64],
    epsilon_floor: f64,
) -> Result<(WeightScheme, usize)> {
    let (edge, warnings) = normalize_edge_weights(edge_raw, epsilon_floor)?;
    let node = normalize_node_weights(node_raw, epsilon_floor);
    Ok((WeightScheme::new(edge, node)?, warnings))
}

/// A weighting scheme together with the graph it lives on. The graph
/// differs from the input only in augmented mode, which inserts virtual
/// edges (tagged in `is_virtual`).
#[derive(Debug, Clone)]
pub struct DerivedWeights {
    pub graph: Graph,
    pub scheme: WeightScheme,
    pub is_virtual: Option<Vec<bool>>,
    /// Non-positive raw values replaced by the floor during normalization.
    pub floored_raws: usize,
}

/// Computes the weighting scheme selected by `cfg`. `raw_edge_values` are
/// the per-edge merged input values (multiplicities or weight-column
/// sums), consumed only by the multiplicity mode. Node weights are always
/// the mean of the incident normalized edge weights.
pub fn derive_weights(g: &Graph, raw_edge_values: &[f64], cfg: &WeightingConfig) -> Result<DerivedWeights> {
    cfg.validate()?;
    match cfg.mode {
        WeightingMode::Unit => Ok(DerivedWeights {
            graph: g.clone(),
            scheme: unit_scheme(g),
            is_virtual: None,
            floored_raws: 0,
        }),
        WeightingMode::Detour => {
            let raw = detour_raw_weights(g, cfg.cap, cfg.epsilon_floor);
            let (gamma, floored) = normalize_edge_weights(&raw, cfg.epsilon_floor)?;
            let node = node_weights(g, &gamma);
            Ok(DerivedWeights {
                graph: g.clone(),
                scheme: WeightScheme::new(gamma, node)?,
                is_virtual: None,
                floored_raws: floored,
            })
        }
        WeightingMode::Augmented => {
            let aug =
                edge_weights_augmented(g, cfg.cap, cfg.epsilon_floor, cfg.augment_edge_budget)?;
            let node = node_weights(&aug.graph, &aug.gamma);
            Ok(DerivedWeights {
                scheme: WeightScheme::new(aug.gamma, node)?,
                graph: aug.graph,
                is_virtual: Some(aug.is_virtual),
                floored_raws: 0,
            })
        }
        WeightingMode::Multiplicity => {
            if raw_edge_values.len() != g.edge_count() {
                return Err(Error::Config(format!(
                    "multiplicity weighting needs one raw value per edge, got {} for {} edges",
                    raw_edge_values.len(),
                    g.edge_count()
                )));
            }
            let (gamma, floored) = normalize_edge_weights(raw_edge_values, cfg.epsilon_floor)?;
            let node = node_weights(g, &gamma);
            Ok(DerivedWeights {
                graph: g.clone(),
                scheme: WeightScheme::new(gamma, node)?,
                is_virtual: None,
                floored_raws: floored,
            })
        }
    }
}

/// The combinatorial baseline: every edge weight 1, every non-isolated
/// node weight 1.
pub fn unit_scheme(g: &Graph) -> WeightScheme {
    let edge = vec![1.0; g.edge_count()];
    let node = (0..g.node_count() as NodeId)
        .map(|v| if g.degree(v) > 0 { 1.0 } else { 0.0 })
        .collect();
    WeightScheme::new(edge, node).expect("unit weights are valid")
}
