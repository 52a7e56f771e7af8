//! Structural-change detection between two snapshots.
//!
//! Both snapshots are flowed independently, their final weighting schemes
//! are embedded over the union node set (absent edges contribute weight
//! 0), and each union node is scored by the Pearson correlation of its
//! two incident-weight vectors. Nodes scoring below the threshold are
//! flagged, edges with a flagged endpoint are flagged, and the heatmap
//! assigns each union edge the intensity `1 - min(endpoint scores)`,
//! clamped into [0, 1] (anti-correlated scores would otherwise exceed 1).
//!
//! Degenerate scoring cases are total by convention: bitwise-equal
//! vectors (including two empty ones) score 1; any other zero-variance
//! comparison scores 0. The rule is versioned as `pearson-incident-v1`
//! in report provenance.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::{write_pgm_p2, write_pgm_p5};
use crate::flow::{run_flow, FlowConfig};
use crate::graph::Graph;
use crate::ingest::Snapshot;
use crate::stats::pearson;
use crate::weighting::WeightingConfig;

/// Version tag of the node-scoring rule, recorded in every report.
pub const SCORING_RULE: &str = "pearson-incident-v1";

/// Bijections from each snapshot's compact node ids into the sorted union
/// of original ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionMap {
    pub ids: Vec<u64>,
    pub a_to_union: Vec<u32>,
    pub b_to_union: Vec<u32>,
}

/// Maps both snapshots into a shared node space. Snapshots must have been
/// weighted under the same configuration; comparing schemes produced by
/// different weightings is meaningless, so that is rejected here.
pub fn align(a: &Snapshot, b: &Snapshot) -> Result<UnionMap> {
    if a.weighting != b.weighting {
        return Err(Error::SchemeMismatch(format!(
            "snapshots were weighted under different configurations ({} vs {})",
            a.weighting.mode, b.weighting.mode
        )));
    }
    let ia = &a.built.original_ids;
    let ib = &b.built.original_ids;
    let mut ids: Vec<u64> = Vec::with_capacity(ia.len().max(ib.len()));
    let (mut i, mut j) = (0usize, 0usize);
    while i < ia.len() || j < ib.len() {
        let next = match (ia.get(i), ib.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        ids.push(next);
    }
    let index = |original: &[u64]| -> Vec<u32> {
        original
            .iter()
            .map(|id| ids.binary_search(id).expect("union contains both id sets") as u32)
            .collect()
    };
    Ok(UnionMap {
        a_to_union: index(ia),
        b_to_union: index(ib),
        ids,
    })
}

/// Two weighting schemes over the union node set: for each union node, the
/// sorted list of (union neighbor, weight) pairs per snapshot. Rows are
/// symmetric (each edge appears under both endpoints).
#[derive(Debug, Clone)]
pub struct AlignedPair {
    pub union_ids: Vec<u64>,
    pub adj_a: Vec<Vec<(u32, f64)>>,
    pub adj_b: Vec<Vec<(u32, f64)>>,
    pub label_a: String,
    pub label_b: String,
    /// The flow that produced the embedded schemes; `None` when raw
    /// (unflowed) schemes were embedded.
    pub flow: Option<FlowConfig>,
    pub weighting: WeightingConfig,
}

fn embed(g: &Graph, weights: &[f64], to_union: &[u32], n_union: usize) -> Vec<Vec<(u32, f64)>> {
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n_union];
    for (k, &(u, w)) in g.edges().iter().enumerate() {
        let uu = to_union[u as usize];
        let uw = to_union[w as usize];
        adj[uu as usize].push((uw, weights[k]));
        adj[uw as usize].push((uu, weights[k]));
    }
    for row in &mut adj {
        row.sort_unstable_by_key(|&(v, _)| v);
    }
    adj
}

fn build_pair(
    a: &Snapshot,
    b: &Snapshot,
    union: UnionMap,
    weights_a: &[f64],
    weights_b: &[f64],
    flow: Option<FlowConfig>,
) -> AlignedPair {
    let n = union.ids.len();
    AlignedPair {
        adj_a: embed(&a.graph, weights_a, &union.a_to_union, n),
        adj_b: embed(&b.graph, weights_b, &union.b_to_union, n),
        union_ids: union.ids,
        label_a: a.label.clone(),
        label_b: b.label.clone(),
        flow,
        weighting: a.weighting,
    }
}

/// Runs the configured flow independently on both snapshots and embeds
/// the two final schemes over the union node set.
pub fn evolve_pair(a: &Snapshot, b: &Snapshot, cfg: &FlowConfig) -> Result<AlignedPair> {
    cfg.validate()?;
    let union = align(a, b)?;
    let (trace_a, trace_b) = rayon::join(
        || run_flow(&a.graph, &a.weights, cfg),
        || run_flow(&b.graph, &b.weights, cfg),
    );
    let (trace_a, trace_b) = (trace_a?, trace_b?);
    Ok(build_pair(
        a,
        b,
        union,
        trace_a.final_scheme.edge_weights(),
        trace_b.final_scheme.edge_weights(),
        Some(*cfg),
    ))
}

/// Embeds the raw (unflowed) schemes. This is the flow-disabled ablation:
/// scores then compare the weightings as ingested.
pub fn aligned_pair_raw(a: &Snapshot, b: &Snapshot) -> Result<AlignedPair> {
    let union = align(a, b)?;
    Ok(build_pair(
        a,
        b,
        union,
        a.weights.edge_weights(),
        b.weights.edge_weights(),
        None,
    ))
}

/// Builds the two incident-weight vectors of one union node over the
/// union of its neighbors in either snapshot; absent edges contribute 0.
fn merged_vectors(ra: &[(u32, f64)], rb: &[(u32, f64)]) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(ra.len().max(rb.len()));
    let mut y = Vec::with_capacity(ra.len().max(rb.len()));
    let (mut i, mut j) = (0usize, 0usize);
    while i < ra.len() || j < rb.len() {
        match (ra.get(i), rb.get(j)) {
            (Some(&(va, wa)), Some(&(vb, wb))) => {
                if va == vb {
                    x.push(wa);
                    y.push(wb);
                    i += 1;
                    j += 1;
                } else if va < vb {
                    x.push(wa);
                    y.push(0.0);
                    i += 1;
                } else {
                    x.push(0.0);
                    y.push(wb);
                    j += 1;
                }
            }
            (Some(&(_, wa)), None) => {
                x.push(wa);
                y.push(0.0);
                i += 1;
            }
            (None, Some(&(_, wb))) => {
                x.push(0.0);
                y.push(wb);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (x, y)
}

fn score_vectors(x: &[f64], y: &[f64]) -> f64 {
    // bitwise equality covers both empty vectors and the identical-snapshot
    // case, and pins those scores to exactly 1
    if x == y {
        return 1.0;
    }
    // pearson is None exactly when a vector has zero variance; differing
    // degenerate vectors score 0 by convention
    pearson(x, y).unwrap_or(0.0)
}

/// Per-union-node similarity scores in [-1, 1].
pub fn similarity_scores(p: &AlignedPair) -> Vec<f64> {
    (0..p.union_ids.len())
        .into_par_iter()
        .map(|v| {
            let (x, y) = merged_vectors(&p.adj_a[v], &p.adj_b[v]);
            score_vectors(&x, &y)
        })
        .collect()
}

/// Thresholded change report. All node indices refer to the union order;
/// `union_ids` maps them back to original ids.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeReport {
    pub union_ids: Vec<u64>,
    pub node_similarity: Vec<f64>,
    pub flagged_nodes: Vec<u32>,
    pub flagged_edges: Vec<(u32, u32)>,
    /// Canonical union edges with change intensity in [0, 1].
    pub heatmap: Vec<(u32, u32, f64)>,
    pub threshold: f64,
    pub label_a: String,
    pub label_b: String,
    pub flow: Option<FlowConfig>,
    pub weighting: WeightingConfig,
    pub scoring_rule: &'static str,
}

/// Canonical union edge set: pairs present in either snapshot, sorted.
fn union_edges(p: &AlignedPair) -> Vec<(u32, u32)> {
    let n = p.union_ids.len();
    let mut edges = Vec::new();
    for u in 0..n {
        let ra = &p.adj_a[u];
        let rb = &p.adj_b[u];
        let (mut i, mut j) = (0usize, 0usize);
        let mut push = |v: u32| {
            if v as usize > u {
                edges.push((u as u32, v));
            }
        };
        while i < ra.len() || j < rb.len() {
            match (ra.get(i), rb.get(j)) {
                (Some(&(va, _)), Some(&(vb, _))) => {
                    if va == vb {
                        push(va);
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        push(va);
                        i += 1;
                    } else {
                        push(vb);
                        j += 1;
                    }
                }
                (Some(&(va, _)), None) => {
                    push(va);
                    i += 1;
                }
                (None, Some(&(vb, _))) => {
                    push(vb);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }
    edges
}

/// Scores the pair and thresholds the result: nodes with `s(v) < t` are
/// flagged, union edges with a flagged endpoint are flagged, and every
/// union edge gets heat `1 - min(endpoint scores)` clamped into [0, 1].
pub fn detect(p: &AlignedPair, threshold: f64) -> ChangeReport {
    assert!(
        (-1.0..=1.0).contains(&threshold),
        "threshold must lie in [-1, 1], got {threshold}"
    );
    let scores = similarity_scores(p);
    let flagged: Vec<bool> = scores.iter().map(|&s| s < threshold).collect();
    let flagged_nodes: Vec<u32> = flagged
        .iter()
        .enumerate()
        .filter_map(|(v, &f)| f.then_some(v as u32))
        .collect();
    let edges = union_edges(p);
    let flagged_edges: Vec<(u32, u32)> = edges
        .iter()
        .copied()
        .filter(|&(u, w)| flagged[u as usize] || flagged[w as usize])
        .collect();
    let heatmap: Vec<(u32, u32, f64)> = edges
        .iter()
        .map(|&(u, w)| {
            let s = scores[u as usize].min(scores[w as usize]);
            (u, w, (1.0 - s).clamp(0.0, 1.0))
        })
        .collect();
    ChangeReport {
        union_ids: p.union_ids.clone(),
        node_similarity: scores,
        flagged_nodes,
        flagged_edges,
        heatmap,
        threshold,
        label_a: p.label_a.clone(),
        label_b: p.label_b.clone(),
        flow: p.flow,
        weighting: p.weighting,
        scoring_rule: SCORING_RULE,
    }
}

impl ChangeReport {
    /// Full report as JSON. Node and edge references use original ids.
    pub fn report_json(&self) -> serde_json::Value {
        let id = |v: u32| self.union_ids[v as usize];
        serde_json::json!({
            "schema_version": 1,
            "labels": [self.label_a, self.label_b],
            "config": {
                "flow": self.flow,
                "weighting": self.weighting,
                "scoring_rule": self.scoring_rule,
            },
            "threshold": self.threshold,
            "union_ids": self.union_ids,
            "node_scores": self.node_similarity,
            "flagged_nodes": self.flagged_nodes.iter().map(|&v| id(v)).collect::<Vec<_>>(),
            "flagged_edges": self
                .flagged_edges
                .iter()
                .map(|&(u, w)| [id(u), id(w)])
                .collect::<Vec<_>>(),
        })
    }

    /// Dense row-major pixel matrix over union node order: round(255 * H),
    /// 0 on non-edges and the diagonal.
    pub fn heatmap_pixels(&self) -> Vec<u8> {
        let n = self.union_ids.len();
        let mut pixels = vec![0u8; n * n];
        for &(u, w, h) in &self.heatmap {
            let px = (255.0 * h).round() as u8;
            pixels[u as usize * n + w as usize] = px;
            pixels[w as usize * n + u as usize] = px;
        }
        pixels
    }

    /// PGM heatmap (P2 when `binary` is false, P5 otherwise). Refuses
    /// union node counts above `max_nodes`: the image is dense.
    pub fn export_heatmap_pgm<W: std::io::Write>(
        &self,
        binary: bool,
        max_nodes: usize,
        out: W,
    ) -> Result<()> {
        let n = self.union_ids.len();
        if n > max_nodes {
            return Err(Error::Budget(format!(
                "dense heatmap for {n} nodes exceeds the budget of {max_nodes}; \
                 use the CSV export instead"
            )));
        }
        let pixels = self.heatmap_pixels();
        if binary {
            write_pgm_p5(out, n, n, &pixels)?;
        } else {
            write_pgm_p2(out, n, n, &pixels)?;
        }
        Ok(())
    }

    /// Heatmap triplets `u,w,intensity` over original ids.
    pub fn export_heatmap_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "u,w,intensity")?;
        for &(u, w, h) in &self.heatmap {
            writeln!(
                out,
                "{},{},{h}",
                self.union_ids[u as usize], self.union_ids[w as usize]
            )?;
        }
        Ok(())
    }
}
