//! Forman-Ricci curvature per edge and the derived scalar curvature per
//! node.
//!
//! For an edge `e = (v1, v2)` with edge weight `we` and node weights
//! `w1`, `w2`, the curvature is
//!
//! ```text
//! ric(e) = we * ( w1/we + w2/we
//!                 - sum over e' ~ v1, e' != e of w1 / sqrt(we * we')
//!                 - sum over e' ~ v2, e' != e of w2 / sqrt(we * we') )
//! ```
//!
//! Only edges sharing exactly one endpoint with `e` enter the sums; in a
//! simple graph no other edge can share both. With all weights 1 this
//! collapses to `4 - deg(v1) - deg(v2)`, which is the closed form the
//! property tests pin the implementation against.
//!
//! Accumulation order is fixed (ascending edge index, endpoint sums kept
//! separate) so results are bit-reproducible across runs and thread counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::stats::{histogram, Histogram};
use crate::weighting::WeightScheme;

/// Per-edge Forman-Ricci values and per-node scalar curvature, tied to the
/// weight scheme they were computed from by a fingerprint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureField {
    edge_ric: Vec<f64>,
    node_scal: Vec<f64>,
    weights_fingerprint: u64,
}

impl CurvatureField {
    pub fn edge_ric(&self) -> &[f64] {
        &self.edge_ric
    }

    pub fn node_scal(&self) -> &[f64] {
        &self.node_scal
    }

    pub fn edge(&self, e: EdgeId) -> f64 {
        self.edge_ric[e as usize]
    }

    pub fn scalar(&self, v: NodeId) -> f64 {
        self.node_scal[v as usize]
    }

    /// Whether this field was computed from exactly these weights.
    pub fn is_fresh_for(&self, weights: &WeightScheme) -> bool {
        self.weights_fingerprint == weights.fingerprint()
    }

    pub fn ensure_fresh_for(&self, weights: &WeightScheme) -> Result<()> {
        if self.is_fresh_for(weights) {
            Ok(())
        } else {
            Err(Error::SchemeMismatch(
                "curvature field is stale for this weight scheme".into(),
            ))
        }
    }
}

fn ensure_matching(g: &Graph, w: &WeightScheme) -> Result<()> {
    if w.matches(g) {
        Ok(())
    } else {
        Err(Error::SchemeMismatch(format!(
            "scheme has {} edge / {} node weights, graph has {} edges / {} nodes",
            w.edge_weights().len(),
            w.node_weights().len(),
            g.edge_count(),
            g.node_count()
        )))
    }
}

fn edge_curvature(g: &Graph, w: &WeightScheme, e: EdgeId) -> f64 {
    let (v1, v2) = g.endpoints(e);
    let we = w.edge_weight(e);
    let w1 = w.node_weight(v1);
    let w2 = w.node_weight(v2);
    let mut sum1 = 0.0;
    for &k in g.incident_edges(v1) {
        if k != e {
            sum1 += w1 / (we * w.edge_weight(k)).sqrt();
        }
    }
    let mut sum2 = 0.0;
    for &k in g.incident_edges(v2) {
        if k != e {
            sum2 += w2 / (we * w.edge_weight(k)).sqrt();
        }
    }
    we * (w1 / we + w2 / we - sum1 - sum2)
}

/// Forman-Ricci curvature of a single edge.
pub fn forman_ricci_edge(g: &Graph, w: &WeightScheme, e: EdgeId) -> Result<f64> {
    ensure_matching(g, w)?;
    if e as usize >= g.edge_count() {
        return Err(Error::Config(format!(
            "edge index {e} out of range for graph with {} edges",
            g.edge_count()
        )));
    }
    Ok(edge_curvature(g, w, e))
}

/// Evaluates the curvature of every edge and the scalar curvature
/// (sum of incident edge curvatures) of every node. Bit-identical to
/// looping [`forman_ricci_edge`], regardless of thread count.
pub fn forman_ricci_all(g: &Graph, w: &WeightScheme) -> Result<CurvatureField> {
    ensure_matching(g, w)?;
    let edge_ric: Vec<f64> = (0..g.edge_count() as EdgeId)
        .into_par_iter()
        .map(|e| edge_curvature(g, w, e))
        .collect();
    let node_scal = scalar_from_edges(g, &edge_ric);
    Ok(CurvatureField {
        edge_ric,
        node_scal,
        weights_fingerprint: w.fingerprint(),
    })
}

/// Scalar curvature per node: the sum of incident edge curvatures, taken
/// in ascending edge order.
pub fn scalar_from_edges(g: &Graph, edge_ric: &[f64]) -> Vec<f64> {
    (0..g.node_count() as NodeId)
        .into_par_iter()
        .map(|v| {
            g.incident_edges(v)
                .iter()
                .map(|&k| edge_ric[k as usize])
                .sum()
        })
        .collect()
}

/// Distribution of edge curvature values.
pub fn curvature_histogram(field: &CurvatureField, bins: usize) -> Histogram {
    histogram(&field.edge_ric, bins)
}

/// Dense node-by-node curvature map, row-major. Entries for non-edges
/// (including the diagonal) are NaN sentinels. Refuses graphs above
/// `max_nodes` since the matrix is quadratic; use
/// [`curvature_map_sparse`] there.
pub fn curvature_map_dense(g: &Graph, field: &CurvatureField, max_nodes: usize) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n > max_nodes {
        return Err(Error::Budget(format!(
            "dense curvature map for {n} nodes exceeds the budget of {max_nodes}; \
             export sparse triplets instead"
        )));
    }
    let mut m = vec![f64::NAN; n * n];
    for (k, &(u, w)) in g.edges().iter().enumerate() {
        let ric = field.edge_ric[k];
        m[u as usize * n + w as usize] = ric;
        m[w as usize * n + u as usize] = ric;
    }
    Ok(m)
}

/// Sparse curvature map as `(u, w, ric)` triplets in canonical edge order.
pub fn curvature_map_sparse(g: &Graph, field: &CurvatureField) -> Vec<(NodeId, NodeId, f64)> {
    g.edges()
        .iter()
        .zip(&field.edge_ric)
        .map(|(&(u, w), &ric)| (u, w, ric))
        .collect()
}
