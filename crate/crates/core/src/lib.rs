//! Network-geometry toolkit: Forman-Ricci curvature on weighted graphs,
//! discrete Ricci flow on edge weights, and change detection between
//! temporal snapshots of large networks.
//!
//! The crate is organized around a small immutable [`Graph`] plus a
//! [`WeightScheme`] holding per-edge and per-node weights. On top of those:
//!
//! - [`curvature`] evaluates the Forman-Ricci curvature per edge and the
//!   scalar curvature per node,
//! - [`flow`] evolves edge weights under the discrete Ricci flow (or the
//!   auxiliary scalar-curvature flow), recomputing curvature each step,
//! - [`change`] aligns two snapshots, flows both, and flags nodes/edges
//!   whose evolved incident-weight profiles decorrelate,
//! - [`ingest`] parses SNAP- and KONECT-style edge lists into snapshots,
//! - [`weighting`] derives edge/node weights from topology (detour paths,
//!   virtual-edge augmentation, multiplicities, or unit weights),
//! - [`synth`] generates deterministic synthetic test networks.

pub mod change;
pub mod curvature;
pub mod error;
pub mod export;
pub mod flow;
pub mod graph;
pub mod ingest;
pub mod parallel;
pub mod stats;
pub mod synth;
pub mod weighting;

pub use change::{
    align, aligned_pair_raw, detect, evolve_pair, similarity_scores, AlignedPair, ChangeReport,
    UnionMap, SCORING_RULE,
};
pub use curvature::{
    curvature_histogram, curvature_map_dense, curvature_map_sparse, forman_ricci_all,
    forman_ricci_edge, scalar_from_edges, CurvatureField,
};
pub use error::{Error, Result};
pub use flow::{
    ricci_flow_step, run_flow, scalar_flow_step, ClampEvents, FlowConfig, FlowTrace, FlowVariant,
    StepStats, WEIGHT_CEILING,
};
pub use graph::{
    build_graph, build_graph_weighted, degree_values, BuiltGraph, EdgeId, Graph, NodeId,
};
pub use ingest::{
    detect_format, export_edge_list, load_snapshot, parse_konect, parse_snap_edgelist,
    parse_snapshot, snapshot_from_edges, InputFormat, ParsedEdgeList, Snapshot,
};
pub use parallel::with_threads;
pub use stats::{histogram, pearson, spearman, summary, Histogram, Summary};
pub use synth::{generate, write_edge_list, GenModel};
pub use weighting::{
    bfs_capped, derive_weights, detour_raw_weights, edge_weights_augmented, edge_weights_detour,
    node_weights, normalize_edge_weights, normalize_node_weights, normalize_scheme, unit_scheme,
    AugmentedWeights, DerivedWeights, WeightScheme, WeightingConfig, WeightingMode,
};
