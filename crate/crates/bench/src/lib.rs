//! Fixture builders shared by the criterion benchmarks. Everything here is
//! seeded, so repeated benchmark runs measure the same graphs.

use netcurv::{
    generate, snapshot_from_edges, GenModel, Snapshot, WeightingConfig, WeightingMode,
};

/// Preferential-attachment edge list with m = 2, the standard sparse
/// benchmark topology: hubs plus a long degree tail.
pub fn pa_edges(n: usize, seed: u64) -> Vec<(u64, u64)> {
    generate(&GenModel::PreferentialAttachment { n, m: 2 }, seed).expect("model is valid")
}

/// Snapshot under unit weighting: exercises curvature and flow without
/// the detour search contributing to the measurement.
pub fn unit_snapshot(n: usize, seed: u64) -> Snapshot {
    let cfg = WeightingConfig {
        mode: WeightingMode::Unit,
        ..WeightingConfig::default()
    };
    snapshot_from_edges(&format!("pa-{n}-{seed}"), &pa_edges(n, seed), &cfg)
        .expect("generated edges parse")
}

/// Snapshot under the default detour weighting, BFS included.
pub fn detour_snapshot(n: usize, seed: u64) -> Snapshot {
    snapshot_from_edges(
        &format!("pa-{n}-{seed}"),
        &pa_edges(n, seed),
        &WeightingConfig::default(),
    )
    .expect("generated edges parse")
}
