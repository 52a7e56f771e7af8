//! Minimal end-to-end run: curvature of one snapshot, then change
//! detection between two. Mirrors the README example.

use netcurv::{
    detect, evolve_pair, forman_ricci_all, snapshot_from_edges, FlowConfig, WeightingConfig,
};

fn main() -> netcurv::Result<()> {
    let cfg = WeightingConfig::default();
    let before = snapshot_from_edges("t0", &[(0, 1), (1, 2), (0, 2), (2, 3)], &cfg)?;
    let after = snapshot_from_edges("t1", &[(0, 1), (1, 2), (0, 2), (3, 4)], &cfg)?;

    let field = forman_ricci_all(&before.graph, &before.weights)?;
    println!("curvatures: {:?}", field.edge_ric());

    let pair = evolve_pair(&before, &after, &FlowConfig::default())?;
    let report = detect(&pair, 0.9);
    for &v in &report.flagged_nodes {
        println!("node {} moved", report.union_ids[v as usize]);
    }
    Ok(())
}
