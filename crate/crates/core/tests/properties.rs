//! Property tests: structural invariants checked against independent
//! reference implementations on randomized inputs.

mod common;

use common::*;
use netcurv::{
    aligned_pair_raw, bfs_capped, build_graph, detect, detour_raw_weights, forman_ricci_all,
    forman_ricci_edge, histogram, node_weights, parse_snapshot, ricci_flow_step,
    snapshot_from_edges, unit_scheme, Graph, InputFormat, WeightScheme, WeightingConfig,
    WeightingMode,
};
use proptest::prelude::*;

/// Random simple graph as raw edge pairs over at most `max_n` nodes.
fn arb_edges(max_n: u64, max_m: usize) -> impl Strategy<Value = Vec<(u64, u64)>> {
    (2..=max_n, proptest::collection::vec((0u64..max_n, 0u64..max_n), 1..max_m)).prop_map(
        |(n, pairs)| {
            pairs
                .into_iter()
                .map(|(a, b)| (a % n, b % n))
                .filter(|(a, b)| a != b)
                .collect()
        },
    )
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    arb_edges(24, 80).prop_map(|edges| build_graph(&edges).graph)
}

/// Graph plus a fully random positive weighting in [1e-6, 1].
fn arb_weighted() -> impl Strategy<Value = (Graph, WeightScheme)> {
    (arb_graph(), any::<u64>()).prop_map(|(g, seed)| {
        let ew = random_weights(seed, g.edge_count(), 1e-6, 1.0);
        let nw = random_weights(seed ^ 0x9e37_79b9, g.node_count(), 1e-6, 1.0);
        let scheme = WeightScheme::new(ew, nw).unwrap();
        (g, scheme)
    })
}

proptest! {
    #[test]
    fn unit_weights_reduce_to_degree_closed_form(g in arb_graph()) {
        let field = forman_ricci_all(&g, &unit_scheme(&g)).unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let expected = 4.0 - g.degree(u) as f64 - g.degree(v) as f64;
            prop_assert!((field.edge_ric()[e] - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn batch_curvature_equals_naive_oracle((g, w) in arb_weighted()) {
        let field = forman_ricci_all(&g, &w).unwrap();
        let oracle = naive_forman_ricci(g.edges(), w.edge_weights(), w.node_weights());
        prop_assert_eq!(field.edge_ric(), &oracle[..]);
    }

    #[test]
    fn scalar_curvature_is_incident_sum((g, w) in arb_weighted()) {
        let field = forman_ricci_all(&g, &w).unwrap();
        let oracle = naive_scalar(g.edges(), field.edge_ric(), g.node_count());
        prop_assert_eq!(field.node_scal(), &oracle[..]);
    }

    #[test]
    fn single_edge_curvature_matches_batch((g, w) in arb_weighted()) {
        let field = forman_ricci_all(&g, &w).unwrap();
        for e in 0..g.edge_count() as u32 {
            prop_assert_eq!(forman_ricci_edge(&g, &w, e).unwrap(), field.edge(e));
        }
    }

    #[test]
    fn curvature_is_homogeneous_in_the_weights(
        (g, w) in arb_weighted(),
        c in prop_oneof![Just(0.1f64), Just(0.5), Just(2.0), 0.05f64..8.0],
    ) {
        let base = forman_ricci_all(&g, &w).unwrap();
        let scaled = WeightScheme::new(
            w.edge_weights().iter().map(|&x| c * x).collect(),
            w.node_weights().iter().map(|&x| c * x).collect(),
        )
        .unwrap();
        let field = forman_ricci_all(&g, &scaled).unwrap();
        for e in 0..g.edge_count() {
            let want = c * base.edge_ric()[e];
            let got = field.edge_ric()[e];
            prop_assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "edge {}: {} vs {}", e, got, want
            );
        }
    }

    #[test]
    fn relabeling_nodes_preserves_curvature(
        edges in arb_edges(20, 60),
        seed in any::<u64>(),
    ) {
        prop_assume!(!edges.is_empty());
        let built = build_graph(&edges);
        let g = &built.graph;
        prop_assume!(g.edge_count() > 0);
        // weight the original graph, then transport weights through a
        // random relabeling of the node ids
        let ew = random_weights(seed, g.edge_count(), 1e-6, 1.0);
        let nw = random_weights(seed ^ 0xabcd, g.node_count(), 1e-6, 1.0);
        let n = g.node_count();
        let mut perm: Vec<u64> = (0..n as u64).collect();
        // Fisher-Yates driven by the same seed
        {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
        }
        let mapped: Vec<(u64, u64)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        let built2 = build_graph(&mapped);
        let g2 = &built2.graph;
        prop_assert_eq!(g2.edge_count(), g.edge_count());
        // locate each original edge in the permuted graph and copy weights
        let mut ew2 = vec![0.0; g2.edge_count()];
        let mut nw2 = vec![0.0; g2.node_count()];
        let mut expected = vec![0.0; g2.edge_count()];
        let base = forman_ricci_all(g, &WeightScheme::new(ew.clone(), nw.clone()).unwrap()).unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let cu = built2.compact_id(perm[u as usize]).unwrap();
            let cv = built2.compact_id(perm[v as usize]).unwrap();
            let key = (cu.min(cv), cu.max(cv));
            let idx = g2.edges().binary_search(&key).unwrap();
            ew2[idx] = ew[e];
            expected[idx] = base.edge_ric()[e];
        }
        for v in 0..n {
            let cv = built2.compact_id(perm[v]).unwrap();
            nw2[cv as usize] = nw[v];
        }
        let field = forman_ricci_all(g2, &WeightScheme::new(ew2, nw2).unwrap()).unwrap();
        for e in 0..g2.edge_count() {
            let want = expected[e];
            let got = field.edge_ric()[e];
            prop_assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "edge {}: {} vs {}", e, got, want
            );
        }
    }

    #[test]
    fn flow_step_respects_floor_and_direction((g, w) in arb_weighted()) {
        prop_assume!(g.edge_count() > 0);
        let field = forman_ricci_all(&g, &w).unwrap();
        let max_ric = field.edge_ric().iter().fold(0.0f64, |m, &r| m.max(r.abs()));
        // small enough that no update can cross the tiny floor
        let dt = 0.4 / (1.0 + max_ric);
        let floor = 1e-12;
        let (next, events) = ricci_flow_step(&g, &w, dt, floor, true).unwrap();
        prop_assert_eq!(events.floored, 0);
        prop_assert_eq!(events.saturated, 0);
        for e in 0..g.edge_count() {
            let gamma = w.edge_weights()[e];
            let after = next.edge_weights()[e];
            let ric = field.edge_ric()[e];
            prop_assert!(after >= floor);
            // sign rule, allowing equality when the increment underflows
            if ric > 0.0 {
                prop_assert!(after <= gamma);
            } else if ric < 0.0 {
                prop_assert!(after >= gamma);
            } else {
                prop_assert_eq!(after, gamma);
            }
            // one-step bound: |gamma' - gamma| <= dt * |ric| * gamma,
            // with one ulp of gamma for the subtraction rounding
            let bound = dt * ric.abs() * gamma;
            prop_assert!((after - gamma).abs() <= bound * (1.0 + 1e-12) + gamma * f64::EPSILON);
        }
    }

    #[test]
    fn unit_cycles_are_flow_fixed_points(len in 3u64..40, steps in 1u32..8, dt in 0.01f64..1.0) {
        let edges: Vec<(u64, u64)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        let g = build_graph(&edges).graph;
        let w = unit_scheme(&g);
        let cfg = netcurv::FlowConfig {
            steps,
            dt,
            ..netcurv::FlowConfig::default()
        };
        let trace = netcurv::run_flow(&g, &w, &cfg).unwrap();
        prop_assert_eq!(trace.final_scheme.edge_weights(), w.edge_weights());
        prop_assert_eq!(trace.floor_events_total, 0);
        prop_assert_eq!(trace.saturation_events_total, 0);
    }

    #[test]
    fn histogram_counts_every_value(values in proptest::collection::vec(-100.0f64..100.0, 1..200), bins in 1usize..20) {
        let h = histogram(&values, bins);
        prop_assert_eq!(h.total(), values.len() as u64);
        prop_assert_eq!(h.counts.len(), h.edges.len() - 1);
    }

    #[test]
    fn bfs_capped_agrees_with_uncapped_reference(g in arb_graph(), cap in 1u32..8) {
        for s in 0..g.node_count() as u32 {
            let capped = bfs_capped(&g, s, cap);
            let full = naive_bfs(g.edges(), g.node_count(), s);
            for v in 0..g.node_count() {
                match full[v] {
                    Some(d) if d <= cap => prop_assert_eq!(capped[v], Some(d)),
                    _ => prop_assert_eq!(capped[v], None),
                }
            }
        }
    }

    #[test]
    fn detour_weights_match_bruteforce(g in arb_graph(), cap in 2u32..7) {
        prop_assume!(g.edge_count() > 0);
        let raw = detour_raw_weights(&g, cap, 1e-6);
        for e in 0..g.edge_count() {
            let expected = match naive_detour(g.edges(), g.node_count(), e) {
                Some(l) if l <= cap => 1.0 / l as f64,
                _ => 1e-6,
            };
            prop_assert_eq!(raw[e], expected);
        }
    }

    #[test]
    fn derived_node_weights_stay_within_incident_bounds(edges in arb_edges(24, 80)) {
        prop_assume!(!edges.is_empty());
        let snap = snapshot_from_edges("prop", &edges, &WeightingConfig::default());
        prop_assume!(snap.is_ok());
        let snap = snap.unwrap();
        for v in 0..snap.graph.node_count() as u32 {
            let incident = snap.graph.incident_edges(v);
            let w = snap.weights.node_weight(v);
            if incident.is_empty() {
                prop_assert_eq!(w, 0.0);
            } else {
                let lo = incident.iter().map(|&e| snap.weights.edge_weight(e)).fold(f64::INFINITY, f64::min);
                let hi = incident.iter().map(|&e| snap.weights.edge_weight(e)).fold(0.0f64, f64::max);
                prop_assert!(w >= lo - 1e-15 && w <= hi + 1e-15);
            }
        }
    }

    #[test]
    fn export_then_parse_is_bitwise_stable(edges in arb_edges(20, 60), seed in any::<u64>()) {
        prop_assume!(!edges.is_empty());
        let weights = random_weights(seed, edges.len(), 0.1, 9.0);
        let mut text = String::from("# generated fixture\n");
        for (k, &(u, v)) in edges.iter().enumerate() {
            text.push_str(&format!("{u} {v} {}\n", weights[k]));
        }
        let cfg = WeightingConfig {
            mode: WeightingMode::Multiplicity,
            ..WeightingConfig::default()
        };
        let first = parse_snapshot(&text, InputFormat::Snap, "prop", &cfg).unwrap();
        let mut exported = Vec::new();
        first.export(&mut exported).unwrap();
        let second =
            parse_snapshot(std::str::from_utf8(&exported).unwrap(), InputFormat::Snap, "prop", &cfg)
                .unwrap();
        prop_assert_eq!(&second.graph, &first.graph);
        prop_assert_eq!(second.weights.edge_weights(), first.weights.edge_weights());
        prop_assert_eq!(second.weights.node_weights(), first.weights.node_weights());
    }

    #[test]
    fn node_weight_recompute_matches_reference((g, w) in arb_weighted()) {
        let got = node_weights(&g, w.edge_weights());
        let want = naive_node_weights(g.edges(), w.edge_weights(), g.node_count());
        prop_assert_eq!(got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn detection_flags_grow_with_the_threshold(
        edges_a in arb_edges(16, 40),
        edges_b in arb_edges(16, 40),
    ) {
        prop_assume!(!edges_a.is_empty() && !edges_b.is_empty());
        let cfg = WeightingConfig::default();
        let a = snapshot_from_edges("a", &edges_a, &cfg).unwrap();
        let b = snapshot_from_edges("b", &edges_b, &cfg).unwrap();
        let pair = aligned_pair_raw(&a, &b).unwrap();
        let mut previous: Option<Vec<u32>> = None;
        for t in [-0.5, 0.0, 0.5, 0.9, 1.0] {
            let report = detect(&pair, t);
            // flags must be re-derivable from the scores
            for v in 0..report.node_similarity.len() as u32 {
                let flagged = report.node_similarity[v as usize] < t;
                prop_assert_eq!(report.flagged_nodes.contains(&v), flagged);
            }
            if let Some(prev) = &previous {
                for v in prev {
                    prop_assert!(report.flagged_nodes.contains(v));
                }
            }
            previous = Some(report.flagged_nodes);
        }
    }

    #[test]
    fn detection_is_swap_symmetric(
        edges_a in arb_edges(16, 40),
        edges_b in arb_edges(16, 40),
    ) {
        prop_assume!(!edges_a.is_empty() && !edges_b.is_empty());
        let cfg = WeightingConfig::default();
        let a = snapshot_from_edges("a", &edges_a, &cfg).unwrap();
        let b = snapshot_from_edges("b", &edges_b, &cfg).unwrap();
        let ab = detect(&aligned_pair_raw(&a, &b).unwrap(), 0.9);
        let ba = detect(&aligned_pair_raw(&b, &a).unwrap(), 0.9);
        prop_assert_eq!(ab.node_similarity, ba.node_similarity);
        prop_assert_eq!(ab.flagged_nodes, ba.flagged_nodes);
        prop_assert_eq!(ab.flagged_edges, ba.flagged_edges);
        prop_assert_eq!(ab.heatmap, ba.heatmap);
    }

    #[test]
    fn evolved_weights_stay_positive_and_finite(edges in arb_edges(14, 36)) {
        prop_assume!(!edges.is_empty());
        let cfg = WeightingConfig::default();
        let snap = snapshot_from_edges("x", &edges, &cfg).unwrap();
        let trace = netcurv::run_flow(&snap.graph, &snap.weights, &netcurv::FlowConfig::default()).unwrap();
        for state in &trace.weights_per_step {
            for &w in state {
                prop_assert!(w.is_finite() && w > 0.0);
            }
        }
    }
}
