//! Reference implementations the integration tests check the library
//! against. Everything here is written for clarity over speed and scans
//! whole edge lists instead of using adjacency structures, so agreement
//! with the library is meaningful.

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netcurv::{Graph, NodeId};

/// Term-by-term Forman curvature of every edge: for edge e = (u, v) with
/// weight we, ric = we * (wu/we + wv/we - S_u - S_v) where S_x sums
/// wx / sqrt(we * we') over the other edges at x, scanning edges in
/// ascending id order. The scan order matches the library's ascending
/// adjacency lists, so on identical inputs the sums round identically.
pub fn naive_forman_ricci(edges: &[(NodeId, NodeId)], ew: &[f64], nw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(edges.len());
    for (e, &(u, v)) in edges.iter().enumerate() {
        let we = ew[e];
        let wu = nw[u as usize];
        let wv = nw[v as usize];
        let mut su = 0.0;
        for (k, &(a, b)) in edges.iter().enumerate() {
            if k != e && (a == u || b == u) {
                su += wu / (we * ew[k]).sqrt();
            }
        }
        let mut sv = 0.0;
        for (k, &(a, b)) in edges.iter().enumerate() {
            if k != e && (a == v || b == v) {
                sv += wv / (we * ew[k]).sqrt();
            }
        }
        out.push(we * (wu / we + wv / we - su - sv));
    }
    out
}

/// Scalar curvature per node: sum of incident edge curvatures in
/// ascending edge order.
pub fn naive_scalar(edges: &[(NodeId, NodeId)], ric: &[f64], node_count: usize) -> Vec<f64> {
    let mut out = vec![0.0; node_count];
    for (e, &(u, v)) in edges.iter().enumerate() {
        out[u as usize] += ric[e];
        out[v as usize] += ric[e];
    }
    out
}

/// Textbook two-pass Pearson correlation; no clamping, no shortcuts.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx.sqrt() * vy.sqrt()))
}

/// Plain queue BFS over an explicit edge list, unlimited depth.
pub fn naive_bfs(edges: &[(NodeId, NodeId)], node_count: usize, source: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; node_count];
    dist[source as usize] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize].unwrap();
        for &(a, b) in edges {
            let next = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if dist[next as usize].is_none() {
                dist[next as usize] = Some(d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

/// Shortest alternative path between the endpoints of edge `e` when that
/// edge is deleted, as a hop count.
pub fn naive_detour(edges: &[(NodeId, NodeId)], node_count: usize, e: usize) -> Option<u32> {
    let (u, v) = edges[e];
    let rest: Vec<(NodeId, NodeId)> = edges
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != e)
        .map(|(_, &p)| p)
        .collect();
    naive_bfs(&rest, node_count, u)[v as usize]
}

/// Sequential reference Ricci flow: recompute curvature, update every
/// edge from the pre-step field, clamp, refresh node weights as the mean
/// of incident edge weights. Returns the edge weights after `steps`.
pub fn reference_ricci_flow(
    edges: &[(NodeId, NodeId)],
    node_count: usize,
    initial_ew: &[f64],
    initial_nw: &[f64],
    steps: u32,
    dt: f64,
    floor: f64,
    ceiling: f64,
    recompute_node_weights: bool,
) -> Vec<f64> {
    let mut ew = initial_ew.to_vec();
    let mut nw = initial_nw.to_vec();
    for _ in 0..steps {
        let ric = naive_forman_ricci(edges, &ew, &nw);
        let mut next = Vec::with_capacity(ew.len());
        for (e, &gamma) in ew.iter().enumerate() {
            let raw = gamma - dt * ric[e] * gamma;
            if !(raw >= floor) {
                next.push(floor);
            } else if raw > ceiling {
                next.push(ceiling);
            } else {
                next.push(raw);
            }
        }
        ew = next;
        if recompute_node_weights {
            nw = naive_node_weights(edges, &ew, node_count);
        }
    }
    ew
}

/// Mean incident edge weight per node, 0 for isolated nodes.
pub fn naive_node_weights(edges: &[(NodeId, NodeId)], ew: &[f64], node_count: usize) -> Vec<f64> {
    let mut sum = vec![0.0; node_count];
    let mut deg = vec![0usize; node_count];
    for (e, &(u, v)) in edges.iter().enumerate() {
        sum[u as usize] += ew[e];
        sum[v as usize] += ew[e];
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    sum.iter()
        .zip(&deg)
        .map(|(&s, &d)| if d == 0 { 0.0 } else { s / d as f64 })
        .collect()
}

/// Uniform random simple graph on `n` nodes where each pair is kept with
/// probability `p`, plus a spanning path when `connected` is set so no
/// node is isolated.
pub fn random_graph(seed: u64, n: u64, p: f64, connected: bool) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    if connected {
        for u in 1..n {
            edges.push((u - 1, u));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Edge weights drawn uniformly from [lo, hi].
pub fn random_weights(seed: u64, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Extracts the canonical edge list of a graph as plain tuples.
pub fn edge_tuples(g: &Graph) -> Vec<(NodeId, NodeId)> {
    g.edges().to_vec()
}

/// One snapshot of the reference change pipeline: canonical compacted
/// edges, detour-derived weights, and the flow-evolved weights, all keyed
/// by sorted original ids.
pub struct NaivePipelineSnapshot {
    pub ids: Vec<u64>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub evolved: Vec<f64>,
}

/// Reference run of ingest -> detour weighting -> Ricci flow for one raw
/// edge list, mirroring the library's arithmetic order exactly.
pub fn naive_pipeline_snapshot(
    raw_edges: &[(u64, u64)],
    cap: u32,
    weight_floor: f64,
    steps: u32,
    dt: f64,
    flow_floor: f64,
    ceiling: f64,
) -> NaivePipelineSnapshot {
    // canonicalize: undirected, no self-loops, deduplicated, sorted
    let mut ids: Vec<u64> = raw_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let compact = |x: u64| ids.binary_search(&x).unwrap() as NodeId;
    let mut edges: Vec<(NodeId, NodeId)> = raw_edges
        .iter()
        .filter(|&&(u, v)| u != v)
        .map(|&(u, v)| {
            let (a, b) = (compact(u), compact(v));
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let n = ids.len();

    // detour weighting, max-normalized with a floor
    let raw: Vec<f64> = (0..edges.len())
        .map(|e| match naive_detour(&edges, n, e) {
            Some(l) if l <= cap => 1.0 / l as f64,
            _ => weight_floor,
        })
        .collect();
    let max = raw.iter().fold(0.0f64, |m, &x| m.max(x));
    let gamma: Vec<f64> = raw
        .iter()
        .map(|&x| {
            let scaled = x / max;
            if scaled < weight_floor {
                weight_floor
            } else {
                scaled
            }
        })
        .collect();
    let omega = naive_node_weights(&edges, &gamma, n);

    let evolved = reference_ricci_flow(
        &edges, n, &gamma, &omega, steps, dt, flow_floor, ceiling, true,
    );
    NaivePipelineSnapshot { ids, edges, evolved }
}

/// Reference change scores over the union node set: per node, the Pearson
/// correlation of its incident-weight vectors (absent union edges are 0),
/// with bitwise-equal vectors scoring exactly 1 and degenerate ones 0.
pub fn naive_change_scores(
    a: &NaivePipelineSnapshot,
    b: &NaivePipelineSnapshot,
) -> (Vec<u64>, Vec<f64>) {
    let mut union_ids: Vec<u64> = a.ids.iter().chain(&b.ids).copied().collect();
    union_ids.sort_unstable();
    union_ids.dedup();

    // incident weight maps in union-index space
    let embed = |s: &NaivePipelineSnapshot| -> Vec<Vec<(usize, f64)>> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); union_ids.len()];
        for (e, &(u, v)) in s.edges.iter().enumerate() {
            let gu = union_ids.binary_search(&s.ids[u as usize]).unwrap();
            let gv = union_ids.binary_search(&s.ids[v as usize]).unwrap();
            rows[gu].push((gv, s.evolved[e]));
            rows[gv].push((gu, s.evolved[e]));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(idx, _)| idx);
        }
        rows
    };
    let rows_a = embed(a);
    let rows_b = embed(b);

    let scores = (0..union_ids.len())
        .map(|v| {
            // merge the two sorted neighbor lists into aligned vectors
            let (ra, rb) = (&rows_a[v], &rows_b[v]);
            let mut x = Vec::new();
            let mut y = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < ra.len() || j < rb.len() {
                let ka = ra.get(i).map(|&(k, _)| k);
                let kb = rb.get(j).map(|&(k, _)| k);
                match (ka, kb) {
                    (Some(p), Some(q)) if p == q => {
                        x.push(ra[i].1);
                        y.push(rb[j].1);
                        i += 1;
                        j += 1;
                    }
                    (Some(p), Some(q)) if p < q => {
                        x.push(ra[i].1);
                        y.push(0.0);
                        i += 1;
                    }
                    (Some(_), Some(_)) | (None, Some(_)) => {
                        x.push(0.0);
                        y.push(rb[j].1);
                        j += 1;
                    }
                    (Some(_), None) => {
                        x.push(ra[i].1);
                        y.push(0.0);
                        i += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            if x == y {
                return 1.0;
            }
            match naive_pearson(&x, &y) {
                Some(r) => r.clamp(-1.0, 1.0),
                None => 0.0,
            }
        })
        .collect();
    (union_ids, scores)
}
