//! Seeded synthetic graph generators: preferential attachment, ring
//! lattice with rewiring, and the uniform random graph.
//!
//! All generators are deterministic functions of (model, seed): the same
//! pair always yields the same edge list, byte for byte when exported.
//! Outputs are raw edge lists; self-loops never occur, duplicate edges
//! are avoided by construction.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GenModel {
    /// Growth with degree-proportional attachment: each new node links to
    /// `m` distinct existing nodes, starting from an (m+1)-clique.
    PreferentialAttachment { n: usize, m: usize },
    /// Ring lattice with `k/2` neighbors per side, each lattice edge
    /// rewired to a uniform new endpoint with probability `p`.
    RingLatticeRewire { n: usize, k: usize, p: f64 },
    /// Uniform random graph: every pair is an edge with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
}

impl std::fmt::Display for GenModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            GenModel::PreferentialAttachment { n, m } => {
                write!(f, "preferential-attachment n={n} m={m}")
            }
            GenModel::RingLatticeRewire { n, k, p } => {
                write!(f, "ring-lattice-rewire n={n} k={k} p={p}")
            }
            GenModel::ErdosRenyi { n, p } => write!(f, "erdos-renyi n={n} p={p}"),
        }
    }
}

impl GenModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GenModel::PreferentialAttachment { n, m } => {
                if m < 1 {
                    return Err(Error::Config("attachment count m must be at least 1".into()));
                }
                if n <= m {
                    return Err(Error::Config(format!(
                        "need more nodes than attachments, got n={n} with m={m}"
                    )));
                }
            }
            GenModel::RingLatticeRewire { n, k, p } => {
                if k < 2 || k % 2 != 0 {
                    return Err(Error::Config(format!(
                        "lattice degree k must be even and at least 2, got {k}"
                    )));
                }
                if n <= k {
                    return Err(Error::Config(format!(
                        "ring lattice needs n > k, got n={n} with k={k}"
                    )));
                }
                check_probability(p)?;
            }
            GenModel::ErdosRenyi { n, p } => {
                if n < 1 {
                    return Err(Error::Config("node count must be at least 1".into()));
                }
                check_probability(p)?;
            }
        }
        Ok(())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("probability must be in [0, 1], got {p}")));
    }
    Ok(())
}

/// Generates the edge list for `model` under a fixed seed.
pub fn generate(model: &GenModel, seed: u64) -> Result<Vec<(u64, u64)>> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match *model {
        GenModel::PreferentialAttachment { n, m } => preferential_attachment(n, m, &mut rng),
        GenModel::RingLatticeRewire { n, k, p } => ring_lattice_rewire(n, k, p, &mut rng),
        GenModel::ErdosRenyi { n, p } => erdos_renyi(n, p, &mut rng),
    })
}

fn preferential_attachment(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(u64, u64)> {
    let mut edges: Vec<(u64, u64)> = Vec::with_capacity((m + 1) * m / 2 + (n - m - 1) * m);
    // Attachment stubs: every edge contributes both endpoints, so sampling
    // a uniform stub is sampling a node proportional to its degree.
    let mut stubs: Vec<u64> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=(m as u64) {
        for w in (u + 1)..=(m as u64) {
            edges.push((u, w));
            stubs.push(u);
            stubs.push(w);
        }
    }
    for v in (m as u64 + 1)..(n as u64) {
        let mut chosen: BTreeSet<u64> = BTreeSet::new();
        while chosen.len() < m {
            let stub = stubs[rng.random_range(0..stubs.len())];
            chosen.insert(stub);
        }
        for &t in &chosen {
            edges.push((t, v));
            stubs.push(t);
            stubs.push(v);
        }
    }
    edges
}

fn ring_lattice_rewire(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u64, u64)> {
    let canon = |a: u64, b: u64| if a < b { (a, b) } else { (b, a) };
    let mut edges: Vec<(u64, u64)> = Vec::with_capacity(n * k / 2);
    let mut present: BTreeSet<(u64, u64)> = BTreeSet::new();
    for i in 0..n as u64 {
        for j in 1..=(k / 2) as u64 {
            let e = canon(i, (i + j) % n as u64);
            edges.push(e);
            present.insert(e);
        }
    }
    // Rewire pass in construction order: move the far endpoint of each
    // lattice edge to a uniform node, skipping self-loops and existing
    // edges (the edge is kept when no free slot turns up).
    for idx in 0..edges.len() {
        if rng.random::<f64>() >= p {
            continue;
        }
        let old = edges[idx];
        let keep = old.0; // keep the lower endpoint, re-target the other
        for _ in 0..n {
            let w = rng.random_range(0..n as u64);
            if w == keep {
                continue;
            }
            let candidate = canon(keep, w);
            if present.contains(&candidate) {
                continue;
            }
            present.remove(&old);
            present.insert(candidate);
            edges[idx] = candidate;
            break;
        }
    }
    edges
}

fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u64, u64)> {
    let mut edges = Vec::new();
    for u in 0..n as u64 {
        for w in (u + 1)..n as u64 {
            if rng.random::<f64>() < p {
                edges.push((u, w));
            }
        }
    }
    edges
}

/// Writes the generated edge list in the snap dialect with a header that
/// pins the model and seed.
pub fn write_edge_list<W: std::io::Write>(
    mut out: W,
    model: &GenModel,
    seed: u64,
    edges: &[(u64, u64)],
) -> std::io::Result<()> {
    writeln!(out, "# synthetic {model} seed={seed} edges={}", edges.len())?;
    for &(u, w) in edges {
        writeln!(out, "{u} {w}")?;
    }
    Ok(())
}
