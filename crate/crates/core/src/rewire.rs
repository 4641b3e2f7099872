//! Degree-preserving randomization by the switch chain.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SpatialGraph;

/// How the four endpoints of two picked edges are re-paired.
pub const PAIRING: &str = "(u,v),(u',v') -> (u,u'),(v,v')";

pub const DEFAULT_SWEEPS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RewireStats {
    pub proposals: u64,
    pub accepted: u64,
}

fn key(a: u32, b: u32) -> u64 {
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    (u64::from(u) << 32) | u64::from(v)
}

/// `sweeps * m` switch proposals; see [`switch_rewire_counted`].
pub fn switch_rewire(g: &SpatialGraph, sweeps: usize, seed: u64) -> Result<SpatialGraph> {
    switch_rewire_counted(g, sweeps, seed).map(|(g, _)| g)
}

/// Each proposal picks two distinct edges uniformly, orients each by a fair
/// coin as `(u, v)` and `(u', v')`, and replaces them by `(u, u')` and
/// `(v, v')`. Proposals that would create a loop or an edge already present
/// are rejected. Positions and weights are carried over unchanged.
pub fn switch_rewire_counted(g: &SpatialGraph, sweeps: usize, seed: u64) -> Result<(SpatialGraph, RewireStats)> {
    if sweeps == 0 {
        return Err(Error::Parameter("sweeps must be at least 1".into()));
    }
    let m = g.m();
    if m < 2 {
        log::warn!("graph has {m} edges; nothing to rewire");
        return Ok((g.clone(), RewireStats { proposals: 0, accepted: 0 }));
    }
    let mut edges: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut present: HashSet<u64> = edges.iter().map(|&(u, v)| key(u, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let proposals = (sweeps as u64) * (m as u64);
    let mut accepted = 0;
    for _ in 0..proposals {
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (mut u, mut v) = edges[i];
        if rng.random::<bool>() {
            std::mem::swap(&mut u, &mut v);
        }
        let (mut u2, mut v2) = edges[j];
        if rng.random::<bool>() {
            std::mem::swap(&mut u2, &mut v2);
        }
        let (a, b) = (key(u, u2), key(v, v2));
        if u == u2 || v == v2 || a == b || present.contains(&a) || present.contains(&b) {
            continue;
        }
        present.remove(&key(u, v));
        present.remove(&key(u2, v2));
        present.insert(a);
        present.insert(b);
        edges[i] = (u, u2);
        edges[j] = (v, v2);
        accepted += 1;
    }
    let out = g.with_pairs(edges.into_iter().map(|(u, v)| (u as usize, v as usize)))?;
    Ok((out, RewireStats { proposals, accepted }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixingDiagnostic {
    pub edge_jaccard: f64,
    pub mean_len_ratio: f64,
    pub degree_seq_equal: bool,
}

fn mean_len(g: &SpatialGraph) -> f64 {
    g.edges().iter().map(|e| e.len).sum::<f64>() / g.m() as f64
}

/// Overlap and length change between a graph and its rewired copy.
pub fn mixing_diagnostic(original: &SpatialGraph, rewired: &SpatialGraph) -> Result<MixingDiagnostic> {
    if original.n() != rewired.n() || original.positions() != rewired.positions() {
        return Err(Error::Validation("graphs do not share one node set".into()));
    }
    let a: HashSet<u64> = original.edges().iter().map(|e| key(e.u, e.v)).collect();
    let b: HashSet<u64> = rewired.edges().iter().map(|e| key(e.u, e.v)).collect();
    let union = a.union(&b).count();
    let edge_jaccard = if union == 0 {
        1.0
    } else {
        a.intersection(&b).count() as f64 / union as f64
    };
    Ok(MixingDiagnostic {
        edge_jaccard,
        mean_len_ratio: mean_len(rewired) / mean_len(original),
        degree_seq_equal: original.degrees() == rewired.degrees(),
    })
}
