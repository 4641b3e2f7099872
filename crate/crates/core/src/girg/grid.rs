//! Edge sampling over a hierarchy of torus cells.
//!
//! Nodes are bucketed into weight layers `[2^i, 2^{i+1})` and sorted by Morton
//! code, so that every cell of every level is a contiguous run. For a layer
//! pair `(i, j)` the target level is the finest one whose cell volume still
//! exceeds `w_i^max w_j^max / n`. Every node pair then falls into exactly one of:
//!
//! * neighbouring cells at the target level: every pair is tested exactly;
//! * the first level at which the two cells stop being neighbours (their
//!   parents still are): candidates are drawn by geometric jumps using an upper
//!   bound of the kernel over the cell pair and thinned to the exact probability.
//!
//! Each (layer pair, level, cell) task owns a random stream derived from the
//! master seed, so the output is independent of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{connection_probability, stream_seed, GirgParams, NodeSample};
use crate::graph::torus_distance_unchecked;

const CHUNK: usize = 512;

struct Layer {
    /// Node ids sorted by Morton code.
    nodes: Vec<u32>,
    codes: Vec<u64>,
}

impl Layer {
    /// Nodes of the cell with Morton prefix `cell` at `level`.
    fn cell(&self, cell: u64, level: u32, shift_per_level: u32, max_level: u32) -> &[u32] {
        let shift = (max_level - level) * shift_per_level;
        let lo = self.codes.partition_point(|&c| (c >> shift) < cell);
        let hi = lo + self.codes[lo..].partition_point(|&c| (c >> shift) <= cell);
        &self.nodes[lo..hi]
    }

    /// Distinct non-empty cells at `level`, in Morton order, with their node runs.
    fn nonempty_cells(&self, level: u32, shift_per_level: u32, max_level: u32) -> Vec<(u64, usize, usize)> {
        let shift = (max_level - level) * shift_per_level;
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.codes.len() {
            let cell = self.codes[start] >> shift;
            let end = start + self.codes[start..].partition_point(|&c| (c >> shift) <= cell);
            out.push((cell, start, end));
            start = end;
        }
        out
    }
}

struct Geometry {
    d: usize,
    max_level: u32,
}

impl Geometry {
    fn encode(&self, coords: &[u32]) -> u64 {
        let mut code = 0u64;
        for b in 0..self.max_level {
            for (k, c) in coords.iter().enumerate() {
                code |= (((c >> b) & 1) as u64) << (b as usize * self.d + k);
            }
        }
        code
    }

    fn decode(&self, code: u64, level: u32) -> Vec<u32> {
        let mut coords = vec![0u32; self.d];
        for b in 0..level {
            for (k, c) in coords.iter_mut().enumerate() {
                *c |= (((code >> (b as usize * self.d + k)) & 1) as u32) << b;
            }
        }
        coords
    }

    fn encode_at(&self, coords: &[u32], level: u32) -> u64 {
        let mut code = 0u64;
        for b in 0..level {
            for (k, c) in coords.iter().enumerate() {
                code |= (((c >> b) & 1) as u64) << (b as usize * self.d + k);
            }
        }
        code
    }

    /// Distinct cells within circular distance 1 of `coords` on every axis.
    fn neighbours(&self, coords: &[u32], level: u32) -> Vec<u64> {
        let k = 1i64 << level;
        let mut out = Vec::with_capacity(3usize.pow(self.d as u32));
        let mut offset = vec![-1i64; self.d];
        loop {
            let shifted: Vec<u32> = coords
                .iter()
                .zip(&offset)
                .map(|(&c, &o)| (c as i64 + o).rem_euclid(k) as u32)
                .collect();
            out.push(self.encode_at(&shifted, level));
            let mut axis = 0;
            while axis < self.d {
                offset[axis] += 1;
                if offset[axis] <= 1 {
                    break;
                }
                offset[axis] = -1;
                axis += 1;
            }
            if axis == self.d {
                break;
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn circular_gaps(&self, a: &[u32], b: &[u32], level: u32) -> (bool, f64) {
        let k = 1i64 << level;
        let mut neighbours = true;
        let mut acc = 0.0;
        for (&x, &y) in a.iter().zip(b) {
            let raw = (x as i64 - y as i64).abs();
            let delta = raw.min(k - raw);
            if delta > 1 {
                neighbours = false;
                let gap = (delta - 1) as f64 / k as f64;
                acc += gap * gap;
            }
        }
        (neighbours, acc.sqrt())
    }

    /// Cells at `level` that are not neighbours of `coords` while their parents
    /// are neighbours of its parent.
    fn distant_partners(&self, coords: &[u32], level: u32) -> Vec<(u64, f64)> {
        let parent: Vec<u32> = coords.iter().map(|c| c >> 1).collect();
        let mut out = Vec::new();
        for pcode in self.neighbours(&parent, level - 1) {
            let pc = self.decode(pcode, level - 1);
            for child in 0..(1u32 << self.d) {
                let cc: Vec<u32> = pc
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| (p << 1) | ((child >> k) & 1))
                    .collect();
                let (neighbours, gap) = self.circular_gaps(coords, &cc, level);
                if !neighbours {
                    out.push((self.encode_at(&cc, level), gap));
                }
            }
        }
        out
    }
}

fn layer_of(w: f64) -> usize {
    w.log2().floor().max(0.0) as usize
}

fn target_level(n: f64, wmax_i: f64, wmax_j: f64, d: usize, max_level: u32) -> u32 {
    let ratio = n / (wmax_i * wmax_j);
    if ratio < 1.0 {
        return 0;
    }
    let lvl = (ratio.log2() / d as f64).floor();
    (lvl.max(0.0) as u32).min(max_level)
}

/// Number of failures before the first success of a Bernoulli(`p`) sequence.
fn geometric_skip(rng: &mut impl Rng, log1m_p: f64) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    (u.ln() / log1m_p).floor()
}

pub(super) fn sample_edges(p: &GirgParams, nodes: &NodeSample) -> Vec<(u32, u32)> {
    let count = nodes.weights.len();
    if count < 2 {
        return Vec::new();
    }
    let d = p.d;
    let side = p.side();
    let max_level = {
        let by_size = (p.n.max(1.0).log2() / d as f64).floor().max(0.0) as u32;
        by_size.min(63 / d as u32)
    };
    let geo = Geometry { d, max_level };
    let scale = (1u64 << max_level) as f64;

    let num_layers = nodes.weights.iter().map(|&w| layer_of(w)).max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<(u64, u32)>> = vec![Vec::new(); num_layers];
    let mut coords = vec![0u32; d];
    for v in 0..count {
        let pos = &nodes.positions[v * d..(v + 1) * d];
        for (k, x) in pos.iter().enumerate() {
            coords[k] = ((x / side * scale) as u64).min((1u64 << max_level) - 1) as u32;
        }
        members[layer_of(nodes.weights[v])].push((geo.encode(&coords), v as u32));
    }
    let layers: Vec<Layer> = members
        .into_iter()
        .map(|mut m| {
            m.sort_unstable();
            Layer {
                codes: m.iter().map(|x| x.0).collect(),
                nodes: m.iter().map(|x| x.1).collect(),
            }
        })
        .collect();

    let ctx = Ctx {
        p,
        nodes,
        side,
        geo: &geo,
        layers: &layers,
    };

    let mut edges = Vec::new();
    for i in 0..num_layers {
        if layers[i].nodes.is_empty() {
            continue;
        }
        for j in i..num_layers {
            if layers[j].nodes.is_empty() {
                continue;
            }
            let wmax_i = (2.0f64).powi(i as i32 + 1);
            let wmax_j = (2.0f64).powi(j as i32 + 1);
            let top = target_level(p.n, wmax_i, wmax_j, d, max_level);
            edges.extend(ctx.close_pairs(i, j, top));
            for level in 1..=top {
                edges.extend(ctx.distant_pairs(i, j, level, wmax_i * wmax_j));
            }
        }
    }
    edges
}

struct Ctx<'a> {
    p: &'a GirgParams,
    nodes: &'a NodeSample,
    side: f64,
    geo: &'a Geometry,
    layers: &'a [Layer],
}

impl Ctx<'_> {
    #[inline]
    fn try_pair(&self, u: u32, v: u32, bound: f64, rng: &mut impl Rng, out: &mut Vec<(u32, u32)>) {
        let d = self.p.d;
        let (u_, v_) = (u as usize, v as usize);
        let dist = torus_distance_unchecked(
            &self.nodes.positions[u_ * d..(u_ + 1) * d],
            &self.nodes.positions[v_ * d..(v_ + 1) * d],
            self.side,
        );
        let prob = connection_probability(
            self.nodes.weights[u_],
            self.nodes.weights[v_],
            dist,
            d,
            self.p.alpha,
            self.p.c,
        );
        if prob >= bound || rng.random::<f64>() * bound < prob {
            out.push(if u < v { (u, v) } else { (v, u) });
        }
    }

    fn close_pairs(&self, i: usize, j: usize, level: u32) -> Vec<(u32, u32)> {
        let geo = self.geo;
        let cells = self.layers[i].nonempty_cells(level, geo.d as u32, geo.max_level);
        let chunks: Vec<Vec<(u32, u32)>> = cells
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut out = Vec::new();
                for &(cell, lo, hi) in chunk {
                    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(
                        self.p.seed,
                        &[0, i as u64, j as u64, level as u64, cell],
                    ));
                    let a_nodes = &self.layers[i].nodes[lo..hi];
                    let coords = geo.decode(cell, level);
                    for partner in geo.neighbours(&coords, level) {
                        if i == j && partner < cell {
                            continue;
                        }
                        let b_nodes = self.layers[j].cell(partner, level, geo.d as u32, geo.max_level);
                        if i == j && partner == cell {
                            for (x, &u) in a_nodes.iter().enumerate() {
                                for &v in &a_nodes[x + 1..] {
                                    self.try_pair(u, v, 1.0, &mut rng, &mut out);
                                }
                            }
                        } else {
                            for &u in a_nodes {
                                for &v in b_nodes {
                                    self.try_pair(u, v, 1.0, &mut rng, &mut out);
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        chunks.into_iter().flatten().collect()
    }

    fn distant_pairs(&self, i: usize, j: usize, level: u32, wmax_product: f64) -> Vec<(u32, u32)> {
        let geo = self.geo;
        let p = self.p;
        let cells = self.layers[i].nonempty_cells(level, geo.d as u32, geo.max_level);
        let chunks: Vec<Vec<(u32, u32)>> = cells
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut out = Vec::new();
                for &(cell, lo, hi) in chunk {
                    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(
                        p.seed,
                        &[1, i as u64, j as u64, level as u64, cell],
                    ));
                    let a_nodes = &self.layers[i].nodes[lo..hi];
                    let coords = geo.decode(cell, level);
                    for (partner, gap_unit) in geo.distant_partners(&coords, level) {
                        if i == j && partner <= cell {
                            continue;
                        }
                        let b_nodes = self.layers[j].cell(partner, level, geo.d as u32, geo.max_level);
                        if b_nodes.is_empty() {
                            continue;
                        }
                        let min_dist = gap_unit * self.side;
                        let bound = connection_probability(
                            wmax_product,
                            1.0,
                            min_dist,
                            p.d,
                            p.alpha,
                            p.c,
                        );
                        if bound <= 0.0 {
                            continue;
                        }
                        let total = a_nodes.len() * b_nodes.len();
                        let stride = b_nodes.len();
                        if bound >= 1.0 {
                            for idx in 0..total {
                                self.try_pair(a_nodes[idx / stride], b_nodes[idx % stride], bound, &mut rng, &mut out);
                            }
                            continue;
                        }
                        let log1m = (-bound).ln_1p();
                        let mut idx = 0usize;
                        loop {
                            let skip = geometric_skip(&mut rng, log1m);
                            if skip >= (total - idx) as f64 {
                                break;
                            }
                            idx += skip as usize;
                            self.try_pair(a_nodes[idx / stride], b_nodes[idx % stride], bound, &mut rng, &mut out);
                            idx += 1;
                            if idx >= total {
                                break;
                            }
                        }
                    }
                }
                out
            })
            .collect();
        chunks.into_iter().flatten().collect()
    }
}
