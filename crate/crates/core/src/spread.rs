//! Penalized first-passage spreading: per-edge transmission costs, single-source
//! infection times, epidemic curves and heatmap rasters.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Metric, SpatialGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PenaltyBase {
    Weight,
    Degree,
}

impl PenaltyBase {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "weight" => Ok(PenaltyBase::Weight),
            "degree" => Ok(PenaltyBase::Degree),
            _ => Err(Error::Parameter(format!("unknown penalty base `{s}` (weight, degree)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PenaltyBase::Weight => "weight",
            PenaltyBase::Degree => "degree",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenaltyParams {
    /// Sender exponent.
    pub mu: f64,
    /// Receiver exponent.
    pub nu: f64,
    pub zeta: f64,
    pub beta: f64,
    pub base: PenaltyBase,
}

impl PenaltyParams {
    /// Symmetric penalties (`nu = mu`).
    pub fn new(mu: f64, zeta: f64, beta: f64, base: PenaltyBase) -> Result<Self> {
        Self::with_nu(mu, mu, zeta, beta, base)
    }

    pub fn with_nu(mu: f64, nu: f64, zeta: f64, beta: f64, base: PenaltyBase) -> Result<Self> {
        let p = Self {
            mu,
            nu,
            zeta,
            beta,
            base,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("nu", self.nu), ("zeta", self.zeta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Parameter(format!("beta must be positive, got {}", self.beta)));
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.mu == self.nu
    }
}

/// Edge costs aligned with `SpatialGraph::edges()`.
#[derive(Clone, Debug)]
pub struct CostAssignment {
    /// Unit-mean exponential draw per edge.
    pub y: Vec<f64>,
    /// Cost of transmission from the smaller to the larger endpoint.
    pub forward: Vec<f64>,
    /// Cost in the opposite direction; `None` when costs are symmetric.
    pub backward: Option<Vec<f64>>,
    pub seed: u64,
}

impl CostAssignment {
    #[inline]
    fn cost(&self, edge: usize, from_smaller: bool) -> f64 {
        match (&self.backward, from_smaller) {
            (Some(b), false) => b[edge],
            _ => self.forward[edge],
        }
    }
}

fn penalty_bases(g: &SpatialGraph, base: PenaltyBase) -> Result<Vec<f64>> {
    match base {
        PenaltyBase::Weight => g
            .weights()
            .map(<[f64]>::to_vec)
            .ok_or_else(|| Error::Config("weight penalties need node weights, the graph has none".into())),
        PenaltyBase::Degree => Ok(g.degrees().into_iter().map(|k| k as f64).collect()),
    }
}

/// Draw one Exp(1) variable per edge and turn it into directed costs.
pub fn assign_costs(g: &SpatialGraph, p: &PenaltyParams, seed: u64) -> Result<CostAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<f64> = (0..g.m()).map(|_| Exp1.sample(&mut rng)).collect();
    let mut c = costs_from_draws(g, p, y)?;
    c.seed = seed;
    Ok(c)
}

/// Costs for given exponential draws, for coupling runs that share randomness.
pub fn costs_from_draws(g: &SpatialGraph, p: &PenaltyParams, y: Vec<f64>) -> Result<CostAssignment> {
    p.validate()?;
    if y.len() != g.m() {
        return Err(Error::Dimension {
            expected: g.m(),
            got: y.len(),
        });
    }
    let b = penalty_bases(g, p.base)?;
    let cost = |e: usize, from: usize, to: usize| {
        let len = g.edges()[e].len.max(1.0);
        y[e] / p.beta * b[from].powf(p.mu) * b[to].powf(p.nu) * len.powf(p.zeta)
    };
    let forward = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| cost(e, edge.u as usize, edge.v as usize))
        .collect();
    let backward = (!p.is_symmetric()).then(|| {
        g.edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| cost(e, edge.v as usize, edge.u as usize))
            .collect()
    });
    Ok(CostAssignment {
        y,
        forward,
        backward,
        seed: 0,
    })
}

pub const UNREACHED: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SpreadResult {
    pub source: usize,
    /// Infection time per node, `inf` when unreachable.
    pub times: Vec<f64>,
    /// Nodes in infection order, ties broken by node id.
    pub order: Vec<u32>,
    /// Position of each node in `order`, `UNREACHED` otherwise.
    pub rank: Vec<u32>,
    /// Parent in the shortest-path tree, `UNREACHED` for the source and unreachable nodes.
    pub predecessor: Vec<u32>,
    pub seed: u64,
}

impl SpreadResult {
    pub fn reached(&self) -> usize {
        self.order.len()
    }

    pub fn rank_of(&self, v: usize) -> Option<usize> {
        (self.rank[v] != UNREACHED).then_some(self.rank[v] as usize)
    }

    /// Number of nodes infected by time `t`.
    pub fn infected_by(&self, t: f64) -> usize {
        self.order
            .partition_point(|&v| self.times[v as usize] <= t)
    }
}

/// Exact single-source shortest paths over the directed edge costs.
pub fn spread_from(g: &SpatialGraph, costs: &CostAssignment, source: usize) -> Result<SpreadResult> {
    let n = g.n();
    if source >= n {
        return Err(Error::Parameter(format!("source {source} outside 0..{n}")));
    }
    if costs.forward.len() != g.m() {
        return Err(Error::Dimension {
            expected: g.m(),
            got: costs.forward.len(),
        });
    }
    let mut times = vec![f64::INFINITY; n];
    let mut predecessor = vec![UNREACHED; n];
    let mut rank = vec![UNREACHED; n];
    let mut order = Vec::new();
    // nonnegative f64 bit patterns order like the values
    let mut heap = BinaryHeap::new();
    times[source] = 0.0;
    heap.push(Reverse((0f64.to_bits(), source as u32)));
    while let Some(Reverse((bits, v))) = heap.pop() {
        let vu = v as usize;
        if rank[vu] != UNREACHED || f64::from_bits(bits) > times[vu] {
            continue;
        }
        rank[vu] = order.len() as u32;
        order.push(v);
        let tv = times[vu];
        for &(w, e) in g.neighbors(vu) {
            let wu = w as usize;
            if rank[wu] != UNREACHED {
                continue;
            }
            let cand = tv + costs.cost(e as usize, v < w);
            if cand < times[wu] {
                times[wu] = cand;
                predecessor[wu] = v;
                heap.push(Reverse((cand.to_bits(), w)));
            }
        }
    }
    Ok(SpreadResult {
        source,
        times,
        order,
        rank,
        predecessor,
        seed: costs.seed,
    })
}

/// Independent runs from one source, run `r` drawing costs with `run_seed(seed, r)`.
pub fn simulate_runs(
    g: &SpatialGraph,
    p: &PenaltyParams,
    source: usize,
    runs: usize,
    seed: u64,
) -> Result<Vec<SpreadResult>> {
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let costs = assign_costs(g, p, run_seed(seed, r as u64))?;
            spread_from(g, &costs, source)
        })
        .collect()
}

/// Seed of run `run` within a batch seeded by `seed`.
pub fn run_seed(seed: u64, run: u64) -> u64 {
    crate::girg::stream_seed(seed, &[0x7275_6e73, run])
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpidemicCurve {
    /// `(count, time of the count-th infection)`.
    pub samples: Vec<(usize, f64)>,
    pub total: usize,
}

/// Counts kept on a curve of `total` infections: everything below 32, then
/// numbers with at most five significant bits, then `total` itself.
pub fn sample_counts(total: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=total.min(31)).collect();
    let mut k = 5;
    while (1usize << k) <= total {
        for low in 0..16usize {
            let c = (1usize << k) + (low << (k - 4));
            if c <= total {
                out.push(c);
            }
        }
        k += 1;
    }
    if out.last() != Some(&total) && total > 0 {
        out.push(total);
    }
    out
}

pub fn epidemic_curve(r: &SpreadResult) -> Result<EpidemicCurve> {
    let total = r.reached();
    if total == 0 {
        return Err(Error::Validation("no node was reached".into()));
    }
    let samples = sample_counts(total)
        .into_iter()
        .map(|c| (c, r.times[r.order[c - 1] as usize]))
        .collect();
    Ok(EpidemicCurve { samples, total })
}

impl EpidemicCurve {
    /// Keep only samples with count at most `max_count`.
    pub fn truncated(&self, max_count: usize) -> EpidemicCurve {
        EpidemicCurve {
            samples: self
                .samples
                .iter()
                .copied()
                .filter(|&(c, _)| c <= max_count)
                .collect(),
            total: self.total,
        }
    }
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per sampled count, the `qs` quantiles of the time across curves.
pub fn curve_quantiles(curves: &[EpidemicCurve], qs: &[f64]) -> Result<Vec<(usize, Vec<f64>)>> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Alignment("no curves given".into()))?;
    if let Some(q) = qs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::Parameter(format!("quantile {q} outside [0, 1]")));
    }
    for (i, c) in curves.iter().enumerate() {
        if c.samples.len() != first.samples.len()
            || c.samples.iter().zip(&first.samples).any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::Alignment(format!(
                "curve {i} is sampled at different counts than curve 0"
            )));
        }
    }
    let mut column = vec![0.0; curves.len()];
    Ok(first
        .samples
        .iter()
        .enumerate()
        .map(|(k, &(count, _))| {
            for (slot, c) in column.iter_mut().zip(curves) {
                *slot = c.samples[k].1;
            }
            column.sort_by(f64::total_cmp);
            (count, qs.iter().map(|&q| quantile_sorted(&column, q)).collect())
        })
        .collect())
}

/// First sampled time at which at least `ceil(frac * total)` nodes are infected.
pub fn saturation_time(c: &EpidemicCurve, frac: f64) -> Result<f64> {
    if !(frac > 0.0 && frac <= 1.0) {
        return Err(Error::Parameter(format!("fraction must lie in (0, 1], got {frac}")));
    }
    let target = (frac * c.total as f64).ceil() as usize;
    c.samples
        .iter()
        .find(|&&(count, _)| count >= target.max(1))
        .map(|&(_, t)| t)
        .ok_or_else(|| Error::Validation(format!("curve never reaches {target} infections")))
}

/// Chain of nodes from the source to `target`; `None` when unreachable.
pub fn infection_path(r: &SpreadResult, target: usize) -> Option<Vec<usize>> {
    r.rank_of(target)?;
    let mut path = vec![target];
    let mut v = target;
    while v != r.source {
        v = r.predecessor[v] as usize;
        path.push(v);
    }
    path.reverse();
    Some(path)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Heatmap {
    pub boxes: usize,
    /// `(bx, by, normalized rank)` for every non-empty box.
    pub cells: Vec<(usize, usize, f64)>,
}

/// Rasterize the infection order: each box gets the normalized rank of its
/// earliest-infected node. Torus graphs are shifted so the source sits at the
/// centre; haversine graphs use `x = lon`, `y = lat`. `crop` is `[x1, y1, x2, y2]`.
pub fn heatmap_grid(
    r: &SpreadResult,
    g: &SpatialGraph,
    boxes: usize,
    crop: Option<[f64; 4]>,
) -> Result<Heatmap> {
    if g.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: g.dim(),
        });
    }
    if boxes == 0 {
        return Err(Error::Validation("need at least one box per side".into()));
    }
    let project = |v: usize| -> [f64; 2] {
        let p = g.pos(v);
        match g.metric() {
            Metric::Torus { side } => {
                let s = g.pos(r.source);
                let shift = |x: f64, c: f64| (x - c + side / 2.0).rem_euclid(*side);
                [shift(p[0], s[0]), shift(p[1], s[1])]
            }
            Metric::Haversine { .. } => [p[1], p[0]],
            Metric::Euclidean => [p[0], p[1]],
        }
    };
    let bounds = match (crop, g.metric()) {
        (Some(b), _) => {
            if !(b[2] > b[0] && b[3] > b[1]) || b.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!("degenerate crop {b:?}")));
            }
            b
        }
        (None, Metric::Torus { side }) => [0.0, 0.0, *side, *side],
        (None, _) => {
            let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
            for &v in &r.order {
                let [x, y] = project(v as usize);
                b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
            }
            b
        }
    };
    let width = [(bounds[2] - bounds[0]).max(f64::MIN_POSITIVE), (bounds[3] - bounds[1]).max(f64::MIN_POSITIVE)];
    let to_box = |x: f64, lo: f64, w: f64| (((x - lo) / w * boxes as f64) as usize).min(boxes - 1);

    let mut first = vec![usize::MAX; boxes * boxes];
    let mut in_crop = 0usize;
    for &v in &r.order {
        let [x, y] = project(v as usize);
        if x < bounds[0] || x > bounds[2] || y < bounds[1] || y > bounds[3] {
            continue;
        }
        let cell = to_box(x, bounds[0], width[0]) * boxes + to_box(y, bounds[1], width[1]);
        if first[cell] == usize::MAX {
            first[cell] = in_crop;
        }
        in_crop += 1;
    }
    let denom = in_crop.saturating_sub(1).max(1) as f64;
    let cells = first
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != usize::MAX)
        .map(|(cell, &k)| (cell / boxes, cell % boxes, k as f64 / denom))
        .collect();
    Ok(Heatmap { boxes, cells })
}
