//! Spatial graph storage: node positions, optional weights, an undirected edge
//! list with precomputed lengths, and a CSR adjacency built once at construction.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    /// Periodic box `[0, side)^d`, Euclidean norm of the shortest wrap-around displacement.
    Torus { side: f64 },
    Euclidean,
    /// Positions are `(lat, lon)` in degrees.
    Haversine { radius_km: f64 },
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Torus { .. } => "torus",
            Metric::Euclidean => "euclidean",
            Metric::Haversine { .. } => "haversine",
        }
    }

    /// The numeric header parameter of the sgraph format.
    pub fn parameter(&self) -> f64 {
        match self {
            Metric::Torus { side } => *side,
            Metric::Euclidean => 0.0,
            Metric::Haversine { radius_km } => *radius_km,
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            Metric::Torus { side } => torus_distance(a, b, *side),
            Metric::Euclidean => {
                check_dims(a, b)?;
                Ok(euclidean(a, b))
            }
            Metric::Haversine { radius_km } => {
                check_dims(a, b)?;
                if a.len() != 2 {
                    return Err(Error::Dimension {
                        expected: 2,
                        got: a.len(),
                    });
                }
                haversine_with_radius([a[0], a[1]], [b[0], b[1]], *radius_km)
            }
        }
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean length of the shortest wrap-around displacement on `[0, side)^d`.
pub fn torus_distance(a: &[f64], b: &[f64], side: f64) -> Result<f64> {
    check_dims(a, b)?;
    Ok(torus_distance_unchecked(a, b, side))
}

#[inline]
pub(crate) fn torus_distance_unchecked(a: &[f64], b: &[f64], side: f64) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let mut delta = (x - y).abs() % side;
        if delta > side - delta {
            delta = side - delta;
        }
        acc += delta * delta;
    }
    acc.sqrt()
}

/// Great-circle distance in km between two `(lat, lon)` points in degrees.
pub fn haversine_km(a: [f64; 2], b: [f64; 2]) -> Result<f64> {
    haversine_with_radius(a, b, EARTH_RADIUS_KM)
}

pub fn haversine_with_radius(a: [f64; 2], b: [f64; 2], radius_km: f64) -> Result<f64> {
    for p in [a, b] {
        if !(-90.0..=90.0).contains(&p[0]) || !(-180.0..=180.0).contains(&p[1]) {
            return Err(Error::Validation(format!(
                "coordinate ({}, {}) outside lat [-90, 90] / lon [-180, 180]",
                p[0], p[1]
            )));
        }
    }
    let (lat1, lon1) = (a[0].to_radians(), a[1].to_radians());
    let (lat2, lon2) = (b[0].to_radians(), b[1].to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    Ok(2.0 * radius_km * h.sqrt().min(1.0).asin())
}

/// Borrowed view of one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeRecord<'a> {
    pub id: usize,
    pub pos: &'a [f64],
    pub weight: Option<f64>,
    pub degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub len: f64,
}

/// Immutable undirected simple graph embedded in a metric space.
#[derive(Clone, Debug)]
pub struct SpatialGraph {
    dim: usize,
    metric: Metric,
    positions: Vec<f64>,
    weights: Option<Vec<f64>>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<(u32, u32)>,
}

impl SpatialGraph {
    /// Builds a graph from flat row-major `positions` (`n * dim` values) and
    /// unordered node pairs. Self-loops and duplicate pairs are rejected.
    pub fn new(
        dim: usize,
        metric: Metric,
        positions: Vec<f64>,
        weights: Option<Vec<f64>>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if positions.len() % dim != 0 {
            return Err(Error::Validation(format!(
                "{} coordinates is not a multiple of dimension {dim}",
                positions.len()
            )));
        }
        let n = positions.len() / dim;
        if n > u32::MAX as usize {
            return Err(Error::Validation(format!("{n} nodes exceeds u32 ids")));
        }
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(Error::Validation(format!(
                    "{} weights for {n} nodes",
                    w.len()
                )));
            }
            if let Some(bad) = w.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                return Err(Error::Validation(format!("non-positive weight {bad}")));
            }
        }
        if let Metric::Haversine { .. } = metric {
            if dim != 2 {
                return Err(Error::Dimension {
                    expected: 2,
                    got: dim,
                });
            }
        }

        let mut keys: Vec<(u32, u32)> = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop at node {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            keys.push((u as u32, v as u32));
        }
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }

        let mut edges = Vec::with_capacity(keys.len());
        for (u, v) in keys {
            let pu = &positions[u as usize * dim..(u as usize + 1) * dim];
            let pv = &positions[v as usize * dim..(v as usize + 1) * dim];
            let len = metric.distance(pu, pv)?;
            edges.push(Edge { u, v, len });
        }
        Ok(Self::assemble(dim, metric, positions, weights, edges))
    }

    fn assemble(
        dim: usize,
        metric: Metric,
        positions: Vec<f64>,
        weights: Option<Vec<f64>>,
        edges: Vec<Edge>,
    ) -> Self {
        let n = positions.len() / dim;
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.u as usize + 1] += 1;
            offsets[e.v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut adjacency = vec![(0u32, 0u32); 2 * edges.len()];
        for (idx, e) in edges.iter().enumerate() {
            adjacency[cursor[e.u as usize]] = (e.v, idx as u32);
            cursor[e.u as usize] += 1;
            adjacency[cursor[e.v as usize]] = (e.u, idx as u32);
            cursor[e.v as usize] += 1;
        }
        Self {
            dim,
            metric,
            positions,
            weights,
            edges,
            offsets,
            adjacency,
        }
    }

    /// Same nodes, a different edge set.
    pub fn with_pairs(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(
            self.dim,
            self.metric.clone(),
            self.positions.clone(),
            self.weights.clone(),
            pairs,
        )
    }

    pub fn n(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn pos(&self, v: usize) -> &[f64] {
        &self.positions[v * self.dim..(v + 1) * self.dim]
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weight(&self, v: usize) -> Option<f64> {
        self.weights.as_ref().map(|w| w[v])
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(neighbour, edge index)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn node(&self, v: usize) -> NodeRecord<'_> {
        NodeRecord {
            id: v,
            pos: self.pos(v),
            weight: self.weight(v),
            degree: self.degree(v),
        }
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.metric
            .distance(self.pos(a), self.pos(b))
            .expect("stored positions share the graph dimension")
    }

    /// Induced subgraph on `keep` (in the given order). Returns the new graph and
    /// the original id of each new node.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<(SpatialGraph, Vec<usize>)> {
        let mut remap = vec![u32::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new as u32;
        }
        let mut positions = Vec::with_capacity(keep.len() * self.dim);
        for &old in keep {
            positions.extend_from_slice(self.pos(old));
        }
        let weights = self
            .weights
            .as_ref()
            .map(|w| keep.iter().map(|&old| w[old]).collect());
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| remap[e.u as usize] != u32::MAX && remap[e.v as usize] != u32::MAX)
            .map(|e| {
                let (a, b) = (remap[e.u as usize], remap[e.v as usize]);
                Edge {
                    u: a.min(b),
                    v: a.max(b),
                    len: e.len,
                }
            })
            .collect();
        let mut edges = edges;
        edges.sort_unstable_by_key(|e| (e.u, e.v));
        Ok((
            Self::assemble(self.dim, self.metric.clone(), positions, weights, edges),
            keep.to_vec(),
        ))
    }
}

/// Component label per node, component sizes, and the largest component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentLabeling {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
    pub largest: usize,
}

impl ComponentLabeling {
    pub fn members(&self, label: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == label)
            .map(|(v, _)| v)
            .collect()
    }
}

/// BFS labelling; components are numbered in order of their smallest node id.
pub fn connected_components(g: &SpatialGraph) -> ComponentLabeling {
    let n = g.n();
    let mut labels = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let label = sizes.len();
        labels[start] = label;
        queue.push_back(start);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &(w, _) in g.neighbors(v) {
                let w = w as usize;
                if labels[w] == usize::MAX {
                    labels[w] = label;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    let largest = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(l, _)| l)
        .unwrap_or(0);
    ComponentLabeling {
        labels,
        sizes,
        largest,
    }
}

/// Induced subgraph on the largest connected component, plus original ids.
pub fn largest_component(g: &SpatialGraph) -> Result<(SpatialGraph, Vec<usize>)> {
    let comps = connected_components(g);
    if comps.sizes.is_empty() {
        return g.induced_subgraph(&[]);
    }
    g.induced_subgraph(&comps.members(comps.largest))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    /// `histogram[k]` is the number of nodes of degree `k`.
    pub histogram: Vec<usize>,
}

pub fn degree_stats(g: &SpatialGraph) -> DegreeStats {
    let n = g.n();
    let degrees = g.degrees();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let min = degrees.iter().copied().min().unwrap_or(0);
    let mut histogram = vec![0usize; max + 1];
    for &k in &degrees {
        histogram[k] += 1;
    }
    let mean = if n == 0 {
        0.0
    } else {
        2.0 * g.m() as f64 / n as f64
    };
    DegreeStats {
        mean,
        min,
        max,
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plane(n: usize, pairs: &[(usize, usize)]) -> SpatialGraph {
        let positions = (0..n).flat_map(|i| [i as f64, 0.0]).collect();
        SpatialGraph::new(2, Metric::Euclidean, positions, None, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn torus_distance_examples() {
        assert_eq!(torus_distance(&[0.0, 0.0], &[0.0, 0.0], 100.0).unwrap(), 0.0);
        assert!((torus_distance(&[0.0, 0.0], &[99.0, 0.0], 100.0).unwrap() - 1.0).abs() < 1e-12);
        let d = torus_distance(&[10.0, 10.0], &[60.0, 50.0], 100.0).unwrap();
        // axis gaps are 50 and 40, neither wraps shorter
        assert!((d - 4100f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            torus_distance(&[0.0], &[0.0, 1.0], 10.0),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn torus_distance_matches_min_over_shifts() {
        let side = 7.5;
        let a: [f64; 3] = [0.3, 6.9, 2.0];
        let b: [f64; 3] = [7.1, 0.2, 5.9];
        let mut best = f64::INFINITY;
        for sx in [-1.0, 0.0, 1.0] {
            for sy in [-1.0, 0.0, 1.0] {
                for sz in [-1.0, 0.0, 1.0] {
                    let s: [f64; 3] = [sx, sy, sz];
                    let d2: f64 = (0..3)
                        .map(|k| (a[k] - b[k] + s[k] * side).powi(2))
                        .sum();
                    best = best.min(d2.sqrt());
                }
            }
        }
        assert!((torus_distance(&a, &b, side).unwrap() - best).abs() < 1e-12);
    }

    #[test]
    fn haversine_examples() {
        let p = [49.50, 11.44];
        assert_eq!(haversine_km(p, p).unwrap(), 0.0);
        let anti = haversine_km([0.0, 0.0], [0.0, 180.0]).unwrap();
        assert!((anti - std::f64::consts::PI * EARTH_RADIUS_KM).abs() < 1e-6);
        assert!((anti - 20015.1).abs() < 0.1);

        // spherical law of cosines as an independent route
        let q: [f64; 2] = [48.137, 11.575];
        let (f1, l1) = (p[0].to_radians(), p[1].to_radians());
        let (f2, l2) = (q[0].to_radians(), q[1].to_radians());
        let cosines =
            (f1.sin() * f2.sin() + f1.cos() * f2.cos() * (l2 - l1).cos()).acos() * EARTH_RADIUS_KM;
        let hav = haversine_km(p, q).unwrap();
        assert!(((hav - cosines) / cosines).abs() < 1e-3);
        assert!(hav > 150.0 && hav < 153.0);
    }

    #[test]
    fn haversine_rejects_out_of_range() {
        assert!(matches!(
            haversine_km([91.0, 0.0], [0.0, 0.0]),
            Err(Error::Validation(_))
        ));
        assert!(haversine_km([0.0, 0.0], [0.0, -180.5]).is_err());
    }

    #[test]
    fn components_small_cases() {
        let g = plane(2, &[]);
        let c = connected_components(&g);
        assert_eq!(c.sizes, vec![1, 1]);

        let g = plane(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let c = connected_components(&g);
        assert_eq!(c.sizes, vec![5]);
        assert_eq!(c.largest, 0);
    }

    #[test]
    fn degree_stats_cases() {
        let g = plane(3, &[]);
        let s = degree_stats(&g);
        assert_eq!((s.mean, s.max), (0.0, 0));

        let g = plane(3, &[(0, 1), (1, 2), (0, 2)]);
        let s = degree_stats(&g);
        assert_eq!((s.mean, s.min, s.max), (2.0, 2, 2));
        assert_eq!(s.histogram, vec![0, 0, 3]);
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        let pos = vec![0.0, 0.0, 1.0, 1.0];
        assert!(SpatialGraph::new(2, Metric::Euclidean, pos.clone(), None, [(0, 0)]).is_err());
        assert!(SpatialGraph::new(2, Metric::Euclidean, pos, None, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn largest_component_keeps_induced_edges() {
        let g = plane(6, &[(0, 1), (2, 3), (3, 4), (4, 2)]);
        let (lcc, ids) = largest_component(&g).unwrap();
        assert_eq!(ids, vec![2, 3, 4]);
        assert_eq!(lcc.m(), 3);
        assert_eq!(lcc.pos(0), g.pos(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn torus_distance_is_a_metric(
            a in proptest::array::uniform2(0.0f64..50.0),
            b in proptest::array::uniform2(0.0f64..50.0),
            c in proptest::array::uniform2(0.0f64..50.0),
        ) {
            let side = 50.0;
            let ab = torus_distance(&a, &b, side).unwrap();
            let ba = torus_distance(&b, &a, side).unwrap();
            let bc = torus_distance(&b, &c, side).unwrap();
            let ac = torus_distance(&a, &c, side).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert!(ab <= side * 2f64.sqrt() / 2.0 + 1e-9);
        }

        #[test]
        fn components_invariant_under_edge_permutation(
            raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30),
            seed in any::<u64>(),
        ) {
            let mut pairs: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            pairs.sort();
            pairs.dedup();
            let g1 = plane(12, &pairs);
            let mut shuffled = pairs.clone();
            use rand::{seq::SliceRandom, SeedableRng};
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled: Vec<_> = shuffled.into_iter().map(|(a, b)| (b, a)).collect();
            let g2 = plane(12, &shuffled);
            let sets = |g: &SpatialGraph| {
                let c = connected_components(g);
                let mut s: Vec<Vec<usize>> = (0..c.sizes.len()).map(|l| c.members(l)).collect();
                s.sort();
                s
            };
            prop_assert_eq!(sets(&g1), sets(&g2));
        }
    }
}
