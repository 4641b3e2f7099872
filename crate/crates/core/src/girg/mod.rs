//! Geometric inhomogeneous random graphs on the volume-`n` torus `[0, n^{1/d})^d`.
//!
//! Node count is Poisson(`n`), positions are uniform, weights are Pareto with
//! density `(tau-1) w^-tau` on `[1, inf)`, and each unordered pair is linked
//! independently with probability `c * min{(w_u w_v / dist^d)^alpha, 1}`.
//! `alpha = inf` selects the threshold kernel.

mod grid;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::graph::{Metric, SpatialGraph};

/// Refuse to sample more nodes than this unless a larger cap is passed explicitly.
pub const DEFAULT_NODE_CAP: usize = 50_000_000;

/// Largest expected size the O(n^2) reference sampler accepts.
pub const NAIVE_MAX_N: f64 = 10_000.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GirgParams {
    /// Expected node count (Poisson mean) and torus volume.
    pub n: f64,
    pub d: usize,
    pub tau: f64,
    /// `f64::INFINITY` means threshold mode.
    pub alpha: f64,
    pub c: f64,
    pub seed: u64,
}

impl GirgParams {
    pub fn new(n: f64, d: usize, tau: f64, alpha: f64, c: f64, seed: u64) -> Result<Self> {
        let p = Self {
            n,
            d,
            tau,
            alpha,
            c,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n.is_finite() && self.n > 0.0) {
            return Err(Error::Parameter(format!("n must be positive, got {}", self.n)));
        }
        if self.d == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if !(self.tau.is_finite() && self.tau > 2.0) {
            return Err(Error::Parameter(format!(
                "tau must exceed 2 (finite mean weight), got {}",
                self.tau
            )));
        }
        if !(self.alpha > 1.0) {
            return Err(Error::Parameter(format!(
                "alpha must exceed 1 or be inf, got {}",
                self.alpha
            )));
        }
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(Error::Parameter(format!("c must lie in (0, 1], got {}", self.c)));
        }
        Ok(())
    }

    /// Side length of the torus, `n^{1/d}`.
    pub fn side(&self) -> f64 {
        self.n.powf(1.0 / self.d as f64)
    }
}

/// Inverse-transform Pareto draw: `U^{-1/(tau-1)}` for `U` in `(0, 1]`.
pub fn pareto_from_uniform(u: f64, tau: f64) -> f64 {
    u.powf(-1.0 / (tau - 1.0))
}

pub fn sample_weights(count: usize, tau: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if !(tau.is_finite() && tau > 2.0) {
        return Err(Error::Parameter(format!(
            "tau must exceed 2 (finite mean weight), got {tau}"
        )));
    }
    Ok((0..count)
        .map(|_| pareto_from_uniform(1.0 - rng.random::<f64>(), tau))
        .collect())
}

/// Edge probability for weights `wu`, `wv` at distance `dist`.
#[inline]
pub fn connection_probability(wu: f64, wv: f64, dist: f64, d: usize, alpha: f64, c: f64) -> f64 {
    if dist <= 0.0 {
        return c;
    }
    let ratio = wu * wv / dist.powi(d as i32);
    if alpha.is_infinite() {
        if ratio >= 1.0 {
            c
        } else {
            0.0
        }
    } else if ratio >= 1.0 {
        c
    } else {
        c * ratio.powf(alpha)
    }
}

/// Nodes of one realisation: positions (flat, `N * d`) and weights.
pub(crate) struct NodeSample {
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
}

pub(crate) fn sample_nodes(p: &GirgParams, cap: usize) -> Result<NodeSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let poisson = Poisson::new(p.n)
        .map_err(|e| Error::Parameter(format!("Poisson({}) rejected: {e}", p.n)))?;
    let count = poisson.sample(&mut rng) as usize;
    if count > cap {
        return Err(Error::Parameter(format!(
            "sampled {count} nodes exceeds the cap of {cap}"
        )));
    }
    let side = p.side();
    let mut positions = Vec::with_capacity(count * p.d);
    for _ in 0..count * p.d {
        let x = rng.random::<f64>() * side;
        // guard against rounding up to `side`
        positions.push(if x < side { x } else { 0.0 });
    }
    let weights = sample_weights(count, p.tau, &mut rng)?;
    Ok(NodeSample { positions, weights })
}

/// Deterministic seed for an independent random stream identified by `tags`.
pub fn stream_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut h = splitmix64(seed ^ 0x5851_f42d_4c95_7f2d);
    for &t in tags {
        h = splitmix64(h ^ t.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Cell-accelerated sampler; output depends only on the parameters and seed.
pub fn sample_girg(p: &GirgParams) -> Result<SpatialGraph> {
    sample_girg_capped(p, DEFAULT_NODE_CAP)
}

pub fn sample_girg_capped(p: &GirgParams, cap: usize) -> Result<SpatialGraph> {
    p.validate()?;
    let nodes = sample_nodes(p, cap)?;
    let pairs = grid::sample_edges(p, &nodes);
    SpatialGraph::new(
        p.d,
        Metric::Torus { side: p.side() },
        nodes.positions,
        Some(nodes.weights),
        pairs.into_iter().map(|(u, v)| (u as usize, v as usize)),
    )
}

/// Reference O(n^2) sampler with the same node pipeline as [`sample_girg`].
pub fn sample_girg_naive(p: &GirgParams) -> Result<SpatialGraph> {
    p.validate()?;
    if p.n > NAIVE_MAX_N {
        return Err(Error::Parameter(format!(
            "naive sampler refuses n = {} > {NAIVE_MAX_N}",
            p.n
        )));
    }
    let nodes = sample_nodes(p, DEFAULT_NODE_CAP)?;
    let side = p.side();
    let count = nodes.weights.len();
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(p.seed, &[u64::MAX]));
    let mut pairs = Vec::new();
    for u in 0..count {
        let pu = &nodes.positions[u * p.d..(u + 1) * p.d];
        for v in u + 1..count {
            let pv = &nodes.positions[v * p.d..(v + 1) * p.d];
            let dist = crate::graph::torus_distance_unchecked(pu, pv, side);
            let prob =
                connection_probability(nodes.weights[u], nodes.weights[v], dist, p.d, p.alpha, p.c);
            if rng.random::<f64>() < prob {
                pairs.push((u, v));
            }
        }
    }
    SpatialGraph::new(
        p.d,
        Metric::Torus { side },
        nodes.positions,
        Some(nodes.weights),
        pairs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pareto_inverse_transform() {
        assert_eq!(pareto_from_uniform(1.0, 2.7), 1.0);
        assert!((pareto_from_uniform(0.25, 3.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tau_at_most_two_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            sample_weights(10, 2.0, &mut rng),
            Err(Error::Parameter(_))
        ));
        assert!(GirgParams::new(100.0, 2, 1.9, 1.5, 1.0, 0).is_err());
        assert!(GirgParams::new(100.0, 2, 2.5, 1.0, 1.0, 0).is_err());
        assert!(GirgParams::new(100.0, 2, 2.5, 1.5, 0.0, 0).is_err());
        assert!(GirgParams::new(100.0, 2, 2.5, f64::INFINITY, 1.0, 0).is_ok());
    }

    #[test]
    fn pareto_mean_matches_analytic() {
        let tau: f64 = 2.78;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000;
        let w = sample_weights(n, tau, &mut rng).unwrap();
        let mean = w.iter().sum::<f64>() / n as f64;
        let truth = (tau - 1.0) / (tau - 2.0);
        // infinite variance: use the median-of-means spread of ten blocks as the sigma estimate
        let blocks: Vec<f64> = w
            .chunks(n / 10)
            .map(|b| b.iter().sum::<f64>() / b.len() as f64)
            .collect();
        let var = blocks.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / 9.0;
        let sigma = (var / 10.0).sqrt();
        assert!(
            (mean - truth).abs() < 3.0 * sigma.max(0.01),
            "mean {mean} truth {truth} sigma {sigma}"
        );
    }

    #[test]
    fn connection_probability_examples() {
        assert_eq!(connection_probability(5.0, 5.0, 3.0, 2, 1.2, 0.7), 0.7);
        let p = connection_probability(1.0, 1.0, 10.0, 2, 1.2, 1.0);
        assert!((p - 10f64.powf(-2.4)).abs() < 1e-15);
        assert!((p - 3.981e-3).abs() < 1e-6);
        let eps = 1e-9;
        assert_eq!(
            connection_probability(10.0 - eps, 10.0, 10.0, 2, f64::INFINITY, 1.0),
            0.0
        );
        assert_eq!(connection_probability(10.0, 10.0, 10.0, 2, f64::INFINITY, 0.5), 0.5);
        assert_eq!(connection_probability(1.0, 1.0, 0.0, 2, 1.2, 0.3), 0.3);
    }

    #[test]
    fn empty_draw_gives_empty_graph() {
        // Poisson(1e-3) is zero with probability ~0.999
        let p = GirgParams::new(1e-3, 2, 2.5, 1.5, 1.0, 3).unwrap();
        let g = sample_girg(&p).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn sampler_is_deterministic() {
        let p = GirgParams::new(3000.0, 2, 2.6, 1.4, 1.0, 11).unwrap();
        let a = sample_girg(&p).unwrap();
        let b = sample_girg(&p).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.positions(), b.positions());
    }

    #[test]
    fn naive_refuses_large_n() {
        let p = GirgParams::new(20_000.0, 2, 2.6, 1.4, 1.0, 11).unwrap();
        assert!(sample_girg_naive(&p).is_err());
    }

    #[test]
    fn vanishing_density_is_nearly_empty() {
        let p = GirgParams::new(500.0, 2, 2.6, 1.4, 1e-9, 5).unwrap();
        assert!(sample_girg(&p).unwrap().m() <= 2);
        assert!(sample_girg_naive(&p).unwrap().m() <= 2);
    }

    #[test]
    fn node_pipeline_shared_between_samplers() {
        let p = GirgParams::new(400.0, 2, 2.6, 1.4, 1.0, 9).unwrap();
        let a = sample_girg(&p).unwrap();
        let b = sample_girg_naive(&p).unwrap();
        assert_eq!(a.positions(), b.positions());
        assert_eq!(a.weights(), b.weights());
    }

    /// Two-sample Kolmogorov-Smirnov statistic and its asymptotic p-value.
    fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut dmax) = (0, 0, 0.0f64);
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            dmax = dmax.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
        let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * dmax;
        let mut p = 0.0;
        for k in 1..100 {
            let k = k as f64;
            p += 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        }
        p.clamp(0.0, 1.0)
    }

    #[test]
    fn grid_and_naive_edge_counts_agree() {
        let (mut grid, mut naive) = (Vec::new(), Vec::new());
        for seed in 0..200 {
            let p = GirgParams::new(500.0, 2, 2.78, 1.2, 1.0, seed).unwrap();
            grid.push(sample_girg(&p).unwrap().m() as f64);
            naive.push(sample_girg_naive(&p).unwrap().m() as f64);
        }
        let pval = ks_two_sample(&mut grid, &mut naive);
        assert!(pval > 0.01, "KS p-value {pval}");
    }

    #[test]
    fn near_lattice_mean_degree_matches_naive() {
        let runs = 20;
        let mean_degree = |g: &SpatialGraph| 2.0 * g.m() as f64 / g.n().max(1) as f64;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for seed in 0..runs {
            let p = GirgParams::new(2000.0, 2, 3.7, 6.0, 1.0, 100 + seed).unwrap();
            a.push(mean_degree(&sample_girg(&p).unwrap()));
            b.push(mean_degree(&sample_girg_naive(&p).unwrap()));
        }
        let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let var = b.iter().map(|x| (x - mb).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let se = (2.0 * var / runs as f64).sqrt();
        assert!((ma - mb).abs() < 3.0 * se, "grid {ma} naive {mb} se {se}");
    }

    proptest! {
        #[test]
        fn probability_bounded_symmetric_monotone(
            wu in 1.0f64..50.0, wv in 1.0f64..50.0, dist in 0.01f64..100.0,
            bump in 0.0f64..10.0, alpha in 1.01f64..5.0, c in 0.01f64..1.0, d in 1usize..4,
        ) {
            let p = connection_probability(wu, wv, dist, d, alpha, c);
            prop_assert!((0.0..=c).contains(&p));
            prop_assert_eq!(p, connection_probability(wv, wu, dist, d, alpha, c));
            prop_assert!(connection_probability(wu, wv, dist + bump, d, alpha, c) <= p);
            prop_assert!(connection_probability(wu + bump, wv, dist, d, alpha, c) >= p);
        }
    }
}
