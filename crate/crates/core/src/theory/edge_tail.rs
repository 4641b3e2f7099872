//! Large-`n` edge-length counts of a GIRG.
//!
//! Counts are per node and per endpoint: every edge is seen from both ends, so
//! an undirected edge count `m` corresponds to `2 m / n`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Surface area of the unit sphere in `R^d`.
pub fn surface_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI / (d as f64 - 2.0) * surface_area(d - 2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailModel {
    pub d: usize,
    pub tau: f64,
    pub alpha: f64,
    pub c: f64,
    /// Below this `L1` the asymptotic forms are flagged as unreliable.
    pub l1_floor: f64,
}

impl TailModel {
    pub fn new(d: usize, tau: f64, alpha: f64, c: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if tau == 2.0 || alpha == 1.0 {
            return Err(Error::Parameter(format!(
                "edge-length constants are singular at tau = 2 or alpha = 1 (tau = {tau}, alpha = {alpha})"
            )));
        }
        if !(tau > 2.0 && tau.is_finite() && alpha > 1.0 && c > 0.0 && c <= 1.0) {
            return Err(Error::Parameter(format!(
                "need tau > 2, alpha > 1, 0 < c <= 1 (tau = {tau}, alpha = {alpha}, c = {c})"
            )));
        }
        Ok(Self {
            d,
            tau,
            alpha,
            c,
            l1_floor: 10.0,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TailRegime {
    AlphaLess,
    AlphaEqual,
    AlphaGreater,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeTailPrediction {
    pub regime: TailRegime,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Prefactor of the weight-capped count, when a cap was given.
    pub c4: Option<f64>,
    /// Predicted count per node in `[l1, l2]`.
    pub predicted: f64,
    pub l1: f64,
    pub l2: f64,
    pub l1_below_floor: bool,
}

fn regime(m: &TailModel) -> TailRegime {
    let t1 = m.tau - 1.0;
    if (m.alpha - t1).abs() <= 1e-12 * t1 {
        TailRegime::AlphaEqual
    } else if m.alpha < t1 {
        TailRegime::AlphaLess
    } else {
        TailRegime::AlphaGreater
    }
}

fn prefactors(m: &TailModel) -> (f64, f64, f64) {
    let (d, t1, a) = (m.d as f64, m.tau - 1.0, m.alpha);
    let s = m.c * surface_area(m.d);
    let c1 = s * t1 * t1 / ((t1 - a).powi(2) * d * (a - 1.0));
    let c2 = s * t1 * t1 / (2.0 * d * (a - 1.0));
    let c3 = s * (t1 + t1 * t1 / (a + 1.0 - m.tau)) / (d * (m.tau - 2.0));
    (c1, c2, c3)
}

/// Prefactor of the count restricted to pairs with weight product at most `cap`.
pub fn capped_prefactor(m: &TailModel, cap: f64) -> f64 {
    let (d, t1) = (m.d as f64, m.tau - 1.0);
    let k = m.alpha + 1.0 - m.tau;
    let tilde = if regime(m) == TailRegime::AlphaEqual {
        t1 * t1 * cap.ln().powi(2) / 2.0
    } else {
        t1 * t1 / (k * k) + cap.powf(k) * t1 * t1 * (cap.ln() - 1.0 / k) / k
    };
    m.c * surface_area(m.d) * tilde / (d * (m.alpha - 1.0))
}

pub fn edge_tail_theory(m: &TailModel, l1: f64, l2: f64, cap: Option<f64>) -> Result<EdgeTailPrediction> {
    if !(l1 > 0.0 && l1 <= l2) {
        return Err(Error::Validation(format!("need 0 < L1 <= L2, got [{l1}, {l2}]")));
    }
    let d = m.d as f64;
    let (c1, c2, c3) = prefactors(m);
    let reg = regime(m);
    let pow_tail = |l: f64| l.powf(-d * (m.alpha - 1.0));
    let (predicted, c4) = match cap {
        Some(cap) => {
            if !(cap >= 1.0 && l1.powf(d) > cap) {
                return Err(Error::Validation(format!(
                    "weight cap {cap} needs L1^d > cap (L1 = {l1})"
                )));
            }
            let c4 = capped_prefactor(m, cap);
            (c4 * (pow_tail(l1) - pow_tail(l2)), Some(c4))
        }
        None => {
            let f = |l: f64| -> f64 {
                let ld = l.powf(d).ln();
                match reg {
                    TailRegime::AlphaLess => c1 * pow_tail(l),
                    TailRegime::AlphaEqual => c2 * pow_tail(l) * ld * ld,
                    TailRegime::AlphaGreater => c3 * l.powf(-d * (m.tau - 2.0)) * ld,
                }
            };
            (f(l1) - f(l2), None)
        }
    };
    Ok(EdgeTailPrediction {
        regime: reg,
        c1,
        c2,
        c3,
        c4,
        predicted,
        l1,
        l2,
        l1_below_floor: l1 < m.l1_floor,
    })
}

/// Connection probability at distance `r` averaged over two independent weights.
pub fn mean_kernel(m: &TailModel, r: f64) -> f64 {
    let big = r.powf(m.d as f64);
    if big <= 1.0 {
        return 1.0;
    }
    let (t1, lr) = (m.tau - 1.0, big.ln());
    // P(W W' > R) for the product of two Pareto weights
    let far = (lr * t1 + 1.0) * big.powf(-t1);
    if m.alpha.is_infinite() {
        return far;
    }
    let k = m.alpha + 1.0 - m.tau;
    let near = if regime(m) == TailRegime::AlphaEqual {
        t1 * t1 * lr * lr / 2.0
    } else {
        t1 * t1 * ((lr / k - 1.0 / (k * k)) * big.powf(k) + 1.0 / (k * k))
    };
    big.powf(-m.alpha) * near + far
}

/// Infinite-volume expectation of the per-node count in `[l1, l2]`, by
/// Simpson quadrature of `c Surf(d) r^{d-1} mean_kernel(r)` in `ln r`.
pub fn edge_tail_integral(m: &TailModel, l1: f64, l2: f64) -> Result<f64> {
    if !(l1 > 0.0 && l1 <= l2) {
        return Err(Error::Validation(format!("need 0 < L1 <= L2, got [{l1}, {l2}]")));
    }
    let (a, b) = (l1.ln(), l2.ln());
    let steps = 4000;
    let h = (b - a) / steps as f64;
    let g = |u: f64| {
        let r = u.exp();
        r.powf(m.d as f64) * mean_kernel(m, r)
    };
    let mut acc = g(a) + g(b);
    for k in 1..steps {
        acc += g(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    Ok(m.c * surface_area(m.d) * acc * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_surfaces() {
        assert_eq!(surface_area(1), 2.0);
        assert!((surface_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        let unit_ball_4 = std::f64::consts::PI.powi(2) / 2.0;
        assert!((surface_area(4) - 4.0 * unit_ball_4).abs() < 1e-12);
    }

    #[test]
    fn c1_example() {
        let m = TailModel::new(2, 3.7, 1.2, 1.0).unwrap();
        let p = edge_tail_theory(&m, 20.0, 100.0, None).unwrap();
        assert_eq!(p.regime, TailRegime::AlphaLess);
        assert!((p.c1 - 2.0 * std::f64::consts::PI * 8.1).abs() < 1e-9);
        assert!((p.c1 - 50.894).abs() < 1e-3);
    }

    #[test]
    fn empty_window_and_singular_parameters() {
        let m = TailModel::new(2, 2.78, 1.2, 1.0).unwrap();
        assert_eq!(edge_tail_theory(&m, 30.0, 30.0, None).unwrap().predicted, 0.0);
        assert!(TailModel::new(2, 2.0, 1.2, 1.0).is_err());
        assert!(TailModel::new(2, 2.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn prediction_decreases_in_l1() {
        for (tau, alpha) in [(2.78, 1.2), (2.5, 1.5), (2.3, 2.5)] {
            let m = TailModel::new(2, tau, alpha, 1.0).unwrap();
            let mut last = f64::INFINITY;
            for l1 in [20.0, 30.0, 50.0, 80.0] {
                let p = edge_tail_theory(&m, l1, 100.0, None).unwrap().predicted;
                assert!(p >= 0.0 && p < last, "{tau} {alpha} {l1}");
                last = p;
            }
        }
    }

    #[test]
    fn capped_count_is_a_pure_power_law() {
        let m = TailModel::new(2, 2.78, 1.2, 1.0).unwrap();
        let big = f64::INFINITY;
        let at = |l: f64| edge_tail_theory(&m, l, big, Some(50.0)).unwrap().predicted;
        let ratio = (at(20.0) / at(40.0)).ln();
        assert!((ratio - 2.0 * 0.2 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_form_tracks_quadrature_for_large_windows() {
        // the two agree up to the neglected lower-order terms
        let m = TailModel::new(2, 2.78, 1.2, 1.0).unwrap();
        let exact = edge_tail_integral(&m, 20.0, 100.0).unwrap();
        let asym = edge_tail_theory(&m, 20.0, 100.0, None).unwrap().predicted;
        assert!((asym / exact - 1.0).abs() < 0.1, "{asym} vs {exact}");
    }

    #[test]
    fn mean_kernel_matches_monte_carlo() {
        use rand::{Rng, SeedableRng};
        let m = TailModel::new(2, 2.6, 1.4, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let r: f64 = 4.0;
        let samples = 400_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let w1 = (1.0 - rng.random::<f64>()).powf(-1.0 / 1.6);
            let w2 = (1.0 - rng.random::<f64>()).powf(-1.0 / 1.6);
            acc += (w1 * w2 / r.powi(2)).min(1.0).powf(1.4);
        }
        let mc = acc / samples as f64;
        assert!((mc / mean_kernel(&m, r) - 1.0).abs() < 0.01, "{mc} vs {}", mean_kernel(&m, r));
    }
}
