use super::{FitMethod, TailFit};
use crate::error::{Error, Result};
use crate::graph::SpatialGraph;

/// Fewest edges a graph window must hold for [`empirical_truncated_tail`].
pub const MIN_WINDOW_EDGES: usize = 100;

/// `points` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let r = (hi / lo).ln();
    (0..points)
        .map(|k| match k {
            0 => lo,
            k if k == points - 1 => hi,
            k => lo * (r * k as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

/// Fraction of window lengths in `[L, l_plus]` among those in `[l_minus, l_plus]`,
/// evaluated at each `L` of `at`.
pub fn truncated_tail_at(lengths: &[f64], l_minus: f64, l_plus: f64, at: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(l_minus > 0.0 && l_minus < l_plus) {
        return Err(Error::Parameter(format!("need 0 < L- < L+, got ({l_minus}, {l_plus})")));
    }
    let mut inside: Vec<f64> = lengths
        .iter()
        .copied()
        .filter(|&l| l >= l_minus && l <= l_plus)
        .collect();
    if inside.is_empty() {
        return Err(Error::Estimation(format!("no edge length lies in [{l_minus}, {l_plus}]")));
    }
    inside.sort_by(f64::total_cmp);
    let total = inside.len() as f64;
    Ok(at
        .iter()
        .map(|&l| {
            let below = inside.partition_point(|&x| x < l);
            (l, (inside.len() - below) as f64 / total)
        })
        .collect())
}

/// Truncated edge-length tail on `points` log-spaced lengths from `l_minus`
/// to `l_plus`. The last point is reported as exactly zero.
pub fn empirical_truncated_tail(
    g: &SpatialGraph,
    l_minus: f64,
    l_plus: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    let lengths: Vec<f64> = g.edges().iter().map(|e| e.len).collect();
    let count = lengths.iter().filter(|&&l| l >= l_minus && l <= l_plus).count();
    if count < MIN_WINDOW_EDGES {
        return Err(Error::Estimation(format!(
            "only {count} edges in [{l_minus}, {l_plus}], need {MIN_WINDOW_EDGES}"
        )));
    }
    let mut tail = truncated_tail_at(&lengths, l_minus, l_plus, &log_grid(l_minus, l_plus, points.max(2)))?;
    if let Some(last) = tail.last_mut() {
        last.1 = 0.0;
    }
    Ok(tail)
}

/// `b (L^{-d(a-1)} - l_plus^{-d(a-1)})`.
pub fn truncated_tail_model(l: f64, a: f64, b: f64, l_plus: f64, d: usize) -> f64 {
    let k = d as f64 * (a - 1.0);
    b * (l.powf(-k) - l_plus.powf(-k))
}

const A_MIN: f64 = 1.0005;
const A_MAX: f64 = 8.0;
const A_STEP: f64 = 0.005;

/// Least squares in log space of the truncated power-law model; returns `(sse, log b)`.
fn profile(a: f64, pts: &[(f64, f64)], l_plus: f64, d: usize) -> (f64, f64) {
    let shape: Vec<f64> = pts
        .iter()
        .map(|&(l, _)| truncated_tail_model(l, a, 1.0, l_plus, d).ln())
        .collect();
    let log_b = pts
        .iter()
        .zip(&shape)
        .map(|(&(_, f), s)| f.ln() - s)
        .sum::<f64>()
        / pts.len() as f64;
    let sse = pts
        .iter()
        .zip(&shape)
        .map(|(&(_, f), s)| (f.ln() - s - log_b).powi(2))
        .sum();
    (sse, log_b)
}

/// Fit `a` and `b` of the truncated power law to an empirical tail.
///
/// For fixed `a` the optimal `log b` is the mean log residual, so the search
/// is one-dimensional: a grid over `a` followed by golden-section refinement
/// in the bracket around the best grid point.
pub fn fit_alpha(tail: &[(f64, f64)], l_plus: f64, d: usize) -> Result<TailFit> {
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .copied()
        .filter(|&(l, f)| f > 0.0 && f < 1.0 && l < l_plus)
        .collect();
    if pts.len() < 10 {
        return Err(Error::Estimation(format!(
            "need at least 10 tail points strictly inside (0, 1), got {}",
            pts.len()
        )));
    }
    let steps = ((A_MAX - A_MIN) / A_STEP).round() as usize;
    let grid: Vec<(f64, f64)> = (0..=steps)
        .map(|k| {
            let a = A_MIN + k as f64 * A_STEP;
            (a, profile(a, &pts, l_plus, d).0)
        })
        .collect();
    let best = (0..grid.len()).min_by(|&i, &j| grid[i].1.total_cmp(&grid[j].1)).unwrap();
    if best == 0 || best == grid.len() - 1 {
        let trace: Vec<String> = grid
            .iter()
            .step_by(steps / 20)
            .map(|(a, s)| format!("a={a:.3} sse={s:.3e}"))
            .collect();
        return Err(Error::Estimation(format!(
            "no interior minimum for a in [{A_MIN}, {A_MAX}]; residuals: {}",
            trace.join(", ")
        )));
    }

    let (mut lo, mut hi) = (grid[best - 1].0, grid[best + 1].0);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let f = |a: f64| profile(a, &pts, l_plus, d).0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    let a = 0.5 * (lo + hi);
    let (sse, log_b) = profile(a, &pts, l_plus, d);
    let mean = pts.iter().map(|p| p.1.ln()).sum::<f64>() / pts.len() as f64;
    let sst: f64 = pts.iter().map(|p| (p.1.ln() - mean).powi(2)).sum();
    Ok(TailFit {
        estimate: a,
        prefactor: log_b.exp(),
        window: (pts[0].0, l_plus),
        residual_sse: sse,
        r_squared: if sst > 0.0 { 1.0 - sse / sst } else { 1.0 },
        points_used: pts.len(),
        method: FitMethod::TruncatedTail,
    })
}
