//! Estimators for the degree exponent, the edge-length exponent and the
//! growth exponent of epidemic curves.

mod growth;
mod hill;
mod length;

use serde::Serialize;

pub use growth::{
    concavity_check, fit_growth_exponent, fit_growth_exponent_with_warmup, ConcavityResult, CurveShape,
    GrowthMode, DEFAULT_WARMUP,
};
pub use hill::{hill_estimator, select_kappa, HillResult};
pub use length::{
    empirical_truncated_tail, fit_alpha, log_grid, truncated_tail_at, truncated_tail_model, MIN_WINDOW_EDGES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    TruncatedTail,
    LogLog,
    LogLinear,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailFit {
    /// Fitted exponent: `a` for edge lengths, the slope for growth curves.
    pub estimate: f64,
    /// `b` for edge lengths, the intercept for growth curves.
    pub prefactor: f64,
    pub window: (f64, f64),
    pub residual_sse: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub method: FitMethod,
}

/// Ordinary least squares `y = a + b x`; returns `(b, a, sse, r2)`.
pub(crate) fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    (slope, intercept, sse, r2)
}
