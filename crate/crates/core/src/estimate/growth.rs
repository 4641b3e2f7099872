use serde::Serialize;

use super::{ols, FitMethod, TailFit};
use crate::error::{Error, Result};
use crate::spread::EpidemicCurve;

/// Smallest default lower end of a growth-fit window, `10^2.17` infections.
pub const DEFAULT_WARMUP: f64 = 147.910_838_816_821_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMode {
    /// `log10 I` against `log10 t`.
    LogLog,
    /// `log10 I` against `t`.
    LogLinear,
}

impl GrowthMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "loglog" => Ok(GrowthMode::LogLog),
            "loglinear" => Ok(GrowthMode::LogLinear),
            _ => Err(Error::Parameter(format!("unknown fit mode `{s}` (loglog, loglinear)"))),
        }
    }
}

fn window_samples(curve: &EpidemicCurve, i_low: f64, i_high: f64) -> Result<Vec<(f64, f64)>> {
    if !(i_low > 0.0 && i_low < i_high) {
        return Err(Error::Parameter(format!("need 0 < I_low < I_high, got ({i_low}, {i_high})")));
    }
    if (curve.total as f64) < i_high {
        return Err(Error::Estimation(format!(
            "curve stops at {} infections, below the window end {i_high}",
            curve.total
        )));
    }
    Ok(curve
        .samples
        .iter()
        .filter(|&&(c, _)| c as f64 >= i_low && c as f64 <= i_high)
        .map(|&(c, t)| (c as f64, t))
        .collect())
}

/// Growth fit with the default warm-up.
pub fn fit_growth_exponent(curve: &EpidemicCurve, i_low: f64, i_high: f64, mode: GrowthMode) -> Result<TailFit> {
    fit_growth_exponent_with_warmup(curve, i_low, i_high, mode, DEFAULT_WARMUP)
}

/// Least-squares slope of `log10 I` over the curve samples with `I` in
/// `[i_low, i_high]`. The estimate is the slope and the prefactor the intercept.
pub fn fit_growth_exponent_with_warmup(
    curve: &EpidemicCurve,
    i_low: f64,
    i_high: f64,
    mode: GrowthMode,
    warmup: f64,
) -> Result<TailFit> {
    // tolerate the rounding of 10^2.17 typed as a decimal
    if i_low < warmup * (1.0 - 1e-9) {
        return Err(Error::Parameter(format!(
            "window starts at {i_low}, below the warm-up of {warmup} infections"
        )));
    }
    let pts = window_samples(curve, i_low, i_high)?;
    if pts.len() < 5 {
        return Err(Error::Estimation(format!("only {} curve samples in the window, need 5", pts.len())));
    }
    let x: Vec<f64> = match mode {
        GrowthMode::LogLog => {
            if pts.iter().any(|p| !(p.1 > 0.0)) {
                return Err(Error::Estimation("log-log fit needs positive times".into()));
            }
            pts.iter().map(|p| p.1.log10()).collect()
        }
        GrowthMode::LogLinear => pts.iter().map(|p| p.1).collect(),
    };
    let y: Vec<f64> = pts.iter().map(|p| p.0.log10()).collect();
    let (slope, intercept, sse, r2) = ols(&x, &y);
    if !slope.is_finite() {
        return Err(Error::Estimation("all window samples share one time".into()));
    }
    Ok(TailFit {
        estimate: slope,
        prefactor: intercept,
        window: (i_low, i_high),
        residual_sse: sse,
        r_squared: r2,
        points_used: pts.len(),
        method: match mode {
            GrowthMode::LogLog => FitMethod::LogLog,
            GrowthMode::LogLinear => FitMethod::LogLinear,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveShape {
    Concave,
    Linear,
    Convex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityResult {
    pub verdict: CurveShape,
    pub negative: usize,
    pub positive: usize,
    /// Two-sided binomial sign-test p-value.
    pub p_value: f64,
}

const SIGNIFICANCE: f64 = 0.01;

fn rolling_median(v: &[f64], width: usize) -> Vec<f64> {
    let h = width / 2;
    (0..v.len())
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h + 1).min(v.len());
            let mut w = v[lo..hi].to_vec();
            w.sort_by(f64::total_cmp);
            crate::spread::quantile_sorted(&w, 0.5)
        })
        .collect()
}

fn ln_choose(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

fn sign_test_p(neg: usize, pos: usize) -> f64 {
    let n = neg + pos;
    if n == 0 {
        return 1.0;
    }
    let k = neg.min(pos);
    let tail: f64 = (0..=k)
        .map(|j| (ln_choose(n, j) - n as f64 * std::f64::consts::LN_2).exp())
        .sum();
    (2.0 * tail).min(1.0)
}

/// Shape of `ln I` against `t` over the window `[i_low, i_high]`.
///
/// The local slopes between consecutive samples are smoothed with a width-5
/// rolling median; the signs of their successive differences enter a sign
/// test. Differences within rounding of zero are dropped.
pub fn concavity_check(curve: &EpidemicCurve, i_low: f64, i_high: f64) -> Result<ConcavityResult> {
    let pts = window_samples(curve, i_low, i_high)?;
    if pts.len() < 10 {
        return Err(Error::Estimation(format!("only {} curve samples in the window, need 10", pts.len())));
    }
    let slopes: Vec<f64> = pts
        .windows(2)
        .filter(|w| w[1].1 > w[0].1)
        .map(|w| (w[1].0.ln() - w[0].0.ln()) / (w[1].1 - w[0].1))
        .collect();
    let smooth = rolling_median(&slopes, 5);
    let scale = smooth.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let (mut neg, mut pos) = (0, 0);
    for w in smooth.windows(2) {
        let diff = w[1] - w[0];
        if diff.abs() <= 1e-9 * scale {
            continue;
        }
        if diff < 0.0 {
            neg += 1;
        } else {
            pos += 1;
        }
    }
    let p_value = sign_test_p(neg, pos);
    let verdict = if p_value >= SIGNIFICANCE {
        CurveShape::Linear
    } else if neg > pos {
        CurveShape::Concave
    } else {
        CurveShape::Convex
    };
    Ok(ConcavityResult {
        verdict,
        negative: neg,
        positive: pos,
        p_value,
    })
}
