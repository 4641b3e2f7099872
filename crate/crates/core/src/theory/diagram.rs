use serde::Serialize;

use super::phase::{classify, ModelPoint, PhaseReport};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    Mu,
    Zeta,
    Tau,
    Alpha,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mu" => Ok(Axis::Mu),
            "zeta" => Ok(Axis::Zeta),
            "tau" => Ok(Axis::Tau),
            "alpha" => Ok(Axis::Alpha),
            _ => Err(Error::Parameter(format!("unknown axis `{s}` (mu, zeta, tau, alpha)"))),
        }
    }

    fn set(&self, m: &mut ModelPoint, v: f64) {
        match self {
            Axis::Mu => m.mu = v,
            Axis::Zeta => m.zeta = v,
            Axis::Tau => m.tau = v,
            Axis::Alpha => m.alpha = v,
        }
    }
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxisRange {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisRange {
    /// Parse `name:lo:hi:points`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Parameter(format!("axis `{s}` is not name:lo:hi:points")));
        }
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Parameter(format!("bad number `{t}` in axis `{s}`")))
        };
        let points = parts[3]
            .parse::<usize>()
            .map_err(|_| Error::Parameter(format!("bad point count in axis `{s}`")))?;
        Ok(Self {
            axis: Axis::parse(parts[0])?,
            lo: num(parts[1])?,
            hi: num(parts[2])?,
            points,
        })
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.points <= 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.points - 1) as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramCell {
    pub x: f64,
    pub y: f64,
    pub report: PhaseReport,
}

/// Classify every grid point; `base` supplies the fixed coordinates.
pub fn phase_diagram_grid(base: &ModelPoint, x: &AxisRange, y: &AxisRange, tol: f64) -> Result<Vec<DiagramCell>> {
    if x.axis == y.axis {
        return Err(Error::Parameter("the two axes must differ".into()));
    }
    if x.points == 0 || y.points == 0 || !(x.hi >= x.lo) || !(y.hi >= y.lo) {
        return Err(Error::Parameter("axis ranges must be nonempty and ordered".into()));
    }
    let mut out = Vec::with_capacity(x.points * y.points);
    for j in 0..y.points {
        for i in 0..x.points {
            let mut m = *base;
            x.axis.set(&mut m, x.value(i));
            y.axis.set(&mut m, y.value(j));
            // validates the moved coordinates
            let m = ModelPoint::new(m.d, m.tau, m.alpha, m.mu, m.zeta)?;
            out.push(DiagramCell {
                x: x.value(i),
                y: y.value(j),
                report: classify(&m, tol),
            });
        }
    }
    Ok(out)
}
