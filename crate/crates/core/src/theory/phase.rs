use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters that decide the growth class of penalized spreading on a GIRG.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelPoint {
    pub d: usize,
    pub tau: f64,
    /// `f64::INFINITY` for the threshold kernel.
    pub alpha: f64,
    pub mu: f64,
    pub zeta: f64,
}

impl ModelPoint {
    pub fn new(d: usize, tau: f64, alpha: f64, mu: f64, zeta: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if !(tau.is_finite() && tau > 2.0) {
            return Err(Error::Parameter(format!("tau must exceed 2, got {tau}")));
        }
        if !(alpha > 1.0) {
            return Err(Error::Parameter(format!("alpha must exceed 1 or be inf, got {alpha}")));
        }
        for (name, v) in [("mu", mu), ("zeta", zeta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self {
            d,
            tau,
            alpha,
            mu,
            zeta,
        })
    }

    /// Separate sender and receiver exponents; only `nu == mu` has a theory.
    pub fn with_nu(d: usize, tau: f64, alpha: f64, mu: f64, nu: f64, zeta: f64) -> Result<Self> {
        if nu != mu {
            return Err(Error::Unsupported(format!(
                "growth classes are only known for nu = mu (got mu = {mu}, nu = {nu})"
            )));
        }
        Self::new(d, tau, alpha, mu, zeta)
    }

    fn df(&self) -> f64 {
        self.d as f64
    }

    /// `mu + zeta/d`
    fn penalty(&self) -> f64 {
        self.mu + self.zeta / self.df()
    }

    pub fn eta1(&self) -> f64 {
        self.zeta - self.df() * (2.0 - self.alpha)
    }

    pub fn eta2(&self) -> f64 {
        self.zeta + self.mu * self.df() * (self.alpha - 2.0) / (self.alpha - self.tau + 1.0)
    }

    pub fn eta3(&self) -> f64 {
        self.zeta + self.mu * self.df() - self.df() * (3.0 - self.tau)
    }

    pub fn phi1(&self) -> f64 {
        1.0 - (self.alpha + self.zeta / self.df()).log2()
    }

    pub fn phi2(&self) -> f64 {
        1.0 - (self.tau - 1.0 + self.penalty()).log2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Explosive,
    QuasiExponential,
    Polynomial,
    Geometric,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::Explosive => "explosive",
            Phase::QuasiExponential => "quasi-exponential",
            Phase::Polynomial => "polynomial",
            Phase::Geometric => "geometric",
        }
    }
}

/// Sub-regions of the phase diagram: A explosive; B, C quasi-exponential via weak
/// ties and hubs; D, E, F polynomial via weak ties, hybrid and hubs; G geometric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Region {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Region {
    pub fn phase(&self) -> Phase {
        match self {
            Region::A => Phase::Explosive,
            Region::B | Region::C => Phase::QuasiExponential,
            Region::D | Region::E | Region::F => Phase::Polynomial,
            Region::G => Phase::Geometric,
        }
    }

    pub fn letter(&self) -> char {
        b"ABCDEFG"[*self as usize] as char
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseReport {
    pub phase: Phase,
    pub region: Region,
    /// Stretch exponent of quasi-exponential growth.
    pub phi: Option<f64>,
    /// `1 / phi`, the polylogarithmic cost exponent.
    pub delta: Option<f64>,
    /// Polynomial growth exponent (1 for geometric growth).
    pub psi: Option<f64>,
    pub eta_star: Option<f64>,
    pub s_star: Option<f64>,
    /// Some defining inequality held with equality (within the tolerance).
    pub boundary: bool,
    /// `delta` is only an upper bound (hub-driven quasi-exponential growth).
    pub upper_bound_only: bool,
}

impl PhaseReport {
    /// Exponent shown on phase diagrams: `phi` for quasi-exponential, `psi` for
    /// polynomial and geometric growth, none for explosive growth.
    pub fn exponent(&self) -> Option<f64> {
        match self.phase {
            Phase::Explosive => None,
            Phase::QuasiExponential => self.phi,
            _ => self.psi,
        }
    }
}

/// Strict comparisons that treat near-equality as false and remember it.
struct Cmp {
    tol: f64,
    boundary: bool,
}

impl Cmp {
    fn lt(&mut self, a: f64, b: f64) -> bool {
        if a.is_finite() && b.is_finite() && (a - b).abs() <= self.tol {
            self.boundary = true;
            return false;
        }
        a < b
    }

    fn gt(&mut self, a: f64, b: f64) -> bool {
        self.lt(b, a)
    }
}

/// Assign the growth class. Comparisons within `tol` of equality set the
/// boundary flag and resolve towards the slower class.
pub fn classify(m: &ModelPoint, tol: f64) -> PhaseReport {
    let mut cmp = Cmp {
        tol,
        boundary: false,
    };
    let d = m.df();
    let pen = m.penalty();
    let explosive = cmp.lt(pen, (3.0 - m.tau) / 2.0);
    let weak_quasi = m.alpha.is_finite() && cmp.lt(m.zeta / d, 2.0 - m.alpha);
    let hub_quasi = cmp.lt(pen, 3.0 - m.tau);
    let poly = polynomial_candidates(m, &mut cmp);
    let (eta_star, s_star) = match compute_s_star(m) {
        Ok(s) => (Some(eta_star(m)), Some(s)),
        Err(_) => (None, None),
    };
    let mut report = PhaseReport {
        phase: Phase::Geometric,
        region: Region::G,
        phi: None,
        delta: None,
        psi: None,
        eta_star,
        s_star,
        boundary: false,
        upper_bound_only: false,
    };

    if explosive {
        report.phase = Phase::Explosive;
        report.region = Region::A;
    } else if weak_quasi || hub_quasi {
        let phi1 = if weak_quasi { m.phi1() } else { f64::NEG_INFINITY };
        let phi2 = if hub_quasi { m.phi2() } else { f64::NEG_INFINITY };
        if weak_quasi && hub_quasi && (phi1 - phi2).abs() <= tol {
            cmp.boundary = true;
        }
        let (phi, region) = if phi1 >= phi2 { (phi1, Region::B) } else { (phi2, Region::C) };
        report.phase = Phase::QuasiExponential;
        report.region = region;
        report.phi = Some(phi);
        report.delta = Some(1.0 / phi);
        report.upper_bound_only = region == Region::C;
    } else if let Some((eta, region)) = smallest(&poly, tol, &mut cmp) {
        report.phase = Phase::Polynomial;
        report.region = region;
        report.psi = Some(1.0 / eta);
    } else {
        report.psi = Some(1.0);
    }
    report.boundary = cmp.boundary;
    report
}

/// Polynomial exponents whose strict existence conditions hold, in D, E, F order.
fn polynomial_candidates(m: &ModelPoint, cmp: &mut Cmp) -> Vec<(f64, Region)> {
    let d = m.df();
    let pen = m.penalty();
    let mut out = Vec::new();
    let below_two = cmp.lt(m.alpha, 2.0);
    let above_two = cmp.gt(m.alpha, 2.0);
    let tau_below_three = cmp.lt(m.tau, 3.0);
    if below_two && cmp.lt(m.zeta / d, 2.0 - m.alpha + 1.0 / d) {
        out.push((m.eta1(), Region::D));
    }
    if above_two
        && m.alpha.is_finite()
        && tau_below_three
        && cmp.lt(m.mu, (1.0 - m.zeta) * (1.0 / d + (3.0 - m.tau) / (d * (m.alpha - 2.0))))
    {
        out.push((m.eta2(), Region::E));
    }
    if tau_below_three && cmp.lt(pen, 3.0 - m.tau + 1.0 / d) {
        out.push((m.eta3(), Region::F));
    }
    out
}

fn smallest(cands: &[(f64, Region)], tol: f64, cmp: &mut Cmp) -> Option<(f64, Region)> {
    let mut best: Option<(f64, Region)> = None;
    for &(eta, region) in cands {
        match best {
            Some((b, _)) if (eta - b).abs() <= tol => cmp.boundary = true,
            Some((b, _)) if eta > b => {}
            _ => best = Some((eta, region)),
        }
    }
    best
}

/// Stretch exponent on the quasi-exponential conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiResult {
    pub phi: f64,
    pub region: Region,
    pub delta: f64,
}

/// `phi = max(phi1, phi2)` over the branches whose quasi-exponential condition
/// holds. Explosive points satisfy the hub condition and also get a value.
pub fn compute_phi(m: &ModelPoint) -> Result<PhiResult> {
    let d = m.df();
    let weak = m.alpha.is_finite() && m.zeta / d < 2.0 - m.alpha;
    let hub = m.penalty() < 3.0 - m.tau;
    let phi1 = if weak { m.phi1() } else { f64::NEG_INFINITY };
    let phi2 = if hub { m.phi2() } else { f64::NEG_INFINITY };
    if !(weak || hub) {
        return Err(Error::State(
            "neither quasi-exponential condition holds (zeta/d < 2-alpha or mu+zeta/d < 3-tau)".into(),
        ));
    }
    let (phi, region) = if phi1 >= phi2 { (phi1, Region::B) } else { (phi2, Region::C) };
    Ok(PhiResult {
        phi,
        region,
        delta: 1.0 / phi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsiResult {
    pub psi: f64,
    /// D, E or F, or G when no polynomial candidate applies.
    pub region: Region,
    pub eta_star: f64,
}

/// Growth exponent `psi = 1/eta` outside the explosive and quasi-exponential
/// conditions, with exact strict comparisons.
pub fn compute_psi(m: &ModelPoint) -> Result<PsiResult> {
    let report = classify(m, 0.0);
    match report.phase {
        Phase::Polynomial | Phase::Geometric => Ok(PsiResult {
            psi: report.psi.unwrap_or(1.0),
            region: report.region,
            eta_star: report.eta_star.unwrap_or(1.0),
        }),
        _ => Err(Error::State(format!(
            "growth is {} here, psi is undefined",
            report.phase.name()
        ))),
    }
}

fn slow_domain(m: &ModelPoint) -> Result<()> {
    let d = m.df();
    if !(m.zeta / d > 2.0 - m.alpha && m.penalty() > 3.0 - m.tau) {
        return Err(Error::State(
            "optimal exponents need zeta/d > 2-alpha and mu+zeta/d > 3-tau".into(),
        ));
    }
    Ok(())
}

/// Optimal upper-bound exponent: the smallest of `eta1..eta3` whose construction
/// exists and gives at most linear cost, and 1 otherwise.
pub fn eta_star(m: &ModelPoint) -> f64 {
    let mut best = 1.0f64;
    if m.alpha < 2.0 {
        best = best.min(m.eta1());
    }
    if m.alpha > 2.0 && m.alpha.is_finite() && m.tau < 3.0 {
        best = best.min(m.eta2());
    }
    if m.tau < 3.0 {
        best = best.min(m.eta3());
    }
    best
}

/// Optimal lower-bound exponent, `inf` when no candidate exists.
pub fn compute_s_star(m: &ModelPoint) -> Result<f64> {
    slow_domain(m)?;
    let mut best = f64::INFINITY;
    if m.alpha <= 2.0 {
        best = best.min(m.eta1());
    }
    if m.alpha > 2.0 && m.alpha.is_finite() && m.tau <= 3.0 {
        best = best.min(m.eta2());
    }
    if m.tau <= 3.0 {
        best = best.min(m.eta3());
    }
    Ok(best)
}
