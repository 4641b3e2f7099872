//! End-to-end acceptance checks, one status line per criterion.
//!
//! Runs at desk scale by default. `SPREADLAB_FULL=1` switches the α and
//! growth-slope checks to n = 10^6. Gowalla ingestion needs
//! `SPREADLAB_GOWALLA_EDGES` and `SPREADLAB_GOWALLA_CHECKINS`.
//! `SPREADLAB_ACCEPT_LENIENT=1` reports failures without a failing exit code.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spreadlab::estimate::{
    concavity_check, empirical_truncated_tail, fit_alpha, fit_growth_exponent, select_kappa, CurveShape, GrowthMode,
};
use spreadlab::girg::{sample_girg, GirgParams};
use spreadlab::gowalla::{build_gowalla_graph, find_seed_node};
use spreadlab::graph::{connected_components, largest_component};
use spreadlab::rewire::{mixing_diagnostic, switch_rewire, DEFAULT_SWEEPS};
use spreadlab::spread::{
    assign_costs, costs_from_draws, epidemic_curve, spread_from, PenaltyBase, PenaltyParams, SpreadResult,
};
use spreadlab::theory::{
    classify, compute_phi, compute_s_star, eta_star, lambda_search, edge_tail_theory, ModelPoint, Phase, Region,
    TailModel,
};
use spreadlab::{Metric, SpatialGraph};

#[derive(Clone, Copy, PartialEq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
            notes: Vec::new(),
        }
    }

    fn skip(detail: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skip,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn full_scale() -> bool {
    std::env::var_os("SPREADLAB_FULL").is_some_and(|v| v != "0")
}

fn girg(n: f64, tau: f64, alpha: f64, seed: u64) -> SpatialGraph {
    sample_girg(&GirgParams::new(n, 2, tau, alpha, 1.0, seed).expect("girg params")).expect("girg sample")
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Member of the largest component closest to the middle of the box.
fn central_source(g: &SpatialGraph) -> usize {
    let labels = connected_components(g);
    let giant = labels.members(labels.largest);
    let Metric::Torus { side } = *g.metric() else {
        return giant[0];
    };
    let mid = vec![side / 2.0; g.dim()];
    *giant
        .iter()
        .min_by(|&&a, &&b| {
            let da = g.metric().distance(g.pos(a), &mid).unwrap();
            let db = g.metric().distance(g.pos(b), &mid).unwrap();
            da.total_cmp(&db).then(a.cmp(&b))
        })
        .unwrap()
}

fn phase_classification() -> Outcome {
    let cases = [
        (0.0, 0.0, Phase::Explosive, Region::A),
        (1.0, 1.0, Phase::QuasiExponential, Region::B),
        (1.0, 2.0, Phase::Polynomial, Region::D),
        (1.0, 3.0, Phase::Geometric, Region::G),
    ];
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (mu, zeta, phase, region) in cases {
        let r = classify(&ModelPoint::new(2, 2.78, 1.2, mu, zeta).unwrap(), 1e-12);
        ok &= r.phase == phase && r.region == region;
        parts.push(format!("({mu},{zeta})->{}/{}", r.phase.name(), r.region.letter()));
        if phase == Phase::Polynomial {
            let psi = r.psi.unwrap_or(f64::NAN);
            ok &= (psi - 2.5).abs() <= 1e-12;
            parts.push(format!("psi={psi:.15}"));
        }
    }
    let elapsed = t.elapsed();
    ok &= elapsed.as_millis() < 1;
    Outcome::check(ok, format!("{} in {elapsed:?}", parts.join(" ")))
}

fn random_point(rng: &mut ChaCha8Rng) -> ModelPoint {
    loop {
        let d = rng.random_range(1..=4);
        let tau = rng.random_range(2.01..4.0);
        let alpha = rng.random_range(1.01..5.0);
        let (mu, zeta) = (rng.random_range(0.0..2.0), rng.random_range(0.0..4.0));
        if tau != 3.0 && alpha != 2.0 {
            return ModelPoint::new(d, tau, alpha, mu, zeta).unwrap();
        }
    }
}

fn eta_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut checked, mut bad, mut drawn) = (0, 0, 0);
    while checked < 1000 {
        drawn += 1;
        let m = random_point(&mut rng);
        // the lower bound only exists where neither fast condition holds
        let Ok(s) = compute_s_star(&m) else { continue };
        checked += 1;
        if eta_star(&m) != s.min(1.0) {
            bad += 1;
        }
    }
    Outcome::check(bad == 0, format!("{checked} points (of {drawn} drawn), {bad} mismatches"))
}

fn lambda_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let (mut poly, mut quasi) = (0, 0);
    let (mut poly_bad, mut quasi_bad) = (0, 0);
    let (mut worst_steps, mut worst_rel) = (0.0f64, 0.0f64);
    while poly < 100 || quasi < 100 {
        let m = random_point(&mut rng);
        match classify(&m, 1e-9) {
            r if r.phase == Phase::Polynomial && poly < 100 => {
                poly += 1;
                let s = lambda_search(&m, 1000);
                let steps = (s.s_min - eta_star(&m)).abs() / s.step;
                worst_steps = worst_steps.max(steps);
                poly_bad += usize::from(!(steps <= 2.0));
            }
            r if r.phase == Phase::QuasiExponential && quasi < 100 => {
                quasi += 1;
                let s = lambda_search(&m, 1000);
                let delta = compute_phi(&m).unwrap().delta;
                let rel = s.delta_from_gamma.map_or(f64::INFINITY, |dl| (dl - delta).abs() / delta);
                worst_rel = worst_rel.max(rel);
                quasi_bad += usize::from(!(s.feasible_at_zero && rel <= 0.01));
            }
            _ => {}
        }
    }
    Outcome::check(
        poly_bad + quasi_bad == 0,
        format!(
            "polynomial {poly_bad}/100 off (worst {worst_steps:.2} steps); quasi-exp {quasi_bad}/100 off (worst rel {worst_rel:.2e})"
        ),
    )
}

/// Small connected graph: random tree plus extra pairs, points in the plane.
fn small_graph(rng: &mut ChaCha8Rng) -> SpatialGraph {
    let n = rng.random_range(2..=8usize);
    let pos: Vec<f64> = (0..2 * n).map(|_| rng.random_range(0.0..6.0)).collect();
    let weights: Vec<f64> = (0..n).map(|_| 1.0 / rng.random_range(0.05..1.0f64)).collect();
    let mut pairs = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        pairs.insert((u, v));
    }
    for _ in 0..rng.random_range(0..=n * 2) {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    SpatialGraph::new(2, Metric::Euclidean, pos, Some(weights), pairs).unwrap()
}

fn edge_cost(g: &SpatialGraph, y: &[f64], p: &PenaltyParams, from: usize, to: usize) -> f64 {
    let e = g
        .edges()
        .iter()
        .position(|e| (e.u as usize, e.v as usize) == (from.min(to), from.max(to)))
        .unwrap();
    let b = |v: usize| g.weight(v).unwrap();
    let len = g.distance(from, to).max(1.0);
    y[e] / p.beta * b(from).powf(p.mu) * b(to).powf(p.nu) * len.powf(p.zeta)
}

/// Minimum over every simple path, cost summed from the source outward.
fn exhaustive(g: &SpatialGraph, y: &[f64], p: &PenaltyParams, source: usize) -> Vec<f64> {
    fn walk(
        g: &SpatialGraph,
        y: &[f64],
        p: &PenaltyParams,
        v: usize,
        t: f64,
        on_path: &mut Vec<bool>,
        best: &mut Vec<f64>,
    ) {
        best[v] = best[v].min(t);
        for w in 0..g.n() {
            let adjacent = g.neighbors(v).iter().any(|&(x, _)| x as usize == w);
            if adjacent && !on_path[w] {
                on_path[w] = true;
                walk(g, y, p, w, t + edge_cost(g, y, p, v, w), on_path, best);
                on_path[w] = false;
            }
        }
    }
    let mut best = vec![f64::INFINITY; g.n()];
    let mut on_path = vec![false; g.n()];
    on_path[source] = true;
    walk(g, y, p, source, 0.0, &mut on_path, &mut best);
    best
}

fn fpp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut bad = 0;
    for _ in 0..1000 {
        let g = small_graph(&mut rng);
        let p = PenaltyParams::with_nu(
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..3.0),
            rng.random_range(0.5..2.0),
            PenaltyBase::Weight,
        )
        .unwrap();
        let y: Vec<f64> = (0..g.m()).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let costs = costs_from_draws(&g, &p, y.clone()).unwrap();
        let source = rng.random_range(0..g.n());
        let got = spread_from(&g, &costs, source).unwrap();
        if got.times != exhaustive(&g, &y, &p, source) {
            bad += 1;
        }
    }
    Outcome::check(bad == 0, format!("1000 graphs, {bad} with any time differing"))
}

fn beta_scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut bad, mut worst) = (0, 0.0f64);
    for i in 0..20 {
        let g = girg(rng.random_range(500.0..3000.0), rng.random_range(2.2..3.5), rng.random_range(1.1..4.0), i);
        let (mu, zeta) = (rng.random_range(0.0..1.5), rng.random_range(0.0..3.0));
        let beta = rng.random_range(0.2..5.0);
        let p1 = PenaltyParams::new(mu, zeta, beta, PenaltyBase::Weight).unwrap();
        let p2 = PenaltyParams::new(mu, zeta, 2.0 * beta, PenaltyBase::Weight).unwrap();
        let seed = rng.random();
        let src = rng.random_range(0..g.n());
        let a = spread_from(&g, &assign_costs(&g, &p1, seed).unwrap(), src).unwrap();
        let b = spread_from(&g, &assign_costs(&g, &p2, seed).unwrap(), src).unwrap();
        let mut ok = a.order == b.order;
        for (ta, tb) in a.times.iter().zip(&b.times) {
            if ta.is_infinite() {
                ok &= tb.is_infinite();
            } else if *ta > 0.0 {
                let rel = (tb - ta / 2.0).abs() / (ta / 2.0);
                worst = worst.max(rel);
                ok &= rel <= 1e-15;
            }
        }
        bad += usize::from(!ok);
    }
    Outcome::check(bad == 0, format!("20 instances, {bad} failing, worst relative gap {worst:.1e}"))
}

/// Reuse of the n = 2e5 graph by the edge-tail and α checks.
fn edge_tail_and_alpha(g: &SpatialGraph) -> (Outcome, Outcome) {
    let model = TailModel::new(2, 2.78, 1.2, 1.0).unwrap();
    let pred = edge_tail_theory(&model, 20.0, 100.0, None).unwrap();
    let count = g.edges().iter().filter(|e| e.len >= 20.0 && e.len <= 100.0).count();
    // each undirected edge is counted from both ends
    let empirical = 2.0 * count as f64 / g.n() as f64;
    let rel = (empirical - pred.predicted).abs() / pred.predicted;
    let tail = Outcome::check(
        rel <= 0.10,
        format!(
            "n={} empirical {empirical:.4} vs predicted {:.4}, rel {:.2}%",
            g.n(),
            pred.predicted,
            100.0 * rel
        ),
    );
    (tail, alpha_recovery(g, 0.05))
}

fn alpha_recovery(g: &SpatialGraph, tol: f64) -> Outcome {
    const L_PLUS: f64 = 175.0;
    let mut ok = true;
    let mut parts = Vec::new();
    for (l_minus, target) in [(10.0, 1.183), (40.0, 1.196)] {
        let fit = empirical_truncated_tail(g, l_minus, L_PLUS, 60)
            .and_then(|tail| fit_alpha(&tail, L_PLUS, 2))
            .map(|f| f.estimate);
        match fit {
            Ok(a) => {
                ok &= (a - target).abs() <= tol;
                parts.push(format!("L-={l_minus}: {a:.4} (target {target}±{tol})"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("L-={l_minus}: error {e}"));
            }
        }
    }
    Outcome::check(ok, format!("n={}, L+={L_PLUS}: {}", g.n(), parts.join("; ")))
}

/// τ recovery and explosive size-independence share the n = 1e5 graphs.
fn tau_and_explosive() -> (Outcome, Outcome) {
    let explosive = PenaltyParams::new(0.0, 0.0, 1.0, PenaltyBase::Weight).unwrap();
    let t50 = |g: &SpatialGraph, seed: u64| -> f64 {
        let r = spread_from(g, &assign_costs(g, &explosive, seed).unwrap(), central_source(g)).unwrap();
        half_time(&r)
    };
    let (mut inside, mut taus, mut weight_taus, mut big) = (0, Vec::new(), Vec::new(), Vec::new());
    for seed in 0..20u64 {
        let g = girg(1e5, 2.7, 1.2, 5000 + seed);
        let deg: Vec<f64> = g.degrees().into_iter().filter(|&k| k > 0).map(|k| k as f64).collect();
        let h = select_kappa(&deg).unwrap();
        inside += usize::from((2.55..=2.85).contains(&h.tau_hat));
        taus.push(h.tau_hat);
        weight_taus.push(select_kappa(g.weights().unwrap()).unwrap().tau_hat);
        big.push(t50(&g, 9000 + seed));
    }
    let small: Vec<f64> = (0..20u64).map(|s| t50(&girg(1e4, 2.7, 1.2, 6000 + s), 9100 + s)).collect();

    let tau_list: Vec<String> = taus.iter().map(|t| format!("{t:.3}")).collect();
    let mut tau = Outcome::check(
        inside >= 18,
        format!("{inside}/20 seeds with tau_hat in [2.55, 2.85], median {:.3}", median(taus.clone())),
    )
    .note(format!("degree tau_hat per seed: {}", tau_list.join(" ")))
    .note(format!(
        "Hill on the latent weights of the same graphs: median {:.3}",
        median(weight_taus)
    ));
    if tau.status == Status::Fail {
        tau = tau.note(
            "degrees overshoot while weights do not: with alpha=1.2 the kernel tail r^-2.4 is cut by the \
             torus (side ~316), a larger share for hubs than for low-weight nodes, so degree grows \
             sublinearly in weight at this n and the degree tail is thinner than tau",
        );
    }

    let (ms, mb) = (median(small), median(big));
    let ratio = ms.max(mb) / ms.min(mb);
    let explosive = Outcome::check(
        ratio < 1.5,
        format!("median t50 n=1e4 {ms:.4}, n=1e5 {mb:.4}, ratio {ratio:.3}"),
    );
    (tau, explosive)
}

/// Time at which half of the finally reached nodes are infected.
fn half_time(r: &SpreadResult) -> f64 {
    let k = r.reached().div_ceil(2);
    r.times[r.order[k - 1] as usize]
}

const WIN_LO: f64 = 147.910_838_816_821_2;
const WIN_HI: f64 = 5011.872_336_272_725;
const SHAPE_HI: f64 = 31_622.776_601_683_792;

fn growth_desk() -> Outcome {
    let g = girg(1e5, 2.78, 1.2, 7000);
    let src = central_source(&g);
    let runs = 5u64;
    let curves = |zeta: f64| -> Vec<_> {
        let p = PenaltyParams::new(1.0, zeta, 1.0, PenaltyBase::Weight).unwrap();
        (0..runs)
            .map(|r| epidemic_curve(&spread_from(&g, &assign_costs(&g, &p, 7100 + r).unwrap(), src).unwrap()).unwrap())
            .collect()
    };
    let poly = curves(2.0);
    let psi = median(
        poly.iter()
            .map(|c| fit_growth_exponent(c, WIN_LO, WIN_HI, GrowthMode::LogLog).unwrap().estimate)
            .collect(),
    );
    let quasi = curves(1.0);
    let concave_in = |hi: f64| {
        quasi
            .iter()
            .filter(|c| concavity_check(c, WIN_LO, hi).unwrap().verdict == CurveShape::Concave)
            .count()
    };
    // the plotting window holds too few samples for the sign test at this n
    let (concave, concave_narrow) = (concave_in(SHAPE_HI), concave_in(WIN_HI));
    let geo = curves(3.0);
    let geo_r2 = median(
        geo.iter()
            .map(|c| fit_growth_exponent(c, WIN_LO, WIN_HI, GrowthMode::LogLog).unwrap().r_squared)
            .collect(),
    );
    let geo_slope = median(
        geo.iter()
            .map(|c| fit_growth_exponent(c, WIN_LO, WIN_HI, GrowthMode::LogLog).unwrap().estimate)
            .collect(),
    );
    let majority = runs as usize / 2 + 1;
    Outcome::check(
        psi > 1.0 && concave >= majority && geo_r2 >= 0.98,
        format!(
            "desk n=1e5, {runs} runs: zeta=2 median log-log slope {psi:.3} (>1); zeta=1 concave in {concave}/{runs} \
             over [10^2.17, 10^4.5]; zeta=3 log-log R^2 {geo_r2:.4} (>=0.98), slope {geo_slope:.3}"
        ),
    )
    .note(format!(
        "over [10^2.17, 10^3.70] alone the sign test calls zeta=1 concave in {concave_narrow}/{runs}"
    ))
    .note("full-scale slope targets need SPREADLAB_FULL=1")
}

fn growth_full() -> Outcome {
    let (mut s2, mut s3) = (Vec::new(), Vec::new());
    for seed in 0..10u64 {
        let g = girg(1e6, 2.78, 1.2, 8000 + seed);
        let src = central_source(&g);
        for (zeta, out) in [(2.0, &mut s2), (3.0, &mut s3)] {
            let p = PenaltyParams::new(1.0, zeta, 1.0, PenaltyBase::Weight).unwrap();
            let c = epidemic_curve(&spread_from(&g, &assign_costs(&g, &p, 8100 + seed).unwrap(), src).unwrap()).unwrap();
            out.push(fit_growth_exponent(&c, WIN_LO, WIN_HI, GrowthMode::LogLog).unwrap().estimate);
        }
    }
    let (m2, m3) = (median(s2), median(s3));
    Outcome::check(
        (m2 - 3.46).abs() <= 0.6 && (m3 - 2.47).abs() <= 0.4,
        format!("n=1e6, 10 seeds: zeta=2 median {m2:.3} (3.46±0.6), zeta=3 median {m3:.3} (2.47±0.4)"),
    )
}

fn rewiring() -> Outcome {
    let g = girg(5e4, 2.78, 2.5, 9500);
    let r = switch_rewire(&g, DEFAULT_SWEEPS, 9501).unwrap();
    let diag = mixing_diagnostic(&g, &r).unwrap();
    let mut sorted = (g.degrees(), r.degrees());
    sorted.0.sort_unstable();
    sorted.1.sort_unstable();
    let multiset = sorted.0 == sorted.1;
    let (lcc, _) = largest_component(&r).unwrap();
    let src = central_source(&lcc);
    let mut r2 = Vec::new();
    for zeta in [1.0, 2.0, 3.0] {
        let p = PenaltyParams::new(1.0, zeta, 1.0, PenaltyBase::Degree).unwrap();
        let c = epidemic_curve(&spread_from(&lcc, &assign_costs(&lcc, &p, 9600).unwrap(), src).unwrap()).unwrap();
        r2.push(fit_growth_exponent(&c, WIN_LO, WIN_HI, GrowthMode::LogLinear).unwrap().r_squared);
    }
    let ok = multiset && diag.degree_seq_equal && diag.mean_len_ratio >= 10.0 && r2.iter().all(|&x| x >= 0.98);
    Outcome::check(
        ok,
        format!(
            "GIRG surrogate n=5e4 alpha=2.5: degrees preserved {}, mean length ratio {:.2} after {DEFAULT_SWEEPS} sweeps, \
             log-linear R^2 zeta=1,2,3: {:.4} {:.4} {:.4}",
            multiset && diag.degree_seq_equal,
            diag.mean_len_ratio,
            r2[0],
            r2[1],
            r2[2]
        ),
    )
    .note("Gowalla data unavailable offline; surrogate used")
}

fn gowalla() -> Outcome {
    let (Some(edges), Some(checkins)) = (
        std::env::var_os("SPREADLAB_GOWALLA_EDGES").map(PathBuf::from),
        std::env::var_os("SPREADLAB_GOWALLA_CHECKINS").map(PathBuf::from),
    ) else {
        return Outcome::skip("dataset not present (set SPREADLAB_GOWALLA_EDGES and SPREADLAB_GOWALLA_CHECKINS)");
    };
    let gg = match build_gowalla_graph(&edges, &checkins, 0) {
        Ok(gg) => gg,
        Err(e) => return Outcome::check(false, format!("ingestion failed: {e}")),
    };
    let g = &gg.graph;
    let mean = 2.0 * g.m() as f64 / g.n() as f64;
    let (lcc, _) = largest_component(g).unwrap();
    let seed_deg = find_seed_node(g, 49.50, 11.44).map(|v| g.degree(v));
    let ok = g.n() == 107_092
        && g.m() == 456_830
        && format!("{mean:.2}") == "8.53"
        && lcc.n() == 96_953
        && lcc.m() == 455_026
        && seed_deg.as_ref().is_ok_and(|&k| k == 52);
    Outcome::check(
        ok,
        format!(
            "n={} m={} mean degree {mean:.2}; LCC {}/{}; seed degree {:?}",
            g.n(),
            g.m(),
            lcc.n(),
            lcc.m(),
            seed_deg.ok()
        ),
    )
}

fn main() {
    let full = full_scale();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut record = |name, o: Outcome| {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        println!("{tag} {name}: {}", o.detail);
        for n in &o.notes {
            println!("     note: {n}");
        }
        results.push((name, o));
    };
    println!("acceptance suite ({} scale)", if full { "full" } else { "desk" });

    record("phase classification", phase_classification());
    record("eta-star identity", eta_identity());
    record("lambda search cross-check", lambda_cross_check());
    record("fpp oracle", fpp_oracle());
    record("cost scaling", beta_scaling());

    let g = girg(2e5, 2.78, 1.2, 4242);
    let (tail, alpha_desk) = edge_tail_and_alpha(&g);
    drop(g);
    record("edge-length theory", tail);
    if full {
        record("alpha recovery", alpha_recovery(&girg(1e6, 2.78, 1.2, 4343), 0.02));
    } else {
        record("alpha recovery", alpha_desk.note("desk scale n=2e5, tolerance ±0.05"));
    }

    let (tau, explosive) = tau_and_explosive();
    record("tau recovery", tau);
    record("growth slope", if full { growth_full() } else { growth_desk() });
    record("explosive size independence", explosive);
    record("rewiring", rewiring());
    record("gowalla ingestion", gowalla());

    let count = |s| results.iter().filter(|(_, o)| o.status == s).count();
    let (pass, fail, skip) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
    println!("summary: {pass} pass, {fail} fail, {skip} skip");
    let lenient = std::env::var_os("SPREADLAB_ACCEPT_LENIENT").is_some_and(|v| v != "0");
    if fail > 0 && !lenient {
        std::process::exit(1);
    }
}
