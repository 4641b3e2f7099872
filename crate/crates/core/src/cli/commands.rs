use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use super::manifest::Manifest;
use super::*;
use crate::error::{Error, Result};
use crate::estimate::{
    concavity_check, empirical_truncated_tail, fit_alpha, fit_growth_exponent_with_warmup, hill_estimator,
    select_kappa, truncated_tail_model, GrowthMode,
};
use crate::girg::{sample_girg, sample_girg_naive, GirgParams};
use crate::gowalla::{build_gowalla_graph, find_seed_node, write_id_map};
use crate::graph::{degree_stats, largest_component, Metric, SpatialGraph};
use crate::io::{fmt_real, read_sgraph, write_sgraph};
use crate::rewire::{mixing_diagnostic, switch_rewire_counted, PAIRING};
use crate::spread::{
    assign_costs, epidemic_curve, heatmap_grid, run_seed, spread_from, EpidemicCurve, PenaltyBase, PenaltyParams,
};
use crate::theory::{
    classify, edge_tail_theory, phase_diagram_grid, AxisRange, ModelPoint, TailModel,
};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(w: BufWriter<File>, path: &Path) -> Result<()> {
    w.into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?
        .sync_all()
        .map_err(|e| Error::io(path, e))
}

/// Writes a CSV file: header, then rows produced by `body`.
fn write_csv(path: &Path, header: &str, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{header}")
        .and_then(|_| body(&mut w))
        .map_err(|e| Error::io(path, e))?;
    finish(w, path)
}

fn say(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
}

fn save_manifest(m: &Manifest, explicit: Option<&Path>) -> Result<()> {
    m.write(&m.default_path(explicit))
}

pub(super) fn execute(cli: Cli, argv: &[String], out: &mut dyn Write) -> Result<()> {
    let explicit = cli.manifest.as_deref();
    let name = argv.first().map(String::as_str).unwrap_or("");
    let mut m = Manifest::new(name, argv);
    let produced = match cli.command {
        Command::Sample(a) => sample(a, &mut m, out)?,
        Command::Simulate(a) => simulate(a, &mut m, out)?,
        Command::Classify(a) => {
            classify_cmd(a, out)?;
            false
        }
        Command::PhaseDiagram(a) => phase_diagram(a, &mut m, out)?,
        Command::EstimateTau(a) => estimate_tau(a, &mut m, out)?,
        Command::EstimateAlpha(a) => estimate_alpha(a, &mut m, out)?,
        Command::FitCurve(a) => fit_curve(a, &mut m, out)?,
        Command::Rewire(a) => rewire(a, &mut m, out)?,
        Command::IngestGowalla(a) => ingest(a, &mut m, out)?,
        Command::EdgeTail(a) => edge_tail(a, &mut m, out)?,
        Command::Replay(a) => {
            replay(a, out)?;
            false
        }
    };
    if produced {
        save_manifest(&m, explicit)?;
    }
    Ok(())
}

fn sample(a: SampleArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let p = GirgParams::new(a.n, a.d, a.tau, a.alpha, a.c, a.seed)?;
    let g = if a.naive { sample_girg_naive(&p)? } else { sample_girg(&p)? };
    write_sgraph(&g, &a.out)?;
    let s = degree_stats(&g);
    say(out, format_args!("nodes\t{}\nedges\t{}\nmean_degree\t{}", g.n(), g.m(), fmt_real(s.mean)))?;
    m.seed("seed", a.seed)
        .note("sampler", if a.naive { "naive" } else { "grid" })
        .output(&a.out)?;
    Ok(true)
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parameter(format!("bad number `{t}` in {what} `{s}`")))
        })
        .collect()
}

/// Node id, or the node closest to the coordinates `a,b`.
fn resolve_source(g: &SpatialGraph, spec: &str) -> Result<usize> {
    if !spec.contains(',') {
        let id: usize = spec
            .parse()
            .map_err(|_| Error::Parameter(format!("source `{spec}` is neither an id nor coordinates")))?;
        if id >= g.n() {
            return Err(Error::Parameter(format!("source {id} outside 0..{}", g.n())));
        }
        return Ok(id);
    }
    let q = parse_floats(spec, "source")?;
    if q.len() != g.dim() {
        return Err(Error::Dimension { expected: g.dim(), got: q.len() });
    }
    if let Metric::Haversine { .. } = g.metric() {
        return find_seed_node(g, q[0], q[1]);
    }
    if g.n() == 0 {
        return Err(Error::Validation("graph has no nodes".into()));
    }
    let mut best = (f64::INFINITY, 0);
    for v in 0..g.n() {
        let d = g.metric().distance(&q, g.pos(v))?;
        if d < best.0 {
            best = (d, v);
        }
    }
    Ok(best.1)
}

fn simulate(a: SimulateArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let base = PenaltyBase::parse(&a.base)?;
    let p = PenaltyParams::with_nu(a.mu, a.nu.unwrap_or(a.mu), a.zeta, a.beta, base)?;
    if a.runs == 0 {
        return Err(Error::Parameter("runs must be at least 1".into()));
    }
    if a.curves_out.is_none() && a.times_out.is_none() && a.heatmap_out.is_none() {
        return Err(Error::Parameter(
            "nothing to write: give --curves-out, --times-out or --heatmap-out".into(),
        ));
    }
    let crop = match &a.crop {
        Some(s) => {
            let v = parse_floats(s, "crop")?;
            let arr: [f64; 4] = v
                .try_into()
                .map_err(|_| Error::Parameter(format!("crop `{s}` needs four numbers")))?;
            Some(arr)
        }
        None => None,
    };
    let g = read_sgraph(&a.graph)?;
    m.input(&a.graph)?;
    let source = resolve_source(&g, &a.source)?;

    let mut curves = a.curves_out.as_deref().map(|p| create(p).map(|w| (w, p))).transpose()?;
    let mut times = a.times_out.as_deref().map(|p| create(p).map(|w| (w, p))).transpose()?;
    if let Some((w, p)) = curves.as_mut() {
        writeln!(w, "run,count,time").map_err(|e| Error::io(*p, e))?;
    }
    if let Some((w, p)) = times.as_mut() {
        writeln!(w, "run,node,time,rank").map_err(|e| Error::io(*p, e))?;
    }

    let batch = rayon::current_num_threads().max(1) as u64;
    let mut reached = Vec::new();
    let mut start = 0;
    while start < a.runs {
        let ids: Vec<u64> = (start..(start + batch).min(a.runs)).collect();
        let results = ids
            .par_iter()
            .map(|&r| {
                let costs = assign_costs(&g, &p, run_seed(a.seed, r))?;
                spread_from(&g, &costs, source)
            })
            .collect::<Result<Vec<_>>>()?;
        for (&run, res) in ids.iter().zip(&results) {
            reached.push(res.reached());
            if let Some((w, path)) = curves.as_mut() {
                let c = epidemic_curve(res)?;
                for (count, t) in &c.samples {
                    writeln!(w, "{run},{count},{}", fmt_real(*t)).map_err(|e| Error::io(*path, e))?;
                }
            }
            if let Some((w, path)) = times.as_mut() {
                for (rank, &v) in res.order.iter().enumerate() {
                    writeln!(w, "{run},{v},{},{rank}", fmt_real(res.times[v as usize]))
                        .map_err(|e| Error::io(*path, e))?;
                }
            }
            if run == 0 {
                if let Some(path) = &a.heatmap_out {
                    let h = heatmap_grid(res, &g, a.grid, crop)?;
                    write_csv(path, "bx,by,rank", |w| {
                        h.cells
                            .iter()
                            .try_for_each(|(bx, by, r)| writeln!(w, "{bx},{by},{}", fmt_real(*r)))
                    })?;
                }
            }
        }
        start += batch;
    }
    for (w, path) in curves.into_iter().chain(times) {
        finish(w, path)?;
    }
    for path in [&a.curves_out, &a.times_out, &a.heatmap_out].into_iter().flatten() {
        m.output(path)?;
    }
    m.seed("seed", a.seed)
        .note("source", source)
        .note("base", base.name())
        .note("runs", a.runs);
    say(out, format_args!("source\t{source}"))?;
    say(out, format_args!("reached\t{}", reached.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))?;
    Ok(true)
}

fn model_point(d: usize, tau: f64, alpha: f64, mu: f64, nu: Option<f64>, zeta: f64) -> Result<ModelPoint> {
    ModelPoint::with_nu(d, tau, alpha, mu, nu.unwrap_or(mu), zeta)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn classify_cmd(a: ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let mp = model_point(a.d, a.tau, a.alpha, a.mu, a.nu, a.zeta)?;
    let r = classify(&mp, a.tol);
    if a.json {
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["phase"] = r.phase.name().into();
        v["region"] = r.region.letter().to_string().into();
        say(out, serde_json::to_string_pretty(&v).expect("json"))
    } else {
        say(out, format_args!("phase\t{}", r.phase.name()))?;
        say(out, format_args!("region\t{}", r.region.letter()))?;
        say(out, format_args!("phi\t{}", opt(r.phi)))?;
        say(out, format_args!("delta\t{}", opt(r.delta)))?;
        say(out, format_args!("psi\t{}", opt(r.psi)))?;
        say(out, format_args!("eta_star\t{}", opt(r.eta_star)))?;
        say(out, format_args!("s_star\t{}", opt(r.s_star)))?;
        say(out, format_args!("boundary\t{}", r.boundary))?;
        say(out, format_args!("upper_bound_only\t{}", r.upper_bound_only))
    }
}

fn phase_diagram(a: PhaseDiagramArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let x = AxisRange::parse(&a.x)?;
    let y = AxisRange::parse(&a.y)?;
    let mut fixed = std::collections::BTreeMap::new();
    for part in a.fix.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("fixed value `{part}` is not name=value")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| Error::Parameter(format!("bad number in `{part}`")))?;
        fixed.insert(k.trim().to_string(), v);
    }
    // an axis coordinate takes its lower end until the grid overrides it
    let value = |k: &str| -> Result<f64> {
        if let Some(v) = fixed.get(k) {
            return Ok(*v);
        }
        [&x, &y]
            .into_iter()
            .find(|r| format!("{:?}", r.axis).eq_ignore_ascii_case(k))
            .map(|r| r.lo)
            .ok_or_else(|| Error::Parameter(format!("`{k}` is neither fixed nor an axis")))
    };
    let d = fixed
        .get("d")
        .copied()
        .ok_or_else(|| Error::Parameter("the dimension must be fixed, e.g. d=2".into()))?;
    if d < 1.0 || d.fract() != 0.0 {
        return Err(Error::Parameter(format!("d must be a positive integer, got {d}")));
    }
    if let Some(k) = fixed.keys().find(|k| !["d", "tau", "alpha", "mu", "zeta"].contains(&k.as_str())) {
        return Err(Error::Parameter(format!("unknown fixed coordinate `{k}`")));
    }
    let base = ModelPoint::new(d as usize, value("tau")?, value("alpha")?, value("mu")?, value("zeta")?)?;
    let cells = phase_diagram_grid(&base, &x, &y, a.tol)?;
    write_csv(&a.out, "x,y,region,exponent,boundary", |w| {
        cells.iter().try_for_each(|c| {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_real(c.x),
                fmt_real(c.y),
                c.report.region.letter(),
                opt(c.report.exponent()),
                u8::from(c.report.boundary)
            )
        })
    })?;
    m.output(&a.out)?;
    say(out, format_args!("cells\t{}", cells.len()))?;
    Ok(true)
}

fn estimate_tau(a: EstimateTauArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let g = read_sgraph(&a.graph)?;
    m.input(&a.graph)?;
    let degrees: Vec<f64> = g.degrees().into_iter().filter(|&k| k > 0).map(|k| k as f64).collect();
    let (kappa, gamma, sweep) = match a.kappa {
        Some(k) => (k, hill_estimator(&degrees, k)?, vec![]),
        None => {
            let r = select_kappa(&degrees)?;
            if !r.plateau_found {
                say(out, "warning\tno plateau in the Hill plot; used n^(2/3)")?;
            }
            (r.kappa, r.gamma_hat, r.kappa_sweep)
        }
    };
    say(out, format_args!("kappa\t{kappa}\ngamma_hat\t{}\ntau_hat\t{}", fmt_real(gamma), fmt_real(1.0 + 1.0 / gamma)))?;
    if let Some(path) = &a.out {
        write_csv(path, "kappa,gamma_hat,tau_hat", |w| {
            sweep
                .iter()
                .try_for_each(|(k, g)| writeln!(w, "{k},{},{}", fmt_real(*g), fmt_real(1.0 + 1.0 / g)))
        })?;
        m.output(path)?;
        return Ok(true);
    }
    Ok(false)
}

fn estimate_alpha(a: EstimateAlphaArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let g = read_sgraph(&a.graph)?;
    m.input(&a.graph)?;
    let haversine = matches!(g.metric(), Metric::Haversine { .. });
    if haversine != a.km {
        return Err(Error::Parameter(if haversine {
            "graph lengths are kilometres; pass --km".into()
        } else {
            "--km given but the graph is not on the sphere".into()
        }));
    }
    let tail = empirical_truncated_tail(&g, a.lmin, a.lmax, a.points)?;
    let fit = fit_alpha(&tail, a.lmax, g.dim())?;
    say(
        out,
        format_args!(
            "alpha_hat\t{}\nb\t{}\nresidual_sse\t{}\npoints_used\t{}",
            fmt_real(fit.estimate),
            fmt_real(fit.prefactor),
            fmt_real(fit.residual_sse),
            fit.points_used
        ),
    )?;
    if let Some(path) = &a.out {
        write_csv(path, "l,empirical,fitted", |w| {
            tail.iter().try_for_each(|&(l, f)| {
                let model = truncated_tail_model(l, fit.estimate, fit.prefactor, a.lmax, g.dim());
                writeln!(w, "{},{},{}", fmt_real(l), fmt_real(f), fmt_real(model))
            })
        })?;
        m.output(path)?;
        return Ok(true);
    }
    Ok(false)
}

/// Curves of a `run,count,time` file, in run order.
pub(crate) fn read_curves(path: &Path) -> Result<Vec<(u64, EpidemicCurve)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut runs: std::collections::BTreeMap<u64, Vec<(usize, f64)>> = Default::default();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let err = |msg: &str| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: msg.into(),
        };
        if i == 0 {
            if line.trim() != "run,count,time" {
                return Err(err("expected header `run,count,time`"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(err("expected three columns"));
        }
        let run = f[0].parse().map_err(|_| err("bad run"))?;
        let count = f[1].parse().map_err(|_| err("bad count"))?;
        let time = f[2].parse().map_err(|_| err("bad time"))?;
        runs.entry(run).or_default().push((count, time));
    }
    if runs.is_empty() {
        return Err(Error::Validation(format!("{} holds no curve", path.display())));
    }
    Ok(runs
        .into_iter()
        .map(|(r, samples)| {
            let total = samples.iter().map(|s| s.0).max().unwrap_or(0);
            (r, EpidemicCurve { samples, total })
        })
        .collect())
}

fn fit_curve(a: FitCurveArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let mode = GrowthMode::parse(&a.mode)?;
    let curves = read_curves(&a.curves)?;
    m.input(&a.curves)?;
    let (lo, hi, warm) = (10f64.powf(a.ilow), 10f64.powf(a.ihigh), 10f64.powf(a.warmup));
    let mut rows = Vec::new();
    for (run, c) in &curves {
        let f = fit_growth_exponent_with_warmup(c, lo, hi, mode, warm)?;
        let shape = if a.concavity { Some(concavity_check(c, lo, hi)?) } else { None };
        rows.push((*run, f, shape));
    }
    let mut slopes: Vec<f64> = rows.iter().map(|r| r.1.estimate).collect();
    slopes.sort_by(f64::total_cmp);
    say(out, "run\tslope\tr_squared\tshape")?;
    for (run, f, shape) in &rows {
        let s = shape.as_ref().map(|s| format!("{:?}", s.verdict).to_lowercase()).unwrap_or_default();
        say(out, format_args!("{run}\t{}\t{}\t{s}", fmt_real(f.estimate), fmt_real(f.r_squared)))?;
    }
    say(out, format_args!("median_slope\t{}", fmt_real(crate::spread::quantile_sorted(&slopes, 0.5))))?;
    if let Some(path) = &a.out {
        write_csv(path, "run,slope,intercept,r_squared,points,shape,p_value", |w| {
            rows.iter().try_for_each(|(run, f, shape)| {
                let (s, p) = match shape {
                    Some(s) => (format!("{:?}", s.verdict).to_lowercase(), fmt_real(s.p_value)),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    w,
                    "{run},{},{},{},{},{s},{p}",
                    fmt_real(f.estimate),
                    fmt_real(f.prefactor),
                    fmt_real(f.r_squared),
                    f.points_used
                )
            })
        })?;
        m.output(path)?;
        return Ok(true);
    }
    Ok(false)
}

fn rewire(a: RewireArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let g = read_sgraph(&a.graph)?;
    m.input(&a.graph)?;
    let (r, stats) = switch_rewire_counted(&g, a.sweeps, a.seed)?;
    write_sgraph(&r, &a.out)?;
    let d = mixing_diagnostic(&g, &r)?;
    say(
        out,
        format_args!(
            "accepted\t{}/{}\nedge_jaccard\t{}\nmean_len_ratio\t{}\ndegree_seq_equal\t{}",
            stats.accepted,
            stats.proposals,
            fmt_real(d.edge_jaccard),
            fmt_real(d.mean_len_ratio),
            d.degree_seq_equal
        ),
    )?;
    m.seed("seed", a.seed)
        .note("pairing", PAIRING)
        .note("sweeps", a.sweeps)
        .output(&a.out)?;
    Ok(true)
}

fn ingest(a: IngestArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let gw = build_gowalla_graph(&a.edges, &a.checkins, a.tie_seed)?;
    m.input(&a.edges)?.input(&a.checkins)?;
    write_sgraph(&gw.graph, &a.out)?;
    m.output(&a.out)?;
    let s = degree_stats(&gw.graph);
    say(out, format_args!("nodes\t{}\nedges\t{}\nmean_degree\t{}", gw.graph.n(), gw.graph.m(), fmt_real(s.mean)))?;
    if let Some(path) = &a.idmap {
        let mut w = create(path)?;
        write_id_map(&gw.user_ids, &mut w).map_err(|e| Error::io(path, e))?;
        finish(w, path)?;
        m.output(path)?;
    }
    let (lcc, _) = largest_component(&gw.graph)?;
    say(
        out,
        format_args!("lcc_nodes\t{}\nlcc_edges\t{}\nlcc_mean_degree\t{}", lcc.n(), lcc.m(), fmt_real(degree_stats(&lcc).mean)),
    )?;
    if let Some(path) = &a.lcc_out {
        write_sgraph(&lcc, path)?;
        m.output(path)?;
    }
    m.seed("tie_seed", a.tie_seed);
    Ok(true)
}

fn edge_tail(a: EdgeTailArgs, m: &mut Manifest, out: &mut dyn Write) -> Result<bool> {
    let model = TailModel::new(a.d, a.tau, a.alpha, a.c)?;
    let p = edge_tail_theory(&model, a.l1, a.l2, a.cap)?;
    let graph = a.graph.as_deref().map(read_sgraph).transpose()?;
    let empirical = |g: &SpatialGraph, lo: f64| {
        2.0 * g.edges().iter().filter(|e| e.len >= lo && e.len <= a.l2).count() as f64 / g.n() as f64
    };
    say(out, format_args!("regime\t{:?}", p.regime))?;
    say(out, format_args!("predicted_per_node\t{}", fmt_real(p.predicted)))?;
    if p.l1_below_floor {
        say(out, format_args!("warning\tL1 below {}; the asymptotic form is unreliable", model.l1_floor))?;
    }
    if let Some(g) = &graph {
        say(out, format_args!("empirical_per_node\t{}", fmt_real(empirical(g, a.l1))))?;
    }
    let Some(path) = &a.out else {
        return Ok(false);
    };
    let grid = crate::estimate::log_grid(a.l1, a.l2, a.points.max(2));
    let rows = grid
        .iter()
        .map(|&l| Ok((l, edge_tail_theory(&model, l, a.l2, a.cap)?.predicted)))
        .collect::<Result<Vec<_>>>()?;
    write_csv(path, "l,predicted,empirical", |w| {
        rows.iter().try_for_each(|&(l, pred)| {
            let emp = graph.as_ref().map(|g| fmt_real(empirical(g, l))).unwrap_or_default();
            writeln!(w, "{},{},{emp}", fmt_real(l), fmt_real(pred))
        })
    })?;
    if let Some(gp) = &a.graph {
        m.input(gp)?;
    }
    m.output(path)?;
    Ok(true)
}

fn replay(a: ReplayArgs, out: &mut dyn Write) -> Result<()> {
    let recorded = Manifest::read(&a.path)?;
    if recorded.argv.first().map(String::as_str) == Some("replay") {
        return Err(Error::Validation("a manifest cannot replay a replay".into()));
    }
    let argv = std::iter::once("spreadlab".to_string()).chain(recorded.argv.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Validation(format!("recorded arguments no longer parse: {e}")))?;
    execute(cli, &recorded.argv, out)?;
    if a.check {
        for o in &recorded.outputs {
            let now = super::FileDigest::of(&o.path)?;
            if now.sha256 != o.sha256 {
                return Err(Error::Validation(format!("{} does not reproduce", o.path.display())));
            }
        }
        say(out, format_args!("reproduced\t{}", recorded.outputs.len()))?;
    }
    Ok(())
}
