//! C interface to spreadlab.
//!
//! Every fallible function returns an [`SlStatus`]. After a failure,
//! [`sl_last_error`] returns a message for the calling thread. Handles are
//! created by the library and released with the matching `*_free` function.
//! Array outputs take a caller buffer and its capacity; with too small a
//! buffer the call fails with `SL_STATUS_BUFFER_TOO_SMALL` and reports the
//! needed length through `written`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use spreadlab::estimate::select_kappa;
use spreadlab::girg::{sample_girg, GirgParams};
use spreadlab::rewire::switch_rewire;
use spreadlab::spread::{assign_costs, epidemic_curve, spread_from, PenaltyBase, PenaltyParams, SpreadResult};
use spreadlab::theory::{classify, edge_tail_theory, ModelPoint, Phase, TailModel};
use spreadlab::{Error, SpatialGraph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Validation = 3,
    Estimation = 4,
    Unsupported = 5,
    State = 6,
    Io = 7,
    Parse = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

impl From<&Error> for SlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } | Error::Parameter(_) | Error::Config(_) => SlStatus::InvalidArgument,
            Error::Validation(_) | Error::Alignment(_) => SlStatus::Validation,
            Error::Estimation(_) => SlStatus::Estimation,
            Error::Unsupported(_) => SlStatus::Unsupported,
            Error::State(_) => SlStatus::State,
            Error::Parse { .. } => SlStatus::Parse,
            Error::Io { .. } => SlStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(SlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(SlStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SlStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SlStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Fail> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SlStatus::InvalidArgument, "path is not UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

/// Copy `data` into a caller buffer of capacity `cap`, reporting the length.
unsafe fn fill<T: Copy>(data: &[T], buf: *mut T, cap: usize, written: *mut usize) -> Result<(), Fail> {
    if !written.is_null() {
        written.write(data.len());
    }
    if cap < data.len() {
        return Err(Fail(
            SlStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", data.len()),
        ));
    }
    if !data.is_empty() {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        std::ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    }
    Ok(())
}

/// Library version as a NUL-terminated string with static lifetime.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `cap - 1` bytes). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let k = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, k);
            buf.add(k).write(0);
        }
        msg.len()
    })
}

/// Opaque spatial graph.
pub struct SlGraph(SpatialGraph);

/// Opaque result of one spreading run.
pub struct SlSpread(SpreadResult);

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlGirgParams {
    /// Expected node count.
    pub n: f64,
    pub d: usize,
    pub tau: f64,
    /// `INFINITY` selects the threshold kernel.
    pub alpha: f64,
    pub c: f64,
    pub seed: u64,
}

/// Sample a GIRG into a new graph handle.
///
/// # Safety
/// `params` must be valid for reads and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_girg_sample(params: *const SlGirgParams, out: *mut *mut SlGraph) -> SlStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let g = sample_girg(&GirgParams::new(p.n, p.d, p.tau, p.alpha, p.c, p.seed)?)?;
        put(out, Box::into_raw(Box::new(SlGraph(g))), "out")
    })
}

/// Load a graph from an sgraph file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_read(path: *const c_char, out: *mut *mut SlGraph) -> SlStatus {
    guard(|| {
        let g = spreadlab::io::read_sgraph(&path_arg(path)?)?;
        put(out, Box::into_raw(Box::new(SlGraph(g))), "out")
    })
}

/// # Safety
/// `graph` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_write(graph: *const SlGraph, path: *const c_char) -> SlStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        Ok(spreadlab::io::write_sgraph(&g.0, &path_arg(path)?)?)
    })
}

/// Release a graph. NULL is ignored.
///
/// # Safety
/// `graph` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_free(graph: *mut SlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle; the outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_size(graph: *const SlGraph, nodes: *mut usize, edges: *mut usize) -> SlStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        put(nodes, g.0.n(), "nodes")?;
        put(edges, g.0.m(), "edges")
    })
}

/// Degree of every node.
///
/// # Safety
/// `buf` must hold `cap` values; `written` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_degrees(
    graph: *const SlGraph,
    buf: *mut usize,
    cap: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| fill(&deref(graph, "graph")?.0.degrees(), buf, cap, written))
}

/// Degree-preserving switch-chain randomization into a new handle.
///
/// # Safety
/// `graph` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_rewire(
    graph: *const SlGraph,
    sweeps: usize,
    seed: u64,
    out: *mut *mut SlGraph,
) -> SlStatus {
    guard(|| {
        let r = switch_rewire(&deref(graph, "graph")?.0, sweeps, seed)?;
        put(out, Box::into_raw(Box::new(SlGraph(r))), "out")
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlPenaltyBase {
    Weight = 0,
    Degree = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlPenalty {
    pub mu: f64,
    pub nu: f64,
    pub zeta: f64,
    pub beta: f64,
    pub base: SlPenaltyBase,
}

/// One spreading run from `source` with costs drawn from `seed`.
///
/// # Safety
/// `graph` must be a live handle, `penalty` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_spread_run(
    graph: *const SlGraph,
    penalty: *const SlPenalty,
    source: usize,
    seed: u64,
    out: *mut *mut SlSpread,
) -> SlStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        let p = deref(penalty, "penalty")?;
        let base = match p.base {
            SlPenaltyBase::Weight => PenaltyBase::Weight,
            SlPenaltyBase::Degree => PenaltyBase::Degree,
        };
        let params = PenaltyParams::with_nu(p.mu, p.nu, p.zeta, p.beta, base)?;
        let r = spread_from(g, &assign_costs(g, &params, seed)?, source)?;
        put(out, Box::into_raw(Box::new(SlSpread(r))), "out")
    })
}

/// Release a spreading result. NULL is ignored.
///
/// # Safety
/// `spread` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_spread_free(spread: *mut SlSpread) {
    if !spread.is_null() {
        drop(Box::from_raw(spread));
    }
}

/// Infection time of every node, `INFINITY` when never reached.
///
/// # Safety
/// `buf` must hold `cap` values; `written` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl_spread_times(
    spread: *const SlSpread,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| fill(&deref(spread, "spread")?.0.times, buf, cap, written))
}

/// Reached nodes in infection order.
///
/// # Safety
/// `buf` must hold `cap` values; `written` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl_spread_order(
    spread: *const SlSpread,
    buf: *mut u32,
    cap: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| fill(&deref(spread, "spread")?.0.order, buf, cap, written))
}

/// Epidemic curve samples: `counts[k]` infections by `times[k]`.
///
/// # Safety
/// Both buffers must hold `cap` values; `written` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl_spread_curve(
    spread: *const SlSpread,
    counts: *mut usize,
    times: *mut f64,
    cap: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| {
        let c = epidemic_curve(&deref(spread, "spread")?.0)?;
        let (cs, ts): (Vec<usize>, Vec<f64>) = c.samples.into_iter().unzip();
        fill(&cs, counts, cap, written)?;
        fill(&ts, times, cap, written)
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlModelPoint {
    pub d: usize,
    pub tau: f64,
    pub alpha: f64,
    pub mu: f64,
    pub zeta: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlPhase {
    Explosive = 0,
    QuasiExponential = 1,
    Polynomial = 2,
    Geometric = 3,
}

/// Growth class; absent exponents are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlPhaseReport {
    pub phase: SlPhase,
    /// `'A'` to `'G'`.
    pub region: c_char,
    pub phi: f64,
    pub delta: f64,
    pub psi: f64,
    pub eta_star: f64,
    pub s_star: f64,
    pub boundary: bool,
    pub upper_bound_only: bool,
}

/// # Safety
/// `point` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_classify(point: *const SlModelPoint, tol: f64, out: *mut SlPhaseReport) -> SlStatus {
    guard(|| {
        let p = deref(point, "point")?;
        let r = classify(&ModelPoint::new(p.d, p.tau, p.alpha, p.mu, p.zeta)?, tol);
        let nan = |x: Option<f64>| x.unwrap_or(f64::NAN);
        let report = SlPhaseReport {
            phase: match r.phase {
                Phase::Explosive => SlPhase::Explosive,
                Phase::QuasiExponential => SlPhase::QuasiExponential,
                Phase::Polynomial => SlPhase::Polynomial,
                Phase::Geometric => SlPhase::Geometric,
            },
            region: r.region.letter() as c_char,
            phi: nan(r.phi),
            delta: nan(r.delta),
            psi: nan(r.psi),
            eta_star: nan(r.eta_star),
            s_star: nan(r.s_star),
            boundary: r.boundary,
            upper_bound_only: r.upper_bound_only,
        };
        put(out, report, "out")
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlHillEstimate {
    pub kappa: usize,
    pub gamma_hat: f64,
    pub tau_hat: f64,
}

/// Hill estimate with plateau-selected `kappa`.
///
/// # Safety
/// `values` must hold `len` readable values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_hill_select(values: *const f64, len: usize, out: *mut SlHillEstimate) -> SlStatus {
    guard(|| {
        if values.is_null() && len > 0 {
            return Err(null("values"));
        }
        let sample = if len == 0 { &[][..] } else { std::slice::from_raw_parts(values, len) };
        let r = select_kappa(sample)?;
        put(
            out,
            SlHillEstimate {
                kappa: r.kappa,
                gamma_hat: r.gamma_hat,
                tau_hat: r.tau_hat,
            },
            "out",
        )
    })
}

/// Predicted edges per node (counted from both ends) with length in `[l1, l2]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_edge_tail(
    d: usize,
    tau: f64,
    alpha: f64,
    c: f64,
    l1: f64,
    l2: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let p = edge_tail_theory(&TailModel::new(d, tau, alpha, c)?, l1, l2, None)?;
        put(out, p.predicted, "out")
    })
}
