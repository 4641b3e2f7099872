//! Closed-form growth classes, their exponents, a numeric cross-check of the
//! exponent optimisation, and large-`n` edge-length counts.

mod diagram;
mod edge_tail;
mod lambda;
mod phase;

pub use diagram::{phase_diagram_grid, Axis, AxisRange, DiagramCell};
pub use edge_tail::{
    capped_prefactor, edge_tail_integral, edge_tail_theory, mean_kernel, surface_area, EdgeTailPrediction,
    TailModel, TailRegime,
};
pub use lambda::{lambda_search, lambda_value, LambdaSearchResult};
pub use phase::{
    classify, compute_phi, compute_psi, compute_s_star, eta_star, ModelPoint, Phase, PhaseReport, PhiResult,
    PsiResult, Region,
};
