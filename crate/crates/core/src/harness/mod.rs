//! The constant system behind the multicolour bound, its inequality checks,
//! colouring strategies, and the desk-scale trial runner.

mod coloring;
mod numeric;
mod trial;

pub use coloring::{color_edges, Coloring, ColoringStrategy};
pub use numeric::{
    check_contradiction, check_delta_window, compare_size_bound, compute_params, f_alpha,
    f_alpha_canonical, f_alpha_minus_one, induction_rhs, induction_rhs_log, lambda_of,
    size_bound_log2, taylor_gap, ContradictionReport, DeltaWindow, InductionRhs, RamseyParams,
    SizeBoundComparison,
};
pub use trial::{
    default_jobs, run_batch, run_trial, BatchReport, EmbedOutcome, HostStats, JoinednessOutcome,
    Timings, TrialConfig, TrialReport, THREADS_ENV,
};
