//! Worst-case reconstruction errors and optimality bounds.
//!
//! For a single dephasing measurement `Q` the decoded error of a state `W` is
//! `Y = (I − A) W A + A W (I − A)` with `A = Ṽ* Q Ṽ`, and its worst-case
//! Hilbert–Schmidt norm depends only on `κ = ‖A‖` provided `A` has a zero
//! eigenvalue (or `κ ≤ 1/2`). [`error_closed_form`] evaluates that formula;
//! [`oracle`] maximizes the error directly over states.

mod bounds;
pub mod oracle;
mod pairs;
mod report;
mod sweep;

pub use bounds::{
    error_closed_form, minimal_bound_printed, optimal_bound_minimal, secondary_bound,
    secondary_kappa, welch_pair_bound, worst_case_state,
};
pub use oracle::{error_brute_force, BruteForceBudget, BruteForceResult, Strategy};
pub use pairs::{pair_norm_via_compression, pair_norms, PairNorm, PairNormTable};
pub use report::{channel_error, minimal_error, pairwise_error, ChannelId, ErrorReport};
pub use sweep::{convex_sweep, ChannelFamily, SweepPoint, SweepReport};

use thiserror::Error;

use crate::encoding::EncodingError;
use crate::numkernel::NumError;
use crate::quantum::QuantumError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("κ = {kappa} lies outside [0, 1]")]
    KappaOutOfRange { kappa: f64 },
    #[error("κ = {kappa} > 1/2 but the operator has no zero eigenvalue")]
    NoKernel { kappa: f64 },
    #[error("invalid parameters: {0}")]
    Parameters(&'static str),
    #[error("d = {d} < 2l = {}: every pair norm equals 2", 2 * l)]
    SaturatedPairRegime { d: usize, l: usize },
    #[error("projections have ranks {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("pairwise analysis requires a uniform encoding")]
    NotUniform,
}
