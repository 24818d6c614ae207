//! The SDP family behind the norm bounds: problem construction, conversion to a
//! real standard form, an interior-point solver and dual certificates.

mod certificate;
mod general;
mod ipm;
mod standard;

pub use certificate::{certificate_from_duals, extract_certificate, Certificate};
pub use general::{
    build_cone_sdp, build_cone_sdp_with, build_sk_sdp, ConstraintBlock, GeneralSdp, LinearPiece, TraceEncoding,
};
pub use ipm::{solve, SolveResult, SolveStatus, SolverOptions};
pub use standard::{
    to_standard_form, BasisElement, BlockEntry, Parameterization, SparseBlocks, StandardForm, StandardSdp,
    StandardSdpDump,
};

use crate::error::Result;
use crate::qops::HermitianOperator;

/// A solved [`GeneralSdp`] with the primal point and dual blocks mapped back to operators.
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub result: SolveResult,
    /// Primal optimizer `X`.
    pub primal: HermitianOperator,
    /// Dual blocks `Y_j`, one per constraint, followed by the slack `Ψ†(Y) − A` of the `X ⪰ 0` block.
    pub duals: Vec<HermitianOperator>,
}

/// Converts `p` to standard form and solves it.
pub fn solve_general(p: &GeneralSdp, opts: &SolverOptions) -> Result<GeneralSolution> {
    let form = to_standard_form(p)?;
    let result = solve(&form.problem, opts);
    let primal = form.param.operator(&result.x);
    let duals = form.param.complex_blocks(&result.y);
    Ok(GeneralSolution { result, primal, duals })
}
