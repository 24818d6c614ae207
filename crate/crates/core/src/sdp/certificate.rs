use super::general::{GeneralSdp, LinearPiece};
use super::{GeneralSolution, SolveStatus};
use crate::error::{Error, Result};
use crate::qops::{CMatrix, HermitianOperator};

/// Dual witness for an upper bound on `‖X‖_{S(k)}` or `‖X‖_C`.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Dual objective value.
    pub lambda: f64,
    /// `Z = Σ_j (id ⊗ Φ_j†)(Y_j)`, built from PSD dual blocks.
    pub z: HermitianOperator,
    /// `λ_max(X + Z)`, an upper bound valid for any PSD dual blocks.
    pub certified_upper: f64,
}

/// `Z` and `λ_max(X + Z)` from the dual blocks of the lifted-map constraints.
///
/// Works for any solver status as long as the dual blocks are PSD.
pub fn certificate_from_duals(p: &GeneralSdp, sol: &GeneralSolution) -> Certificate {
    let d = p.dim();
    let mut z = CMatrix::zeros(d, d);
    for (c, y) in p.constraints().iter().zip(&sol.duals) {
        if let LinearPiece::Lifted { .. } = c.piece {
            // the constraint carries scale −1, the witness uses +Φ†
            z -= c.piece.adjoint_apply(y.matrix());
        }
    }
    let z = HermitianOperator::hermitian_part(&z);
    let certified_upper = p.objective().add(&z).expect("same dimension").max_eigenvalue();
    Certificate { lambda: sol.result.dual_obj, z, certified_upper }
}

/// The dual certificate of an optimally solved S(k) or cone program.
pub fn extract_certificate(p: &GeneralSdp, sol: &GeneralSolution) -> Result<Certificate> {
    if sol.result.status != SolveStatus::Optimal {
        return Err(Error::Solver(sol.result.status));
    }
    Ok(certificate_from_duals(p, sol))
}
