use crate::config::ToleranceConfig;
use crate::diagonal::{block_trace_profile, expectation, minimal_block_decomposition, DiagonalVector};
use crate::error::{Error, Result};
use crate::idempotent_paths::{affine_lift, CompressionSystem};
use crate::linalg::Matrix;

use super::{FeasibilityReason, FeasibilityReport};

/// Whether some idempotent with range projection `p` has diagonal `d`:
/// on every block `f_j` of `p`, `Tr d·f_j = rank p·f_j`.
pub fn range_diagonal_feasible(p: &Matrix, d: &DiagonalVector, tol: &ToleranceConfig) -> Result<FeasibilityReport> {
    let part = minimal_block_decomposition(p, tol.zero_tol);
    let profile = block_trace_profile(d, p, &part, tol)?;
    let bad: Vec<usize> = profile
        .iter()
        .enumerate()
        .filter(|(_, (trace, rank))| (trace - *rank as f64).norm() > tol.integrality_tol)
        .map(|(j, _)| j)
        .collect();
    Ok(if bad.is_empty() {
        FeasibilityReport {
            feasible: true,
            reason: FeasibilityReason::BlockTracesMatch,
        }
    } else {
        FeasibilityReport {
            feasible: false,
            reason: FeasibilityReason::BlockMismatch(bad),
        }
    })
}

/// The idempotent `q = p + p·x·p^⊥` with `E(q) = d` and `x` of minimal
/// Hilbert–Schmidt norm; `x = p·c·p^⊥` for a diagonal `c`.
pub fn idempotent_with_range_and_diagonal(p: &Matrix, d: &DiagonalVector, tol: &ToleranceConfig) -> Result<Matrix> {
    let report = range_diagonal_feasible(p, d, tol)?;
    if !report.feasible {
        return Err(Error::Infeasible(report.reason));
    }
    let blocks = minimal_block_decomposition(p, tol.zero_tol).len();
    let sys = CompressionSystem::new(p, d, tol)?;
    let c = sys.solve(blocks, tol.residual_tol)?;
    let q = affine_lift(p, &c).into_field(p.field().join(d.field()));
    let residual = expectation(&q).dist_inf(d).max(q.idempotent_residual());
    if residual > tol.residual_tol {
        return Err(Error::SolverBreakdown { residual });
    }
    Ok(q)
}
