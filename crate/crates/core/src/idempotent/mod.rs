//! Idempotents with prescribed diagonal, with or without a prescribed range.

mod construct;
mod range;
mod rigidity;

pub use construct::construct_idempotent_with_diagonal;
pub use range::{idempotent_with_range_and_diagonal, range_diagonal_feasible};
pub use rigidity::{gamma_bound, rigidity_check, GammaBound};

use crate::config::ToleranceConfig;
use crate::diagonal::{near_integer, DiagonalVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityReason {
    Zero,
    Identity,
    IntegerTraceInRange,
    TraceNotInteger,
    TraceOutOfRange,
    /// Every block trace equals the rank of the block.
    BlockTracesMatch,
    /// Indices of the blocks whose trace differs from their rank.
    BlockMismatch(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub reason: FeasibilityReason,
}

impl FeasibilityReport {
    fn yes(reason: FeasibilityReason) -> Self {
        Self { feasible: true, reason }
    }

    fn no(reason: FeasibilityReason) -> Self {
        Self { feasible: false, reason }
    }
}

/// Whether `d` is the diagonal of some idempotent: `d = 0`, `d = 1`, or
/// `Tr d` an integer in `1..n`.
pub fn diagonal_feasible(d: &DiagonalVector, tol: &ToleranceConfig) -> FeasibilityReport {
    let t = tol.integrality_tol;
    let n = d.len();
    if d.entries().iter().all(|z| z.norm() <= t) {
        return FeasibilityReport::yes(FeasibilityReason::Zero);
    }
    if d.entries().iter().all(|z| (z - 1.0).norm() <= t) {
        return FeasibilityReport::yes(FeasibilityReason::Identity);
    }
    match near_integer(d.trace(), t) {
        None => FeasibilityReport::no(FeasibilityReason::TraceNotInteger),
        Some(k) if k >= 1 && (k as usize) < n => FeasibilityReport::yes(FeasibilityReason::IntegerTraceInRange),
        Some(_) => FeasibilityReport::no(FeasibilityReason::TraceOutOfRange),
    }
}
