use crate::config::ToleranceConfig;
use crate::diagonal::{expectation, near_integer, DiagonalVector};
use crate::error::{Error, Result};
use crate::idempotent_paths::range_projection;
use crate::linalg::Matrix;

use super::range_diagonal_feasible;

/// Distance from the non-integral subset sums of `d` to the integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBound {
    pub gamma: f64,
    pub s_has_nonintegers: bool,
    /// `gamma / max(1, ⌊n/2⌋)`.
    pub bound: f64,
}

const MAX_GAMMA_DIM: usize = 24;

pub fn gamma_bound(d: &DiagonalVector, tol: &ToleranceConfig) -> Result<GammaBound> {
    let n = d.len();
    if !d.is_real(tol.integrality_tol) {
        return Err(Error::ComplexUnsupported);
    }
    if n > MAX_GAMMA_DIM {
        return Err(Error::TooLarge { n });
    }
    let x = d.real_parts();
    let (lo, hi) = x.split_at(n / 2);
    let (a, b) = (subset_sums(lo), subset_sums(hi));
    let mut gamma = f64::INFINITY;
    for &s in &a {
        for &t in &b {
            let v = s + t;
            let dist = (v - v.round()).abs();
            if dist > tol.integrality_tol && dist < gamma {
                gamma = dist;
            }
        }
    }
    let s_has_nonintegers = gamma.is_finite();
    if !s_has_nonintegers {
        gamma = 1.0;
    }
    Ok(GammaBound {
        gamma,
        s_has_nonintegers,
        bound: gamma / (n / 2).max(1) as f64,
    })
}

fn subset_sums(x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    for &v in x {
        let more: Vec<f64> = out.iter().map(|s| s + v).collect();
        out.extend(more);
    }
    out
}

/// Feasibility of `d` for the range of `q`, asserting the distance bound.
///
/// When `‖E(q) − d‖_∞` is below the bound of [`gamma_bound`] and `Tr d`
/// equals `rank q`, infeasibility is reported as [`Error::RigidityViolated`].
pub fn rigidity_check(q: &Matrix, d: &DiagonalVector, tol: &ToleranceConfig) -> Result<bool> {
    let residual = q.idempotent_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotIdempotent { residual });
    }
    let g = gamma_bound(d, tol)?;
    let p = range_projection(q, tol)?;
    let feasible = range_diagonal_feasible(&p, d, tol)?.feasible;
    let distance = expectation(q).dist_inf(d);
    let rank = q.trace().re.round();
    let same_trace = near_integer(d.trace(), tol.integrality_tol) == Some(rank as i64);
    if distance < g.bound && same_trace && !feasible {
        return Err(Error::RigidityViolated { distance, bound: g.bound });
    }
    Ok(feasible)
}
