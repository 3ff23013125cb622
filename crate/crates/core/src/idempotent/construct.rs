use crate::config::ToleranceConfig;
use crate::diagonal::{near_integer, DiagonalVector};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, C64, ONE};

use super::{diagonal_feasible, FeasibilityReason};

/// An idempotent whose diagonal is `d`.
///
/// Trace one: the rank-one matrix with rows constant, `q[i][j] = d[i]`.
/// Otherwise an entry equal to 1 is split off as a direct summand, or two
/// entries are merged into `d_i + d_j − 1` and the smaller solution is
/// conjugated by `σ = [[λ, λ−1], [1, 1]]` acting on the coordinates `i, j`.
pub fn construct_idempotent_with_diagonal(d: &DiagonalVector, tol: &ToleranceConfig) -> Result<Matrix> {
    let report = diagonal_feasible(d, tol);
    if !report.feasible {
        return Err(Error::InfeasibleDiagonal(report.reason));
    }
    let n = d.len();
    let q = match report.reason {
        FeasibilityReason::Zero => Matrix::zeros(n, n),
        FeasibilityReason::Identity => Matrix::identity(n),
        _ => build(d.entries(), tol.integrality_tol),
    };
    Ok(q.into_field(d.field()))
}

fn build(d: &[C64], tol: f64) -> Matrix {
    let n = d.len();
    let k = near_integer(d.iter().sum(), tol).unwrap_or(1);
    if k == 1 {
        return Matrix::from_fn(n, n, Field::Complex, |i, _| d[i]);
    }
    if let Some(i) = d.iter().position(|z| (z - 1.0).norm() <= tol) {
        let others: Vec<usize> = (0..n).filter(|&l| l != i).collect();
        let rest: Vec<C64> = others.iter().map(|&l| d[l]).collect();
        let sub = build(&rest, tol);
        let mut q = embed(&sub, &others, n);
        q[(i, i)] = ONE;
        return q;
    }
    let (i, j) = pivot_pair(d);
    let s = d[i] + d[j] - 2.0;
    let lambda = (d[j] - 1.0) / s;
    let others: Vec<usize> = (0..n).filter(|&l| l != i).collect();
    let rest: Vec<C64> = others
        .iter()
        .map(|&l| if l == j { d[i] + d[j] - 1.0 } else { d[l] })
        .collect();
    let sub = build(&rest, tol);
    let mut q = embed(&sub, &others, n);
    q[(i, i)] = ONE;
    conjugate_sigma(&mut q, i, j, lambda);
    q
}

/// Pair maximizing `|d_i + d_j − 2|`.
fn pivot_pair(d: &[C64]) -> (usize, usize) {
    let n = d.len();
    let mut best = (0, 1, -1.0);
    for i in 0..n {
        for j in i + 1..n {
            let v = (d[i] + d[j] - 2.0).norm();
            if v > best.2 {
                best = (i, j, v);
            }
        }
    }
    (best.0, best.1)
}

fn embed(sub: &Matrix, idx: &[usize], n: usize) -> Matrix {
    let mut q = Matrix::zeros(n, n);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            q.set(ia, ib, sub[(a, b)]);
        }
    }
    q
}

/// `q ← σ q σ⁻¹` with `σ = [[λ, λ−1], [1, 1]]`, `σ⁻¹ = [[1, 1−λ], [−1, λ]]`
/// on coordinates `(i, j)`.
fn conjugate_sigma(q: &mut Matrix, i: usize, j: usize, lambda: C64) {
    let n = q.rows();
    for c in 0..n {
        let (a, b) = (q[(i, c)], q[(j, c)]);
        q.set(i, c, lambda * a + (lambda - 1.0) * b);
        q.set(j, c, a + b);
    }
    for r in 0..n {
        let (a, b) = (q[(r, i)], q[(r, j)]);
        q.set(r, i, a - b);
        q.set(r, j, a * (ONE - lambda) + b * lambda);
    }
}
