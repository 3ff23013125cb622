//! Polar decomposition, partial isometries and their unitary extensions.

use super::eigen::{gram_schmidt_ordered, projection_range_basis, singular_pairs};
use super::lu::det;
use super::matrix::{outer, vec_norm, Field, Matrix, C64};
use crate::error::{Error, Result};

/// `b = isometry · abs`, with `isometry` a partial isometry from
/// `(ker b)^⊥` onto `(ker b*)^⊥` and `abs = |b| = (b*b)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub isometry: Matrix,
    pub abs: Matrix,
    pub ker_dim: usize,
    pub coker_dim: usize,
}

/// Polar decomposition with singular values `≤ zero_tol` treated as zero.
pub fn polar_partial_isometry(b: &Matrix, zero_tol: f64) -> Result<Polar> {
    let (m, n) = b.shape();
    let field = b.field();
    let (sv, v) = singular_pairs(b)?;
    let mut isometry = Matrix::zeros(m, n).into_field(field);
    let mut abs = Matrix::zeros(n, n).into_field(field);
    let mut initial: Vec<Vec<C64>> = Vec::new();
    let mut finals: Vec<Vec<C64>> = Vec::new();
    for (j, &s) in sv.iter().enumerate() {
        let vj = v.column(j);
        abs = &abs + &outer(&vj, &vj).scale_real(s);
        if s > zero_tol {
            let w: Vec<C64> = b.mul_vec(&vj).into_iter().map(|z| z / s).collect();
            initial.push(vj);
            finals.push(w);
        }
    }
    let rank = initial.len();
    // re-orthonormalize the final vectors; they are orthogonal up to eps/σ
    if let Some(finals) = gram_schmidt_ordered(&finals, 1e-6) {
        for (vj, wj) in initial.iter().zip(&finals) {
            isometry = &isometry + &outer(wj, vj);
        }
    } else {
        for vj in &initial {
            let bj = b.mul_vec(vj);
            let s = vec_norm(&bj);
            let w: Vec<C64> = bj.into_iter().map(|z| z / s).collect();
            isometry = &isometry + &outer(&w, vj);
        }
    }
    Ok(Polar {
        isometry: isometry.into_field(field),
        abs: abs.hermitian_part().into_field(field),
        ker_dim: n - rank,
        coker_dim: m - rank,
    })
}

/// Orthonormal basis of the orthogonal complement of the range of `proj`
/// (a projection): eigenvectors of `id − proj` with eigenvalue above 1/2.
pub fn complement_basis(proj: &Matrix) -> Result<Vec<Vec<C64>>> {
    let n = proj.rows();
    let resid = &Matrix::identity(n) - proj;
    Ok(projection_range_basis(&resid.hermitian_part())?.columns())
}

/// Extend a partial isometry `u` to a unitary by sending the i-th vector of
/// `domain` (an orthonormal basis of `ker u`) to the i-th vector of
/// `codomain` (an orthonormal basis of `(ran u)^⊥`).
pub fn extend_partial_isometry(u: &Matrix, domain: &[Vec<C64>], codomain: &[Vec<C64>]) -> Result<Matrix> {
    if domain.len() != codomain.len() {
        return Err(Error::DimensionMismatch {
            ker: domain.len(),
            coker: codomain.len(),
        });
    }
    let mut out = u.clone();
    for (k, f) in domain.iter().zip(codomain) {
        out = &out + &outer(f, k);
    }
    Ok(out)
}

/// Unitary (orthogonal, when `field` is real) agreeing with the partial
/// isometry `u` on its initial space.
///
/// With `det_target` (real field only) the kernel pairing is flipped on one
/// vector when needed so that `det = det_target`.
pub fn extend_to_unitary(u: &Matrix, field: Field, det_target: Option<f64>) -> Result<Matrix> {
    u.ensure_square()?;
    let initial = &u.adjoint() * u;
    let final_ = u * &u.adjoint();
    let ker = complement_basis(&initial)?;
    let coker = complement_basis(&final_)?;
    if ker.len() != coker.len() {
        return Err(Error::DimensionMismatch {
            ker: ker.len(),
            coker: coker.len(),
        });
    }
    let w = extend_partial_isometry(u, &ker, &coker)?.into_field(field);
    match det_target {
        None => Ok(w),
        Some(_) if field == Field::Complex => Err(Error::InvalidArgument(
            "determinant targets apply to real matrices only".into(),
        )),
        Some(target) => fix_determinant(w, &ker, &coker, target),
    }
}

/// Flip one kernel pair of `w` when `det w` has the wrong sign.
pub(crate) fn fix_determinant(w: Matrix, ker: &[Vec<C64>], coker: &[Vec<C64>], target: f64) -> Result<Matrix> {
    let d = det(&w)?.re;
    if d.signum() == target.signum() {
        return Ok(w);
    }
    match (ker.last(), coker.last()) {
        (Some(k), Some(f)) => {
            let flip = outer(f, k).scale_real(2.0);
            Ok((&w - &flip).into_field(Field::Real))
        }
        _ => Err(Error::DetUnreachable),
    }
}

/// Closest isometry `m·(m*m)^{-1/2}` to a full-column-rank matrix.
pub fn closest_isometry(m: &Matrix) -> Result<Matrix> {
    let p = polar_partial_isometry(m, 1e-12)?;
    if p.ker_dim > 0 {
        return Err(Error::Singular);
    }
    Ok(p.isometry)
}
