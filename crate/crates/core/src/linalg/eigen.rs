//! Hermitian eigendecomposition by cyclic Jacobi rotations, and the spectral
//! calculus built on it (square roots, ranks, orthonormal bases).

use super::matrix::{inner, real, vec_norm, Field, Matrix, C64, ZERO};
use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass, relative to ‖a‖_F, at which sweeps stop.
const OFF_DIAGONAL_TARGET: f64 = 1e-13;
/// Acceptance level when sweeps stall just above the target.
const OFF_DIAGONAL_ACCEPT: f64 = 1e-11;
const MAX_SWEEPS: usize = 60;

/// `a = vectors · diag(values) · vectors*`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl HermitianEig {
    /// Rebuild `Σ f(λ_i) v_i v_i*`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> Matrix {
        let n = self.values.len();
        let v = &self.vectors;
        let weights: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let mut field = v.field();
        if weights.iter().any(|w| w.im != 0.0) {
            field = Field::Complex;
        }
        Matrix::from_fn(n, n, field, |i, j| {
            (0..n)
                .filter(|&k| weights[k] != ZERO)
                .map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj())
                .sum()
        })
    }

    /// Eigenvectors whose eigenvalue satisfies `pred`, as columns.
    pub fn vectors_where(&self, pred: impl Fn(f64) -> bool) -> Matrix {
        let cols: Vec<Vec<C64>> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &l)| pred(l))
            .map(|(k, _)| self.vectors.column(k))
            .collect();
        Matrix::from_columns(self.vectors.rows(), &cols).into_field(self.vectors.field())
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with `NotHermitian` when `‖a − a*‖_F > tol·max(1, ‖a‖_F)`. The input is
/// symmetrized before rotating, so a small asymmetry is absorbed.
pub fn hermitian_eig_tol(a: &Matrix, tol: f64) -> Result<HermitianEig> {
    let n = a.ensure_square()?;
    let norm = a.norm_fro();
    let residual = a.hermitian_residual();
    if residual > tol * norm.max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let field = a.field();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = Matrix::identity(n).into_field(field);

    let off = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let target = OFF_DIAGONAL_TARGET * norm;
    let mut sweeps = 0;
    loop {
        let o = off(&m);
        if o <= target || norm == 0.0 {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            if o <= OFF_DIAGONAL_ACCEPT * norm {
                break;
            }
            return Err(Error::NoConvergence { off: o / norm });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q, norm);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, field, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// [`hermitian_eig_tol`] with the default residual tolerance 1e-8.
pub fn hermitian_eig(a: &Matrix) -> Result<HermitianEig> {
    hermitian_eig_tol(a, 1e-8)
}

/// One complex Jacobi rotation annihilating m[p,q].
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, norm: f64) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r <= 1e-300 || r <= 1e-18 * norm {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let n = m.rows();
    let phase = apq / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = [[c, s], [-s·conj(phase), c·conj(phase)]] on coordinates (p, q).
    let ph = phase.conj();
    let u_pp = real(c);
    let u_qp = -ph * s;
    let u_pq = real(s);
    let u_qq = ph * c;

    // m ← m·U
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * u_pp + mkq * u_qp;
        m[(k, q)] = mkp * u_pq + mkq * u_qq;
    }
    // m ← U*·m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    // v ← v·U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything below is `NotPsd`.
pub fn psd_sqrt_tol(a: &Matrix, tol: f64) -> Result<Matrix> {
    let eig = hermitian_eig_tol(a, tol)?;
    if let Some(&min) = eig.values.first() {
        if min < -tol * a.norm_fro().max(1.0) {
            return Err(Error::NotPsd { min_eig: min });
        }
    }
    Ok(eig.apply(|l| real(l.max(0.0).sqrt())).into_field(a.field()))
}

pub fn psd_sqrt(a: &Matrix) -> Result<Matrix> {
    psd_sqrt_tol(a, 1e-8)
}

/// Singular values of `a` (descending) with the matching right singular vectors.
///
/// The right vectors come from the eigendecomposition of `a*a`; each singular
/// value is the length `‖a·v‖` rather than the square root of the eigenvalue,
/// which keeps zero singular values at round-off level instead of √eps.
pub(crate) fn singular_pairs(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let gram = &a.adjoint() * a;
    let eig = hermitian_eig_tol(&gram.hermitian_part(), 1e-6)?;
    let k = eig.values.len();
    let mut pairs: Vec<(f64, usize)> = (0..k)
        .map(|j| (vec_norm(&a.mul_vec(&eig.vectors.column(j))), j))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let v = Matrix::from_fn(k, k, eig.vectors.field(), |i, j| eig.vectors[(i, pairs[j].1)]);
    Ok((values, v))
}

pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(singular_pairs(a)?.0)
}

/// Number of singular values above `tol·σ_max` (0 for the zero matrix).
pub fn rank(a: &Matrix, tol: f64) -> Result<usize> {
    let sv = singular_values(a)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

/// Modified Gram–Schmidt with column pivoting. Returns an orthonormal basis
/// (as columns) of the span of `vectors`, dropping directions whose residual
/// falls below `tol` times the largest input norm.
pub fn orthonormal_basis(dim: usize, vectors: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut work: Vec<Vec<C64>> = vectors.to_vec();
    let scale = work.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    while basis.len() < dim && !work.is_empty() {
        let (idx, nrm) = work
            .iter()
            .enumerate()
            .map(|(i, v)| (i, vec_norm(v)))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if nrm <= tol * scale {
            break;
        }
        let mut e = work.swap_remove(idx);
        // second pass against the existing basis for numerical orthogonality
        for b in &basis {
            let c = inner(&e, b);
            for (x, y) in e.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let en = vec_norm(&e);
        if en <= tol * scale {
            continue;
        }
        for x in &mut e {
            *x /= en;
        }
        for w in &mut work {
            let c = inner(w, &e);
            for (x, y) in w.iter_mut().zip(&e) {
                *x -= c * y;
            }
        }
        basis.push(e);
    }
    basis
}

/// Order-preserving modified Gram–Schmidt; `None` if some vector loses more
/// than a `1 − tol` fraction of its length to the earlier ones.
pub fn gram_schmidt_ordered(vectors: &[Vec<C64>], tol: f64) -> Option<Vec<Vec<C64>>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let n0 = vec_norm(v);
        let mut e = v.clone();
        for _ in 0..2 {
            for b in &out {
                let c = inner(&e, b);
                for (x, y) in e.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let en = vec_norm(&e);
        if n0 == 0.0 || en <= tol * n0 {
            return None;
        }
        for x in &mut e {
            *x /= en;
        }
        out.push(e);
    }
    Some(out)
}

/// Orthonormal basis of the range of a (numerical) orthogonal projection,
/// read off from its eigenvectors with eigenvalue above 1/2.
pub fn projection_range_basis(p: &Matrix) -> Result<Matrix> {
    let eig = hermitian_eig_tol(p, 1e-6)?;
    Ok(eig.vectors_where(|l| l > 0.5))
}
