use crate::config::ToleranceConfig;
use crate::diagonal::{expectation, DiagonalVector};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_tol, real, Field, Lu, Matrix, C64, ZERO};

/// Range projection `[q] = q(q + q* − id)^{-1}` of an idempotent.
pub fn range_projection(q: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    let n = q.ensure_square()?;
    let residual = q.idempotent_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotIdempotent { residual });
    }
    let pencil = &(q + &q.adjoint()) - &Matrix::identity(n);
    let lu = Lu::new(&pencil).map_err(|_| Error::SingularPencil)?;
    let p = q * &lu.inverse();
    Ok(p.hermitian_part().into_field(q.field()))
}

/// Linear system for diagonal `c` with `E(p·c·p^⊥) = rhs`.
#[derive(Debug, Clone)]
pub struct CompressionSystem {
    pub laplacian: Matrix,
    pub rhs: DiagonalVector,
}

/// `M[i][j] = δ_ij·p[i,i] − |p[i,j]|²`, the matrix of `c ↦ E(p·c·p^⊥)`.
pub fn expectation_compression_matrix(p: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    let n = p.ensure_square()?;
    let residual = p.projection_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    Ok(laplacian_unchecked(p, n))
}

fn laplacian_unchecked(p: &Matrix, n: usize) -> Matrix {
    Matrix::from_fn(n, n, Field::Real, |i, j| {
        let diag = if i == j { p[(i, i)].re } else { 0.0 };
        real(diag - p[(i, j)].norm_sqr())
    })
}

impl CompressionSystem {
    pub fn new(p: &Matrix, d: &DiagonalVector, tol: &ToleranceConfig) -> Result<Self> {
        let laplacian = expectation_compression_matrix(p, tol)?;
        let rhs = d.sub(&expectation(p));
        Ok(Self { laplacian, rhs })
    }

    /// Minimum-norm `c` with `M·c = rhs`, treating the `kernel_dim` smallest
    /// eigenvalues as the kernel. The remaining spectrum must stay above
    /// `1e-10·‖M‖` and the residual below `tol`.
    pub fn solve(&self, kernel_dim: usize, tol: f64) -> Result<Vec<C64>> {
        let m = &self.laplacian;
        let n = m.rows();
        let rhs = self.rhs.entries();
        if kernel_dim >= n {
            let residual = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if residual > tol {
                return Err(Error::SolverBreakdown { residual });
            }
            return Ok(vec![ZERO; n]);
        }
        let eig = hermitian_eig_tol(m, 1e-8)?;
        let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let smallest = eig.values[kernel_dim];
        if smallest < 1e-10 * scale || scale == 0.0 {
            return Err(Error::SolverBreakdown { residual: smallest });
        }
        let mut c = vec![ZERO; n];
        for (k, &l) in eig.values.iter().enumerate().skip(kernel_dim) {
            let v = eig.vectors.column(k);
            let coef: C64 = v.iter().zip(rhs).map(|(a, b)| a.conj() * b).sum::<C64>() / l;
            for (ci, vi) in c.iter_mut().zip(&v) {
                *ci += coef * vi;
            }
        }
        let mc = m.mul_vec(&c);
        let residual = mc.iter().zip(rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if residual > tol {
            return Err(Error::SolverBreakdown { residual });
        }
        Ok(c)
    }
}

/// `p + p·c·p^⊥` for a diagonal `c`.
pub fn affine_lift(p: &Matrix, c: &[C64]) -> Matrix {
    let n = p.rows();
    let perp = &Matrix::identity(n) - p;
    let pc = Matrix::from_fn(n, n, Field::Complex, |i, j| p[(i, j)] * c[j]);
    let field = p.field().join(c.iter().fold(Field::Real, |f, z| f.join(Field::of_scalar(*z))));
    (p + &(&pc * &perp)).into_field(field)
}
