//! Paths of projections with a fixed diagonal.

mod canonical;
mod m4;

pub use canonical::{
    amplified_path_to_canonical, bridge_projection, canonical_projection, connect_half_projections,
    half_diagonal_path_to_canonical, p1_form,
};
pub use m4::{m4_family, m4_real_extreme, m4_real_extreme_path, M4Family};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_tol, Matrix};

/// The three relations tying together the blocks of a projection
/// `[[a, b], [b*, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockLaw {
    /// `0 ≤ a ≤ id` and `0 ≤ d ≤ id`.
    Contraction,
    /// `b·b* = a(id − a)` and `b*·b = d(id − d)`.
    Modulus,
    /// `a·b = b(id − d)`.
    Intertwining,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    pub a: Matrix,
    pub b: Matrix,
    pub d: Matrix,
    pub split: usize,
}

impl BlockForm {
    pub fn assemble(&self) -> Matrix {
        Matrix::block2(&self.a, &self.b, &self.b.adjoint(), &self.d)
    }
}

/// Split a projection into blocks along `K = span(e_0..e_{split-1})`.
pub fn block_form(p: &Matrix, split: usize, tol: &ToleranceConfig) -> Result<BlockForm> {
    let n = p.ensure_square()?;
    if split == 0 || split >= n {
        return Err(Error::InvalidArgument(format!("split {split} must lie in 1..{n}")));
    }
    let residual = p.projection_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    let a = p.submatrix(0..split, 0..split);
    let b = p.submatrix(0..split, split..n);
    let d = p.submatrix(split..n, split..n);
    let t = tol.residual_tol;
    for m in [&a, &d] {
        let eig = hermitian_eig_tol(&m.hermitian_part(), 1e-6)?;
        let lo = eig.values.first().copied().unwrap_or(0.0);
        let hi = eig.values.last().copied().unwrap_or(0.0);
        if lo < -t || hi > 1.0 + t {
            return Err(Error::BlockLawViolated(BlockLaw::Contraction));
        }
    }
    let ida = Matrix::identity(split);
    let idd = Matrix::identity(n - split);
    let m1 = (&(&b * &b.adjoint()) - &(&a * &(&ida - &a))).norm_fro();
    let m2 = (&(&b.adjoint() * &b) - &(&d * &(&idd - &d))).norm_fro();
    if m1.max(m2) > t {
        return Err(Error::BlockLawViolated(BlockLaw::Modulus));
    }
    if (&(&a * &b) - &(&b * &(&idd - &d))).norm_fro() > t {
        return Err(Error::BlockLawViolated(BlockLaw::Intertwining));
    }
    Ok(BlockForm { a, b, d, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Field, I};

    #[test]
    fn canonical_blocks_are_halves() {
        let q = canonical_projection(2, std::f64::consts::FRAC_PI_4);
        let bf = block_form(&q, 2, &ToleranceConfig::default()).unwrap();
        let half = Matrix::identity(2).scale_real(0.5);
        assert_eq!((bf.a.clone(), bf.b.clone(), bf.d.clone()), (half.clone(), half.clone(), half));
        assert_eq!(bf.assemble(), q);
    }

    #[test]
    fn diagonal_projection_blocks() {
        let bf = block_form(&Matrix::diag_real(&[1.0, 0.0]), 1, &ToleranceConfig::default()).unwrap();
        assert_eq!(bf.a, Matrix::identity(1));
        assert_eq!(bf.b, Matrix::zeros(1, 1));
        assert_eq!(bf.d, Matrix::zeros(1, 1));
    }

    #[test]
    fn p1_form_blocks() {
        let u = Matrix::diag(&[I, -I]);
        let p = p1_form(&u, std::f64::consts::FRAC_PI_4);
        let bf = block_form(&p, 2, &ToleranceConfig::default()).unwrap();
        assert!(bf.a.dist(&Matrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!(bf.b.dist(&u.scale_real(0.5)) < 1e-15);
        assert_eq!(p.field(), Field::Complex);
    }

    #[test]
    fn non_projection_rejected() {
        let x = Matrix::real_rows(&[[1.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(block_form(&x, 1, &ToleranceConfig::default()), Err(Error::NotProjection { .. })));
    }
}
