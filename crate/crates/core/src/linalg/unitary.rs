//! Spectral logarithm of unitary matrices and the one-parameter paths
//! `t ↦ exp(t·log u)` joining the identity to `u`.

use std::f64::consts::PI;

use super::eigen::{hermitian_eig_tol, orthonormal_basis};
use super::matrix::{outer, Field, Matrix, C64, I};
use crate::error::{Error, Result};

/// Mixing weights tried when diagonalizing `Re u + β·Im u`.
const MIXING: [f64; 6] = [0.618_033_988_7, 1.324_717_957_2, 0.414_213_562_4, 2.718_281_828_5, 0.301_029_995_7, 1.732_050_807_6];
/// Eigenvalues within this (chordal) distance of −1 are treated as −1.
const MINUS_ONE_TOL: f64 = 1e-9;

/// Eigendecomposition `u = V·diag(e^{iθ})·V*` of a unitary, with θ ∈ (−π, π].
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    pub angles: Vec<f64>,
    pub vectors: Matrix,
}

pub fn unitary_residual(u: &Matrix) -> f64 {
    (&u.adjoint() * u).dist(&Matrix::identity(u.rows()))
}

/// Diagonalize a unitary through the commuting Hermitian pair
/// `H = (u + u*)/2`, `K = (u − u*)/(2i)`: eigenvectors of `H + βK` for a
/// generic β diagonalize `u`; the result is checked and β retried otherwise.
pub fn unitary_eig(u: &Matrix, tol: f64) -> Result<UnitaryEig> {
    let n = u.ensure_square()?;
    let res = unitary_residual(u);
    if res > tol {
        return Err(Error::InvalidArgument(format!("matrix is not unitary (residual {res:.3e})")));
    }
    let ustar = u.adjoint();
    let h = (u + &ustar).scale_real(0.5);
    let k = (u - &ustar).scale(C64::new(0.0, -0.5));
    let mut best: Option<(f64, UnitaryEig)> = None;
    for beta in MIXING {
        let m = (&h + &k.scale_real(beta)).hermitian_part();
        let eig = hermitian_eig_tol(&m, 1e-6)?;
        let v = eig.vectors;
        let d = &(&v.adjoint() * u) * &v;
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += d[(i, j)].norm_sqr();
                }
            }
        }
        let off = off.sqrt();
        let angles = (0..n)
            .map(|i| {
                let z = d[(i, i)];
                let a = z.im.atan2(z.re);
                if a <= -PI + 1e-15 {
                    PI
                } else {
                    a
                }
            })
            .collect();
        let cand = UnitaryEig { angles, vectors: v };
        if off <= 1e-10 {
            return Ok(cand);
        }
        if best.as_ref().is_none_or(|(o, _)| off < *o) {
            best = Some((off, cand));
        }
    }
    match best {
        Some((off, cand)) if off <= 1e-7 => Ok(cand),
        Some((off, _)) => Err(Error::NoConvergence { off }),
        None => unreachable!(),
    }
}

/// Precomputed logarithm of a unitary for evaluating `u_t = exp(t·log u)`.
///
/// Over C the principal logarithm is used. Over R (det u = +1) conjugate
/// eigenvalue pairs are combined so every `u_t` is real; the −1 eigenspace,
/// which always has even dimension in SO(n), is split into planes rotated
/// by angle tπ.
#[derive(Debug, Clone)]
pub struct UnitaryLog {
    n: usize,
    field: Field,
    projectors: Vec<(f64, Matrix)>,
    half_turn: Option<(Matrix, Matrix)>,
}

impl UnitaryLog {
    pub fn new(u: &Matrix, tol: f64) -> Result<Self> {
        let n = u.ensure_square()?;
        let field = u.field();
        let eig = unitary_eig(u, tol)?;
        let mut projectors = Vec::with_capacity(n);
        let mut minus_one: Vec<Vec<C64>> = Vec::new();
        for (j, &theta) in eig.angles.iter().enumerate() {
            let v = eig.vectors.column(j);
            let near_minus_one = (C64::from_polar(1.0, theta) + 1.0).norm() < MINUS_ONE_TOL;
            if field == Field::Real && near_minus_one {
                minus_one.push(v);
            } else {
                projectors.push((theta, outer(&v, &v)));
            }
        }
        let mut half_turn = None;
        if !minus_one.is_empty() {
            if minus_one.len() % 2 == 1 {
                return Err(Error::WrongComponent);
            }
            // real orthonormal basis of the −1 eigenspace
            let p = minus_one
                .iter()
                .fold(Matrix::zeros(n, n), |acc, v| &acc + &outer(v, v))
                .into_field(Field::Real);
            let basis = orthonormal_basis(n, &p.columns(), 1e-6);
            if basis.len() != minus_one.len() {
                return Err(Error::NoConvergence { off: 1.0 });
            }
            let mut proj = Matrix::zeros(n, n);
            let mut gen = Matrix::zeros(n, n);
            for pair in basis.chunks(2) {
                let (x, y) = (&pair[0], &pair[1]);
                proj = &proj + &(&outer(x, x) + &outer(y, y));
                gen = &gen + &(&outer(y, x) - &outer(x, y));
            }
            half_turn = Some((proj.into_field(Field::Real), gen.into_field(Field::Real)));
        }
        Ok(Self {
            n,
            field,
            projectors,
            half_turn,
        })
    }

    pub fn angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self.projectors.iter().map(|(t, _)| *t).collect();
        if let Some((p, _)) = &self.half_turn {
            let k = p.trace().re.round() as usize;
            a.extend(std::iter::repeat_n(PI, k));
        }
        a
    }

    /// `exp(t·log u)`; `at(0) = id`, `at(1) = u`.
    pub fn at(&self, t: f64) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n).into_field(Field::Complex);
        for (theta, proj) in &self.projectors {
            let w = C64::from_polar(1.0, t * theta);
            m = &m + &proj.scale(w);
        }
        if let Some((proj, gen)) = &self.half_turn {
            let (s, c) = (t * PI).sin_cos();
            m = &m + &(&proj.scale_real(c) + &gen.scale_real(s));
        }
        m.into_field(self.field)
    }

    /// The generator `log u` (skew-Hermitian, real skew-symmetric over R).
    pub fn generator(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n).into_field(Field::Complex);
        for (theta, proj) in &self.projectors {
            m = &m + &proj.scale(I * *theta);
        }
        if let Some((_, gen)) = &self.half_turn {
            m = &m + &gen.scale_real(PI);
        }
        m.into_field(self.field)
    }
}

/// `u_t = v·exp(i·t·Θ)·v*` from the spectral decomposition of `u`.
pub fn principal_unitary_log_path(u: &Matrix, t: f64) -> Result<Matrix> {
    Ok(UnitaryLog::new(u, 1e-8)?.at(t))
}

/// `exp(s)` for skew-Hermitian `s`, via the Hermitian matrix `i·s`.
pub fn expm_skew_hermitian(s: &Matrix) -> Result<Matrix> {
    let h = s.scale(I);
    let eig = hermitian_eig_tol(&h.hermitian_part(), 1e-8)?;
    // s = −i·h, exp(s) = Σ e^{−iλ} v v*
    Ok(eig.apply(|l| C64::from_polar(1.0, -l)))
}

/// Real determinant sign of an orthogonal matrix, from the multiplicity of −1.
pub fn orthogonal_det_sign(u: &Matrix) -> Result<f64> {
    let eig = unitary_eig(u, 1e-6)?;
    let minus = eig
        .angles
        .iter()
        .filter(|&&a| (C64::from_polar(1.0, a) + 1.0).norm() < 1e-6)
        .count();
    Ok(if minus % 2 == 0 { 1.0 } else { -1.0 })
}
