use crate::config::{PathOptions, ToleranceConfig};
use crate::diagonal::{minimal_block_decomposition, projection_rank};
use crate::error::{Error, Result};
use crate::linalg::{
    closest_isometry, expm_skew_hermitian, extend_to_unitary, hermitian_eig_tol, polar_partial_isometry, Field,
    Matrix, UnitaryLog, C64,
};
use crate::path::{sample_adaptive, Piece};
use crate::random::{random_skew_hermitian, seeded};

use super::expectation_compression_matrix;

/// Perturbation sizes for the retries after the first curve.
pub(crate) const EPSILONS: [f64; 7] = [0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2];

/// `p_t = V_t·p0·V_t*` with `V_t = exp(t·log V)`.
#[derive(Debug, Clone)]
pub struct GrassmannCurve {
    p0: Matrix,
    log: UnitaryLog,
}

impl GrassmannCurve {
    pub fn new(p0: &Matrix, v: &Matrix) -> Result<Self> {
        Ok(Self {
            p0: p0.clone().into_field(Field::Complex),
            log: UnitaryLog::new(&v.clone().into_field(Field::Complex), 1e-8)?,
        })
    }

    pub fn at(&self, t: f64) -> Matrix {
        let v = self.log.at(t);
        (&(&v * &self.p0) * &v.adjoint()).hermitian_part()
    }
}

fn basis_pair(p: &Matrix) -> Result<(Matrix, Matrix)> {
    let eig = hermitian_eig_tol(&p.hermitian_part(), 1e-6)?;
    Ok((eig.vectors_where(|l| l > 0.5), eig.vectors_where(|l| l <= 0.5)))
}

/// Unitary `w` (k×k) closest to aligning basis `from` with basis `to`.
fn procrustes(from: &Matrix, to: &Matrix) -> Result<Matrix> {
    let m = &from.adjoint() * to;
    if m.rows() == 0 {
        return Ok(m);
    }
    match closest_isometry(&m) {
        Ok(w) => Ok(w),
        Err(_) => extend_to_unitary(&polar_partial_isometry(&m, 1e-10)?.isometry, Field::Complex, None),
    }
}

/// Unitary `V` with `V·p0·V* = p1`, range to range and kernel to kernel,
/// with bases aligned so that `V` is close to the identity when `p0 ≈ p1`.
pub fn base_unitary(p0: &Matrix, p1: &Matrix) -> Result<Matrix> {
    let (r0, n0) = basis_pair(p0)?;
    let (r1, n1) = basis_pair(p1)?;
    if r0.cols() != r1.cols() {
        return Err(Error::RankMismatch(r0.cols(), r1.cols()));
    }
    let r1 = &r1 * &procrustes(&r1, &r0)?;
    let n1 = &n1 * &procrustes(&n1, &n0)?;
    let v = &(&r1 * &r0.adjoint()) + &(&n1 * &n0.adjoint());
    closest_isometry(&v)
}

/// Block count 1 and a Laplacian whose nonzero spectrum stays above
/// `1e-10·‖M‖`.
pub fn check_in_omega(p: &Matrix, tol: &ToleranceConfig) -> Result<()> {
    let blocks = minimal_block_decomposition(p, tol.zero_tol).len();
    if blocks != 1 {
        return Err(Error::NotIrreducible { blocks });
    }
    let m = expectation_compression_matrix(p, tol)?;
    if m.rows() < 2 {
        return Ok(());
    }
    let eig = hermitian_eig_tol(&m, 1e-8)?;
    let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if eig.values[1] < 1e-10 * scale || scale == 0.0 {
        return Err(Error::SolverBreakdown { residual: eig.values[1] });
    }
    Ok(())
}

/// Candidate curves from `p0` to `p1`: the base unitary first, then
/// `V·exp(εS)` with `S` skew-Hermitian commuting with `p0`.
pub(crate) fn candidate_curves(p0: &Matrix, p1: &Matrix, seed: u64) -> Result<impl Iterator<Item = Result<GrassmannCurve>>> {
    let v = base_unitary(p0, p1)?;
    let p0 = p0.clone().into_field(Field::Complex);
    let n = p0.rows();
    let mut rng = seeded(seed);
    let first = std::iter::once(GrassmannCurve::new(&p0, &v));
    let rest = EPSILONS.into_iter().map(move |eps| {
        let id = Matrix::identity(n);
        let perp = &id - &p0;
        let a = random_skew_hermitian(&mut rng, n, Field::Complex);
        let b = random_skew_hermitian(&mut rng, n, Field::Complex);
        let s = &(&(&p0 * &a) * &p0) + &(&(&perp * &b) * &perp);
        let w = &v * &expm_skew_hermitian(&s.scale(C64::new(eps, 0.0)))?;
        GrassmannCurve::new(&p0, &w)
    });
    Ok(first.chain(rest))
}

/// Sampled path of projections from `p0` to `p1` staying in the set of
/// projections with a single block, retried with randomized curves.
pub fn grassmann_path_in_omega(p0: &Matrix, p1: &Matrix, seed: u64, opts: &PathOptions) -> Result<Piece> {
    let tol = &opts.tol;
    for p in [p0, p1] {
        let residual = p.projection_residual();
        if residual > tol.residual_tol {
            return Err(Error::NotProjection { residual });
        }
    }
    let (k0, k1) = (projection_rank(p0)?, projection_rank(p1)?);
    if k0 != k1 {
        return Err(Error::RankMismatch(k0, k1));
    }
    for p in [p0, p1] {
        let blocks = minimal_block_decomposition(p, tol.zero_tol).len();
        if blocks != 1 {
            return Err(Error::NotIrreducible { blocks });
        }
    }
    if p0.dist(p1) <= tol.residual_tol {
        return Ok(Piece::Sampled {
            samples: vec![(0.0, p0.clone()), (1.0, p0.clone())],
        });
    }
    let mut attempts = 0;
    for curve in candidate_curves(p0, p1, seed)? {
        attempts += 1;
        let curve = curve?;
        let piece = sample_adaptive(
            |t| {
                let p = curve.at(t);
                check_in_omega(&p, tol)?;
                Ok(p)
            },
            opts,
        );
        match piece {
            Ok(Piece::Sampled { mut samples }) => {
                let last = samples.len() - 1;
                samples[0].1 = p0.clone().into_field(Field::Complex);
                samples[last].1 = p1.clone().into_field(Field::Complex);
                return Ok(Piece::Sampled { samples });
            }
            Ok(_) => unreachable!(),
            Err(Error::NotIrreducible { .. } | Error::SolverBreakdown { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenericityExhausted { attempts })
}
