use rand::Rng;

use super::range_projection;
use crate::config::ToleranceConfig;
use crate::diagonal::{expectation, minimal_block_decomposition, BlockPartition, DiagonalProjection};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, C64};
use crate::path::{OperatorPath, PathKind, Piece};
use crate::random::{gaussian_matrix, seeded};

/// One round of the reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStep {
    pub chosen_e: DiagonalProjection,
    pub swapped: bool,
    pub t_used: C64,
    pub commutant_dim_before: usize,
    pub commutant_dim_after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace {
    pub seed: u64,
    pub steps: Vec<ReductionStep>,
    pub final_idempotent: Matrix,
}

const T_GRID: [f64; 4] = [1.0, -1.0, 0.5, 2.0];
const RANDOM_T_TRIES: usize = 8;
const X_DRAWS: usize = 4;

pub(crate) fn check_idempotent(q: &Matrix, tol: &ToleranceConfig) -> Result<usize> {
    let n = q.ensure_square()?;
    let residual = q.idempotent_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotIdempotent { residual });
    }
    Ok(n)
}

pub(crate) fn is_trivial(q: &Matrix, tol: &ToleranceConfig) -> bool {
    let n = q.rows();
    q.norm_fro() <= tol.residual_tol || q.dist(&Matrix::identity(n)) <= tol.residual_tol
}

fn partition_of(q: &Matrix, tol: &ToleranceConfig) -> Result<BlockPartition> {
    Ok(minimal_block_decomposition(&range_projection(q, tol)?, tol.zero_tol))
}

/// Piecewise affine path of idempotents with diagonal `E(q)` from `q` to an
/// idempotent whose range projection has a single block.
///
/// Each round takes the first block `e` of `[q]`, removes the off-diagonal
/// corners `x = e q e^⊥ + e^⊥ q e`, and adds a generic multiple of
/// `y = q̃^⊥ e^⊥ X q̃ e`, which merges `e` with another block.
pub fn reduce_to_irreducible(q: &Matrix, seed: u64, tol: &ToleranceConfig) -> Result<(ReductionTrace, OperatorPath)> {
    let n = check_idempotent(q, tol)?;
    if is_trivial(q, tol) {
        return Err(Error::TrivialIdempotent);
    }
    let mut rng = seeded(seed);
    let mut q = q.clone().into_field(Field::Complex);
    let mut path = OperatorPath::new(PathKind::Idempotent, expectation(&q));
    let mut steps = Vec::new();
    let id = Matrix::identity(n);
    let mut part = partition_of(&q, tol)?;
    while part.len() > 1 {
        if steps.len() >= n {
            return Err(Error::GenericityExhausted { attempts: steps.len() });
        }
        let before = part.len();
        let mut e = part.projection(0);
        let em = e.to_matrix();
        let ep = &id - &em;
        let x = &(&(&em * &q) * &ep) + &(&(&ep * &q) * &em);
        let qt = &q - &x;
        let qt_perp = &id - &qt;
        let mut swapped = false;
        if (&qt * &em).norm_fro() <= tol.zero_tol || (&qt_perp * &ep).norm_fro() <= tol.zero_tol {
            e = e.complement();
            swapped = true;
        }
        let (em, ep) = if swapped { (ep, em) } else { (em, ep) };
        if x.norm_fro() > 0.0 {
            path.push(Piece::Affine { start: q.clone(), end: qt.clone() }, tol.residual_tol)?;
        }
        let left = &qt_perp * &ep;
        let right = &qt * &em;
        let mut found = None;
        'draws: for _ in 0..X_DRAWS {
            let xr = gaussian_matrix(&mut rng, n, n, Field::Complex);
            let y = &(&left * &xr) * &right;
            let ny = y.norm_fro();
            if ny <= tol.zero_tol {
                continue;
            }
            let y = y.scale_real(1.0 / ny);
            let randoms: Vec<f64> = (0..RANDOM_T_TRIES).map(|_| rng.random_range(0.5..=2.0)).collect();
            for t in T_GRID.iter().chain(&randoms) {
                let r = &qt + &y.scale_real(*t);
                let Ok(new_part) = partition_of(&r, tol) else {
                    continue;
                };
                if new_part.len() < before && new_part.is_coarser_than(&part) {
                    found = Some((r, C64::new(*t, 0.0), new_part));
                    break 'draws;
                }
            }
        }
        let Some((r, t_used, new_part)) = found else {
            return Err(Error::GenericityExhausted {
                attempts: X_DRAWS * (T_GRID.len() + RANDOM_T_TRIES),
            });
        };
        path.push(Piece::Affine { start: qt, end: r.clone() }, tol.residual_tol)?;
        steps.push(ReductionStep {
            chosen_e: e,
            swapped,
            t_used,
            commutant_dim_before: before,
            commutant_dim_after: new_part.len(),
        });
        q = r;
        part = new_part;
    }
    if path.is_empty() {
        path = OperatorPath::constant(PathKind::Idempotent, path.fixed_diagonal.clone(), &q);
    }
    Ok((
        ReductionTrace {
            seed,
            steps,
            final_idempotent: q,
        },
        path,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::DiagonalVector;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn check_affine_path(path: &OperatorPath, d: &DiagonalVector) {
        for piece in &path.pieces {
            for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let m = piece.at(s);
                assert!(m.idempotent_residual() < 1e-9, "residual {}", m.idempotent_residual());
                assert!(expectation(&m).dist_inf(d) < 1e-9);
            }
        }
    }

    #[test]
    fn irreducible_input_is_constant() {
        let q = Matrix::real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
        let (trace, path) = reduce_to_irreducible(&q, 1, &tol()).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(path.pieces.len(), 1);
        assert_eq!(path.sample_count(), 2);
    }

    #[test]
    fn diagonal_rank_one() {
        let q = Matrix::diag_real(&[1.0, 0.0]);
        let (trace, path) = reduce_to_irreducible(&q, 3, &tol()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert!(path.pieces.len() <= 2);
        let d = DiagonalVector::from_real(&[1.0, 0.0]);
        check_affine_path(&path, &d);
        let p = range_projection(&trace.final_idempotent, &tol()).unwrap();
        assert_eq!(minimal_block_decomposition(&p, 1e-10).len(), 1);
    }

    #[test]
    fn two_half_blocks_merge() {
        let h = Matrix::real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
        let q = Matrix::direct_sum(&[h.clone(), h]);
        let (trace, path) = reduce_to_irreducible(&q, 5, &tol()).unwrap();
        assert!(!trace.steps.is_empty() && trace.steps.len() <= 3);
        for s in &trace.steps {
            assert!(s.commutant_dim_after < s.commutant_dim_before);
        }
        check_affine_path(&path, &DiagonalVector::constant(4, 0.5));
    }

    #[test]
    fn identity_diagonal_blocks() {
        let q = Matrix::diag_real(&[1.0, 0.0, 1.0, 0.0, 0.0]);
        let (trace, path) = reduce_to_irreducible(&q, 9, &tol()).unwrap();
        let counts: Vec<usize> = trace.steps.iter().map(|s| s.commutant_dim_before).collect();
        assert!(counts.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(trace.steps.last().unwrap().commutant_dim_after, 1);
        check_affine_path(&path, &expectation(&q));
    }

    #[test]
    fn trivial_rejected() {
        assert_eq!(reduce_to_irreducible(&Matrix::identity(3), 0, &tol()), Err(Error::TrivialIdempotent));
        assert_eq!(reduce_to_irreducible(&Matrix::zeros(3, 3), 0, &tol()), Err(Error::TrivialIdempotent));
    }
}
