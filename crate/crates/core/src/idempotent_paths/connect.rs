use super::grassmann::{candidate_curves, check_in_omega};
use super::reduction::{check_idempotent, is_trivial};
use super::{affine_lift, range_projection, reduce_to_irreducible, CompressionSystem, ReductionTrace};
use crate::config::{PathOptions, ToleranceConfig};
use crate::diagonal::{expectation, minimal_block_decomposition, DiagonalVector};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::path::{sample_adaptive, OperatorPath, PathKind, Piece};

/// Residual accepted when solving the compression system along a path.
const LIFT_TOL: f64 = 1e-9;

/// `p + p·c·p^⊥` with diagonal `d`, for a projection with a single block.
fn lift(p: &Matrix, d: &DiagonalVector, tol: &ToleranceConfig) -> Result<Matrix> {
    let c = CompressionSystem::new(p, d, tol)?.solve(1, LIFT_TOL)?;
    Ok(affine_lift(p, &c).into_field(Field::Complex))
}

fn common_diagonal(q: &Matrix, r: &Matrix, tol: &ToleranceConfig) -> Result<DiagonalVector> {
    check_idempotent(q, tol)?;
    check_idempotent(r, tol)?;
    if q.shape() != r.shape() {
        return Err(Error::ShapeMismatch {
            expected: format!("{:?}", q.shape()),
            got: format!("{:?}", r.shape()),
        });
    }
    let d = expectation(q);
    let deviation = d.dist_inf(&expectation(r));
    if deviation > tol.residual_tol {
        return Err(Error::DiagonalMismatch { deviation });
    }
    Ok(d)
}

/// Path between idempotents with equal diagonal whose range projections
/// each have a single block: straight segments to `[q] + [q]x[q]^⊥` and
/// `[r] + [r]x[r]^⊥`, joined by lifting a curve of irreducible projections.
pub fn connect_irreducible(q: &Matrix, r: &Matrix, seed: u64, opts: &PathOptions) -> Result<OperatorPath> {
    let tol = &opts.tol;
    let d = common_diagonal(q, r, tol)?;
    let q = q.clone().into_field(Field::Complex);
    let r = r.clone().into_field(Field::Complex);
    if q.dist(&r) <= tol.residual_tol {
        return Ok(OperatorPath::constant(PathKind::Idempotent, d, &q));
    }
    let pq = range_projection(&q, tol)?;
    let pr = range_projection(&r, tol)?;
    for p in [&pq, &pr] {
        let blocks = minimal_block_decomposition(p, tol.zero_tol).len();
        if blocks != 1 {
            return Err(Error::NotIrreducible { blocks });
        }
    }
    let q0 = lift(&pq, &d, tol)?;
    let r0 = lift(&pr, &d, tol)?;
    let mut attempts = 0;
    let mut middle = None;
    for curve in candidate_curves(&pq, &pr, seed)? {
        attempts += 1;
        let curve = curve?;
        let piece = sample_adaptive(
            |t| {
                let p = curve.at(t);
                check_in_omega(&p, tol)?;
                lift(&p, &d, tol)
            },
            opts,
        );
        match piece {
            Ok(Piece::Sampled { mut samples }) => {
                let last = samples.len() - 1;
                let gap = samples[0].1.dist(&q0).max(samples[last].1.dist(&r0));
                if gap > tol.residual_tol * (1.0 + q0.norm_fro() + r0.norm_fro()) {
                    return Err(Error::Discontinuous { gap });
                }
                samples[0].1 = q0.clone();
                samples[last].1 = r0.clone();
                middle = Some(Piece::Sampled { samples });
                break;
            }
            Ok(_) => unreachable!(),
            Err(Error::NotIrreducible { .. } | Error::SolverBreakdown { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let middle = middle.ok_or(Error::GenericityExhausted { attempts })?;
    let mut path = OperatorPath::new(PathKind::Idempotent, d);
    path.push(Piece::Affine { start: q, end: q0 }, 0.0)?;
    path.push(middle, 0.0)?;
    path.push(Piece::Affine { start: r0, end: r }, 0.0)?;
    Ok(path)
}

/// Connection between two idempotents with the traces of both reductions.
#[derive(Debug, Clone)]
pub struct IdempotentConnection {
    pub path: OperatorPath,
    pub forward: ReductionTrace,
    pub backward: ReductionTrace,
}

/// Reduce both ends to a single block, then connect the reduced idempotents.
pub fn connect_idempotents_traced(q: &Matrix, r: &Matrix, seed: u64, opts: &PathOptions) -> Result<IdempotentConnection> {
    let tol = &opts.tol;
    let d = common_diagonal(q, r, tol)?;
    let same = q.dist(r) <= tol.residual_tol;
    if same || is_trivial(q, tol) || is_trivial(r, tol) {
        if same {
            let empty = ReductionTrace {
                seed,
                steps: Vec::new(),
                final_idempotent: q.clone(),
            };
            return Ok(IdempotentConnection {
                path: OperatorPath::constant(PathKind::Idempotent, d, q),
                forward: empty.clone(),
                backward: empty,
            });
        }
        return Err(Error::TrivialIdempotent);
    }
    let (forward, head) = reduce_to_irreducible(q, seed, tol)?;
    let (backward, tail) = reduce_to_irreducible(r, seed.wrapping_add(1), tol)?;
    let middle = connect_irreducible(&forward.final_idempotent, &backward.final_idempotent, seed.wrapping_add(2), opts)?;
    let gap = tol.residual_tol;
    let mut path = OperatorPath::new(PathKind::Idempotent, d);
    path = path.concat(head, gap)?.concat(middle, gap)?.concat(tail.reversed(), gap)?;
    Ok(IdempotentConnection { path, forward, backward })
}

pub fn connect_idempotents(q: &Matrix, r: &Matrix, seed: u64, opts: &PathOptions) -> Result<OperatorPath> {
    Ok(connect_idempotents_traced(q, r, seed, opts)?.path)
}
