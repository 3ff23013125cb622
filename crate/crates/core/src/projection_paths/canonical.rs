use std::f64::consts::FRAC_PI_4;

use super::block_form;
use crate::config::PathOptions;
use crate::diagonal::{expectation, DiagonalProjection, DiagonalVector};
use crate::error::{Error, Result};
use crate::linalg::{
    closest_isometry, det, gram_schmidt_ordered, hermitian_eig_tol, outer, unitary_residual, Field, Matrix,
    UnitaryLog, C64,
};
use crate::path::{sample_adaptive, OperatorPath, PathKind, Piece};

/// Squared cosine, squared sine and their geometric mean for `θ`, exact at π/4.
fn angles(theta: f64) -> (f64, f64, f64) {
    if (theta - FRAC_PI_4).abs() < 1e-15 {
        return (0.5, 0.5, 0.5);
    }
    let (s, c) = theta.sin_cos();
    (c * c, s * s, c * s)
}

/// `[[cos²θ·id, cosθ sinθ·id], [cosθ sinθ·id, sin²θ·id]]` in `M_{2n}`.
pub fn canonical_projection(n: usize, theta: f64) -> Matrix {
    p1_form(&Matrix::identity(n), theta)
}

/// `[[cos²θ·id, cosθ sinθ·u], [cosθ sinθ·u*, sin²θ·id]]`.
pub fn p1_form(u: &Matrix, theta: f64) -> Matrix {
    let (c2, s2, cs) = angles(theta);
    let n = u.rows();
    let id = Matrix::identity(n);
    Matrix::block2(&id.scale_real(c2), &u.scale_real(cs), &u.adjoint().scale_real(cs), &id.scale_real(s2))
}

/// A real projection with diagonal 1/2 in `M_{2n}`, `n ≥ 2`, whose
/// off-diagonal block is singular: the 4×4 block with two all-1/2 blocks on
/// the coordinates `{0, 1}` and `{n, n+1}`, and all-1/2 blocks on `{j, n+j}`
/// for the other `j`.
pub fn bridge_projection(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::RealM2Disconnected);
    }
    let mut m = Matrix::zeros(2 * n, 2 * n);
    let mut pair = |i: usize, j: usize| {
        for (r, c) in [(i, i), (i, j), (j, i), (j, j)] {
            m.set(r, c, C64::new(0.5, 0.0));
        }
    };
    pair(0, 1);
    pair(n, n + 1);
    for j in 2..n {
        pair(j, n + j);
    }
    Ok(m)
}

/// Spectral data putting a projection in the form
/// `[[a, √(a(1−a))·u], [u*·√(a(1−a)), u*(1−a)u]]`.
struct Standard {
    alpha: Vec<f64>,
    v: Matrix,
    u: Matrix,
    field: Field,
}

impl Standard {
    fn new(p: &Matrix, n: usize, field: Field, det_target: Option<f64>, opts: &PathOptions) -> Result<Self> {
        let bf = block_form(p, n, &opts.tol)?;
        let ea = hermitian_eig_tol(&bf.a.hermitian_part(), 1e-6)?;
        let ed = hermitian_eig_tol(&bf.d.hermitian_part(), 1e-6)?;
        let kappa = opts.tol.zero_tol;
        let modulus = |x: f64| (x * (1.0 - x)).max(0.0);

        let mut initial = Vec::new();
        let mut finals = Vec::new();
        let mut ker_b: Vec<(f64, Vec<C64>)> = Vec::new();
        for (k, &delta) in ed.values.iter().enumerate() {
            let w = ed.vectors.column(k);
            let m = modulus(delta);
            if m > kappa {
                let s = m.sqrt();
                finals.push(bf.b.mul_vec(&w).into_iter().map(|z| z / s).collect::<Vec<_>>());
                initial.push(w);
            } else {
                ker_b.push((delta, w));
            }
        }
        let mut ker_bstar: Vec<(f64, Vec<C64>)> = (0..n)
            .filter(|&k| modulus(ea.values[k]) <= kappa)
            .map(|k| (ea.values[k], ea.vectors.column(k)))
            .collect();
        // Ker d goes to Ker(id − a), Ker(id − d) to Ker a
        ker_b.sort_by(|x, y| x.0.total_cmp(&y.0));
        ker_bstar.sort_by(|x, y| y.0.total_cmp(&x.0));
        let ker_d = ker_b.iter().filter(|x| x.0 < 0.5).count();
        let ker_one_minus_a = ker_bstar.iter().filter(|x| x.0 > 0.5).count();
        if ker_d != ker_one_minus_a || ker_b.len() != ker_bstar.len() {
            return Err(Error::KernelDimMismatch { ker_one_minus_a, ker_d });
        }
        let finals = gram_schmidt_ordered(&finals, 1e-6).unwrap_or(finals);
        let mut u = Matrix::zeros(n, n);
        for (w, f) in initial.iter().zip(&finals) {
            u = &u + &outer(f, w);
        }
        for ((_, k), (_, f)) in ker_b.iter().zip(&ker_bstar) {
            u = &u + &outer(f, k);
        }
        if unitary_residual(&u) > 1e-12 {
            u = closest_isometry(&u)?;
        }
        let mut u = u.into_field(field);
        if let (Some(target), Field::Real) = (det_target, field) {
            if det(&u)?.re * target < 0.0 {
                if let (Some((_, k)), Some((_, f))) = (ker_b.last(), ker_bstar.last()) {
                    u = (&u - &outer(f, k).scale_real(2.0)).into_field(Field::Real);
                }
            }
        }
        // snap kernel eigenvalues so that √(a(1−a)) vanishes there exactly
        let alpha = ea
            .values
            .iter()
            .map(|&x| if modulus(x) <= kappa { x.round().clamp(0.0, 1.0) } else { x })
            .collect();
        Ok(Self {
            alpha,
            v: ea.vectors,
            u,
            field,
        })
    }

    fn kernel_nonempty(&self) -> bool {
        self.alpha.iter().any(|&a| a * (1.0 - a) <= 1e-12)
    }

    /// The projection with `a_t = (1−t)a + t·c2·id`.
    fn at(&self, t: f64, c2: f64) -> Matrix {
        let n = self.alpha.len();
        let at: Vec<f64> = self.alpha.iter().map(|&x| (1.0 - t) * x + t * c2).collect();
        let diag = |f: &dyn Fn(f64) -> f64| {
            let vals: Vec<C64> = at.iter().map(|&x| C64::new(f(x), 0.0)).collect();
            &(&self.v * &Matrix::diag(&vals)) * &self.v.adjoint()
        };
        let a = diag(&|x| x);
        let s = diag(&|x| (x * (1.0 - x)).max(0.0).sqrt());
        let b = &s * &self.u;
        let d = &(&self.u.adjoint() * &(&Matrix::identity(n) - &a)) * &self.u;
        Matrix::block2(&a, &b, &b.adjoint(), &d).into_field(self.field)
    }
}

fn sampled(
    f: impl Fn(f64) -> Result<Matrix>,
    start: &Matrix,
    end: &Matrix,
    opts: &PathOptions,
) -> Result<Piece> {
    let piece = sample_adaptive(f, opts)?;
    let Piece::Sampled { mut samples } = piece else {
        unreachable!()
    };
    let gap = samples[0].1.dist(start).max(samples[samples.len() - 1].1.dist(end));
    if gap > opts.tol.residual_tol {
        return Err(Error::Discontinuous { gap });
    }
    let last = samples.len() - 1;
    samples[0].1 = start.clone();
    samples[last].1 = end.clone();
    Ok(Piece::Sampled { samples })
}

/// Leg `P(u_start) → P(u_end)` along `u_start·exp(t·log(u_start* u_end))`.
fn unitary_leg(u_start: &Matrix, u_end: &Matrix, theta: f64, field: Field, opts: &PathOptions) -> Result<Piece> {
    let log = UnitaryLog::new(&(&u_start.adjoint() * u_end).into_field(field), 1e-8)?;
    let start = p1_form(u_start, theta).into_field(field);
    let end = p1_form(u_end, theta).into_field(field);
    sampled(|t| Ok(p1_form(&(u_start * &log.at(t)), theta).into_field(field)), &start, &end, opts)
}

fn leg_one(st: &Standard, p: &Matrix, theta: f64, opts: &PathOptions) -> Result<Piece> {
    let (c2, ..) = angles(theta);
    let end = p1_form(&st.u, theta).into_field(st.field);
    sampled(|t| Ok(st.at(t, c2)), p, &end, opts)
}

fn push_unless_trivial(pieces: &mut Vec<Piece>, piece: Piece) {
    if !is_constant(&piece) {
        pieces.push(piece);
    }
}

fn is_constant(piece: &Piece) -> bool {
    match piece {
        Piece::Affine { start, end } => start.dist(end) <= 1e-14,
        Piece::Sampled { samples } => samples.iter().all(|(_, m)| m.dist(&samples[0].1) <= 1e-14),
    }
}

/// Pieces from `p` (already permuted so the `c²` block comes first) to the
/// canonical projection.
fn pieces_to_canonical(p: &Matrix, n: usize, theta: f64, field: Field, half: bool, opts: &PathOptions) -> Result<Vec<Piece>> {
    let (_, _, cs) = angles(theta);
    let target = if field == Field::Real { Some(1.0) } else { None };
    let st = Standard::new(p, n, field, target, opts)?;
    let mut pieces = Vec::new();
    push_unless_trivial(&mut pieces, leg_one(&st, p, theta, opts)?);
    if cs.abs() <= 1e-15 {
        return Ok(pieces);
    }
    let id = Matrix::identity(n).into_field(field);
    let wrong_sign = field == Field::Real && det(&st.u)?.re < 0.0;
    if !wrong_sign {
        push_unless_trivial(&mut pieces, unitary_leg(&st.u, &id, theta, field, opts)?);
        return Ok(pieces);
    }
    if !half {
        return Err(Error::WrongComponent);
    }
    // orientation-reversing u: pass through a projection with singular b
    let bridge = bridge_projection(n)?;
    let minus = Standard::new(&bridge, n, field, Some(-1.0), opts)?;
    let plus = Standard::new(&bridge, n, field, Some(1.0), opts)?;
    debug_assert!(minus.kernel_nonempty());
    pieces.push(unitary_leg(&st.u, &minus.u, theta, field, opts)?);
    pieces.push(leg_one(&minus, &bridge, theta, opts)?.reversed());
    pieces.push(leg_one(&plus, &bridge, theta, opts)?);
    push_unless_trivial(&mut pieces, unitary_leg(&plus.u, &id, theta, field, opts)?);
    Ok(pieces)
}

fn prepare(p: &Matrix, field: Field, opts: &PathOptions) -> Result<(Matrix, usize)> {
    let m = p.ensure_square()?;
    if m % 2 != 0 || m == 0 {
        return Err(Error::InvalidArgument(format!("expected an even dimension, got {m}")));
    }
    let residual = p.projection_residual();
    if residual > opts.tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    if field == Field::Real && p.max_imag() > opts.tol.residual_tol {
        return Err(Error::InvalidArgument("complex matrix given for the real field".into()));
    }
    Ok((p.clone().into_field(field), m / 2))
}

fn assemble(pieces: Vec<Piece>, start: &Matrix, diag: DiagonalVector, gap: f64) -> Result<OperatorPath> {
    let mut path = OperatorPath::new(PathKind::Projection, diag.clone());
    if pieces.is_empty() {
        return Ok(OperatorPath::constant(PathKind::Projection, diag, start));
    }
    for piece in pieces {
        path.push(piece, gap)?;
    }
    Ok(path)
}

/// Path of projections with diagonal 1/2 from `p ∈ M_{2n}` to
/// [`canonical_projection`]`(n, π/4)`.
pub fn half_diagonal_path_to_canonical(p: &Matrix, field: Field, opts: &PathOptions) -> Result<OperatorPath> {
    let (p, n) = prepare(p, field, opts)?;
    let half = DiagonalVector::constant(2 * n, 0.5).with_field(field);
    let deviation = expectation(&p).dist_inf(&half);
    if deviation > opts.tol.residual_tol {
        return Err(Error::NotHalfDiagonal { deviation });
    }
    if field == Field::Real && n == 1 && p.dist(&canonical_projection(1, FRAC_PI_4)) > opts.tol.residual_tol {
        return Err(Error::RealM2Disconnected);
    }
    let pieces = pieces_to_canonical(&p, n, FRAC_PI_4, field, true, opts)?;
    assemble(pieces, &p, half, opts.tol.residual_tol)
}

/// Path from `p` with diagonal `cos²θ·e + sin²θ·e^⊥` to the canonical
/// projection for `θ`, conjugated by the permutation moving `supp e` first.
pub fn amplified_path_to_canonical(
    p: &Matrix,
    e: &DiagonalProjection,
    theta: f64,
    field: Field,
    opts: &PathOptions,
) -> Result<OperatorPath> {
    let (p, n) = prepare(p, field, opts)?;
    if e.n() != 2 * n || e.rank() != n {
        return Err(Error::InvalidArgument(format!("e must have rank {n} in dimension {}", 2 * n)));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidArgument(format!("theta = {theta} outside [0, pi/2]")));
    }
    let (c2, s2, _) = angles(theta);
    let target: Vec<f64> = (0..2 * n).map(|i| if e.contains(i) { c2 } else { s2 }).collect();
    let diag = DiagonalVector::from_real(&target).with_field(field);
    let deviation = expectation(&p).dist_inf(&diag);
    if deviation > opts.tol.residual_tol {
        return Err(Error::NotAmplifiedDiagonal { deviation });
    }
    let perm: Vec<usize> = e.support().iter().copied().chain(e.complement().support().iter().copied()).collect();
    let q = p.permute(&perm);
    let pieces = pieces_to_canonical(&q, n, theta, field, false, opts)?;
    let pieces = pieces
        .into_iter()
        .map(|piece| match piece {
            Piece::Sampled { samples } => Piece::Sampled {
                samples: samples.into_iter().map(|(t, m)| (t, m.unpermute(&perm))).collect(),
            },
            Piece::Affine { start, end } => Piece::Affine {
                start: start.unpermute(&perm),
                end: end.unpermute(&perm),
            },
        })
        .collect();
    assemble(pieces, &p, diag, opts.tol.residual_tol)
}

/// Path between two projections with diagonal 1/2 through the canonical one.
pub fn connect_half_projections(p: &Matrix, q: &Matrix, field: Field, opts: &PathOptions) -> Result<OperatorPath> {
    let (pp, n) = prepare(p, field, opts)?;
    let (qq, m) = prepare(q, field, opts)?;
    if n != m {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", 2 * n),
            got: format!("{0}x{0}", 2 * m),
        });
    }
    if pp.dist(&qq) <= opts.tol.residual_tol {
        let half = DiagonalVector::constant(2 * n, 0.5).with_field(field);
        let deviation = expectation(&pp).dist_inf(&half);
        if deviation > opts.tol.residual_tol {
            return Err(Error::NotHalfDiagonal { deviation });
        }
        return Ok(OperatorPath::constant(PathKind::Projection, half, &pp));
    }
    if field == Field::Real && n == 1 {
        return Err(Error::RealM2Disconnected);
    }
    let there = half_diagonal_path_to_canonical(&pp, field, opts)?;
    let back = half_diagonal_path_to_canonical(&qq, field, opts)?.reversed();
    there.concat(back, opts.tol.residual_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;
    use crate::projection_paths::{m4_family, M4Family};

    fn check_path(path: &OperatorPath, start: &Matrix, end: &Matrix) {
        assert!(path.start().unwrap().dist(start) < 1e-10);
        assert!(path.end().unwrap().dist(end) < 1e-10);
        for piece in &path.pieces {
            let Piece::Sampled { samples } = piece else { panic!("unexpected affine piece") };
            for (_, m) in samples {
                assert!(m.projection_residual() < 1e-8);
                assert!(expectation(m).dist_inf(&path.fixed_diagonal) < 1e-8);
            }
            for w in samples.windows(2) {
                assert!(w[0].1.dist(&w[1].1) <= 0.1 + 1e-12);
            }
        }
        for w in path.pieces.windows(2) {
            assert!(w[0].end().dist(w[1].start()) < 1e-8);
        }
    }

    #[test]
    fn canonical_is_constant() {
        let q = canonical_projection(2, FRAC_PI_4);
        let path = half_diagonal_path_to_canonical(&q, Field::Complex, &PathOptions::default()).unwrap();
        assert_eq!(path.pieces.len(), 1);
        assert_eq!(path.sample_count(), 2);
        check_path(&path, &q, &q);
    }

    #[test]
    fn spiral_from_p1_form() {
        let u = Matrix::diag(&[I, -I]);
        let p = p1_form(&u, FRAC_PI_4);
        let path = half_diagonal_path_to_canonical(&p, Field::Complex, &PathOptions::default()).unwrap();
        assert_eq!(path.pieces.len(), 1);
        check_path(&path, &p, &canonical_projection(2, FRAC_PI_4));
    }

    #[test]
    fn eight_null_member() {
        let one = C64::new(1.0, 0.0);
        let p = m4_family(&M4Family::EightNull { variant: 0, xi: [one, one] }, Field::Complex).unwrap();
        let path = half_diagonal_path_to_canonical(&p, Field::Complex, &PathOptions::default()).unwrap();
        assert!(path.pieces.len() <= 3);
        check_path(&path, &p, &canonical_projection(2, FRAC_PI_4));
    }

    #[test]
    fn real_two_by_two_is_disconnected() {
        let plus = Matrix::real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
        let minus = Matrix::real_rows(&[[0.5, -0.5], [-0.5, 0.5]]);
        let opts = PathOptions::default();
        assert_eq!(connect_half_projections(&plus, &minus, Field::Real, &opts), Err(Error::RealM2Disconnected));
        assert!(connect_half_projections(&plus, &minus, Field::Complex, &opts).is_ok());
        assert!(connect_half_projections(&plus, &plus, Field::Real, &opts).is_ok());
    }

    #[test]
    fn real_bridge_in_dimension_four() {
        let reflect = Matrix::diag_real(&[1.0, -1.0]);
        let p = p1_form(&reflect, FRAC_PI_4);
        let q = canonical_projection(2, FRAC_PI_4);
        let path = connect_half_projections(&p, &q, Field::Real, &PathOptions::default()).unwrap();
        check_path(&path, &p, &q);
        let bridge = bridge_projection(2).unwrap();
        let passes = path.pieces.iter().any(|pc| pc.start().dist(&bridge) < 1e-12);
        assert!(passes);
        for piece in &path.pieces {
            assert!(piece.start().max_imag() == 0.0);
        }
    }

    #[test]
    fn bridge_has_singular_corner() {
        for n in 2..5 {
            let b = bridge_projection(n).unwrap();
            assert!(b.projection_residual() < 1e-15);
            assert_eq!(expectation(&b), DiagonalVector::constant(2 * n, 0.5));
            let corner = b.submatrix(0..n, n..2 * n);
            assert!(det(&corner).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn amplified_quarter_turn_reduces_to_half() {
        let u = Matrix::diag(&[I, C64::new(0.0, 1.0).powf(0.5)]);
        let p = p1_form(&u, FRAC_PI_4);
        let e = DiagonalProjection::new(4, vec![0, 1]).unwrap();
        let opts = PathOptions::default();
        let a = amplified_path_to_canonical(&p, &e, FRAC_PI_4, Field::Complex, &opts).unwrap();
        let h = half_diagonal_path_to_canonical(&p, Field::Complex, &opts).unwrap();
        assert_eq!(a, h);
    }

    #[test]
    fn amplified_degenerate_angle() {
        let e = DiagonalProjection::new(4, vec![1, 3]).unwrap();
        let p = e.to_matrix();
        let path = amplified_path_to_canonical(&p, &e, 0.0, Field::Real, &PathOptions::default()).unwrap();
        assert_eq!(path.sample_count(), 2);
        assert_eq!(path.start(), Some(&p));
    }

    #[test]
    fn amplified_third_turn() {
        let theta = std::f64::consts::PI / 3.0;
        let u = Matrix::complex_rows(&[[C64::from_polar(1.0, 0.4), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), I]]);
        let p = p1_form(&u, theta);
        let e = DiagonalProjection::new(4, vec![0, 1]).unwrap();
        let path = amplified_path_to_canonical(&p, &e, theta, Field::Complex, &PathOptions::default()).unwrap();
        check_path(&path, &p, &canonical_projection(2, theta));
        // permuted coordinates
        let perm = [0, 2, 1, 3];
        let pp = p.unpermute(&perm);
        let e2 = DiagonalProjection::new(4, vec![0, 2]).unwrap();
        let path = amplified_path_to_canonical(&pp, &e2, theta, Field::Complex, &PathOptions::default()).unwrap();
        check_path(&path, &pp, &canonical_projection(2, theta).unpermute(&perm));
    }
}
