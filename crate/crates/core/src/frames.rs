//! Finite unit-norm tight frames and their Grammian projections.

use std::f64::consts::PI;

use crate::config::{PathOptions, ToleranceConfig};
use crate::diagonal::projection_rank;
use crate::error::{Error, Result};
use crate::linalg::{
    closest_isometry, orthogonal_det_sign, projection_range_basis, vec_norm, Field, Matrix, UnitaryLog, C64,
};
use crate::path::{sample_adaptive, Piece};
use crate::projection_paths::connect_half_projections;

/// Tolerance on tightness and unit norms along a frame path.
pub const FRAME_PATH_TOL: f64 = 1e-7;

/// `k` vectors in an `n`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub n: usize,
    pub k: usize,
    pub field: Field,
    pub vectors: Vec<Vec<C64>>,
}

impl Frame {
    pub fn new(vectors: Vec<Vec<C64>>, field: Field) -> Result<Self> {
        let k = vectors.len();
        let n = vectors.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidArgument("frame needs at least one non-empty vector".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: format!("vectors of length {n}"),
                got: format!("length {}", v.len()),
            });
        }
        if k < n {
            return Err(Error::InvalidArgument(format!("k = {k} vectors cannot span dimension {n}")));
        }
        let field = vectors.iter().flatten().fold(field, |f, z| f.join(Field::of_scalar(*z)));
        Ok(Self { n, k, field, vectors })
    }

    pub fn from_real(vectors: &[Vec<f64>]) -> Result<Self> {
        let vs = vectors.iter().map(|v| v.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::new(vs, Field::Real)
    }

    /// Frame operator `Σ x_j x_j*`.
    pub fn frame_operator(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, self.field, |a, b| {
            self.vectors.iter().map(|x| x[a] * x[b].conj()).sum()
        })
    }

    /// Row `j` is `√(n/k)·conj(x_j)`, so that `A·A*` is the Grammian projection.
    pub fn analysis_isometry(&self) -> Matrix {
        let s = (self.n as f64 / self.k as f64).sqrt();
        Matrix::from_fn(self.k, self.n, self.field, |j, l| self.vectors[j][l].conj() * s)
    }

    /// Inverse of [`Frame::analysis_isometry`].
    pub fn from_isometry(a: &Matrix) -> Result<Self> {
        let (k, n) = a.shape();
        let s = (k as f64 / n as f64).sqrt();
        let vectors = (0..k).map(|j| a.row(j).iter().map(|z| z.conj() * s).collect()).collect();
        Self::new(vectors, a.field())
    }
}

/// Tightness and norm residuals of a frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuntfReport {
    pub is_funtf: bool,
    pub tightness_residual: f64,
    pub norm_residual: f64,
}

impl FuntfReport {
    pub fn max_residual(&self) -> f64 {
        self.tightness_residual.max(self.norm_residual)
    }
}

/// Checks `‖(n/k)·Σ x_j x_j* − id‖ ≤ tol` and `|‖x_j‖ − 1| ≤ tol`.
pub fn verify_funtf(f: &Frame, tol: f64) -> FuntfReport {
    let s = f.n as f64 / f.k as f64;
    let tightness_residual = f.frame_operator().scale_real(s).dist(&Matrix::identity(f.n));
    let norm_residual = f.vectors.iter().fold(0.0f64, |m, x| m.max((vec_norm(x) - 1.0).abs()));
    FuntfReport {
        is_funtf: tightness_residual <= tol && norm_residual <= tol,
        tightness_residual,
        norm_residual,
    }
}

/// `(n/k)·G` with `G[i][j] = ⟨x_j, x_i⟩`.
pub fn gram_projection(f: &Frame, tol: &ToleranceConfig) -> Result<Matrix> {
    let report = verify_funtf(f, tol.residual_tol);
    if !report.is_funtf {
        return Err(Error::NotTight {
            residual: report.max_residual(),
        });
    }
    let a = f.analysis_isometry();
    Ok((&a * &a.adjoint()).hermitian_part())
}

/// A frame whose Grammian projection is `p`, read off from an orthonormal
/// basis of the range of `p`.
pub fn frame_from_projection(p: &Matrix, tol: &ToleranceConfig) -> Result<Frame> {
    let k = p.ensure_square()?;
    let residual = p.projection_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    let n = projection_rank(p)?;
    let trace = p.trace().re;
    if n == 0 || (trace - n as f64).abs() > tol.residual_tol * k as f64 {
        return Err(Error::RankMismatch(n, trace.round() as usize));
    }
    let target = n as f64 / k as f64;
    let deviation = p.diagonal().iter().fold(0.0f64, |m, z| m.max((z - target).norm()));
    if deviation > tol.residual_tol {
        return Err(Error::NotConstantDiagonal { deviation });
    }
    let a = projection_range_basis(&p.hermitian_part())?.into_field(p.field());
    Frame::from_isometry(&a)
}

/// `k` vectors `x_j[l] = ω^{r_l·j}/√n`, `ω = e^{2πi/k}`, from the rows `r` of
/// the `k`-point Fourier matrix.
pub fn harmonic_frame_rows(k: usize, rows: &[usize]) -> Result<Frame> {
    let n = rows.len();
    let s = 1.0 / (n as f64).sqrt();
    let vectors = (0..k)
        .map(|j| {
            rows.iter()
                .map(|&r| C64::from_polar(s, 2.0 * PI * ((r * j) % k) as f64 / k as f64))
                .collect()
        })
        .collect();
    Frame::new(vectors, Field::Complex)
}

/// Harmonic frame from the first `n` Fourier rows.
pub fn harmonic_frame(n: usize, k: usize) -> Result<Frame> {
    harmonic_frame_rows(k, &(0..n).collect::<Vec<_>>())
}

/// Sampled frame homotopy with the worst residuals seen along it.
#[derive(Debug, Clone)]
pub struct FramePath {
    pub samples: Vec<(f64, Frame)>,
    pub max_tightness_residual: f64,
    pub max_norm_residual: f64,
}

fn check_pair(f: &Frame, g: &Frame, tol: &ToleranceConfig) -> Result<(Matrix, Matrix)> {
    if (f.n, f.k) != (g.n, g.k) {
        return Err(Error::ShapeMismatch {
            expected: format!("{} vectors in dimension {}", f.k, f.n),
            got: format!("{} vectors in dimension {}", g.k, g.n),
        });
    }
    if f.k != 2 * f.n {
        return Err(Error::WrongRedundancy { k: f.k, n: f.n });
    }
    Ok((gram_projection(f, tol)?, gram_projection(g, tol)?))
}

/// Projection samples of `path` at global parameters, refined until
/// consecutive projections are less than 1/2 apart.
fn transport_grid(path: &crate::path::OperatorPath) -> Vec<(f64, Matrix)> {
    let mut grid: Vec<(f64, Matrix)> = Vec::new();
    for (idx, piece) in path.pieces.iter().enumerate() {
        let local: Vec<(f64, Matrix)> = match piece {
            Piece::Sampled { samples } => samples.clone(),
            Piece::Affine { .. } => (0..=16).map(|i| i as f64 / 16.0).map(|t| (t, piece.at(t))).collect(),
        };
        for (t, m) in local {
            let s = idx as f64 + t;
            if grid.last().is_some_and(|(s0, m0)| *s0 >= s - 1e-15 && m0.dist(&m) == 0.0) {
                continue;
            }
            grid.push((s, m));
        }
    }
    let mut out: Vec<(f64, Matrix)> = Vec::with_capacity(grid.len());
    for (s, m) in grid {
        if let Some((s0, m0)) = out.last().cloned() {
            let mut stack = vec![(s0, m0, s, m.clone())];
            let mut mids = Vec::new();
            while let Some((a, ma, b, mb)) = stack.pop() {
                if ma.dist(&mb) < 0.5 || b - a < 1e-9 {
                    continue;
                }
                let c = 0.5 * (a + b);
                let Some(mc) = path.at(c) else { continue };
                mids.push((c, mc.clone()));
                stack.push((a, ma, c, mc.clone()));
                stack.push((c, mc, b, mb));
            }
            mids.sort_by(|x, y| x.0.total_cmp(&y.0));
            out.extend(mids);
        }
        out.push((s, m));
    }
    out
}

/// Homotopy of FUNTFs with `k = 2n` from `f` to `g`: the isometry factor
/// of `f` is transported along a path of diagonal-1/2 projections, then the
/// remaining fiber unitary is unwound.
pub fn connect_frames(f: &Frame, g: &Frame, opts: &PathOptions) -> Result<FramePath> {
    let tol = &opts.tol;
    let (pf, pg) = check_pair(f, g, tol)?;
    let field = f.field.join(g.field);
    let path = connect_half_projections(&pf, &pg, field, opts)?;
    let grid = transport_grid(&path);
    let mut a = f.analysis_isometry().into_field(field);
    let mut isometries: Vec<(f64, Matrix)> = vec![(0.0, a.clone())];
    for (s, p) in grid.iter().skip(1) {
        a = closest_isometry(&(p * &a))?.into_field(field);
        isometries.push((*s, a.clone()));
    }
    let a_g = g.analysis_isometry().into_field(field);
    let w = &a_g.adjoint() * &a;
    if (&a_g * &w).dist(&a) > FRAME_PATH_TOL {
        return Err(Error::Discontinuous {
            gap: (&a_g * &w).dist(&a),
        });
    }
    let w = closest_isometry(&w)?.into_field(field);
    if field == Field::Real && orthogonal_det_sign(&w)? < 0.0 {
        return Err(Error::RealFiberObstruction);
    }
    let log = UnitaryLog::new(&w, 1e-8)?;
    let offset = path.pieces.len() as f64;
    if let Piece::Sampled { samples } = sample_adaptive(|t| Ok(&a_g * &log.at(1.0 - t)), opts)? {
        for (t, m) in samples.into_iter().skip(1) {
            isometries.push((offset + t, m.into_field(field)));
        }
    }
    if let Some(last) = isometries.last_mut() {
        last.1 = a_g;
    }
    let mut out = FramePath {
        samples: Vec::with_capacity(isometries.len()),
        max_tightness_residual: 0.0,
        max_norm_residual: 0.0,
    };
    for (s, m) in isometries {
        let frame = Frame::from_isometry(&m)?;
        let report = verify_funtf(&frame, FRAME_PATH_TOL);
        out.max_tightness_residual = out.max_tightness_residual.max(report.tightness_residual);
        out.max_norm_residual = out.max_norm_residual.max(report.norm_residual);
        if !report.is_funtf {
            return Err(Error::NotTight {
                residual: report.max_residual(),
            });
        }
        out.samples.push((s, frame));
    }
    if let Some(first) = out.samples.first_mut() {
        first.1 = f.clone();
    }
    if let Some(last) = out.samples.last_mut() {
        last.1 = g.clone();
    }
    Ok(out)
}
