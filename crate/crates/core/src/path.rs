//! Piecewise paths of matrices: affine segments and sampled curves.

use crate::config::PathOptions;
use crate::diagonal::DiagonalVector;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Projection,
    Idempotent,
}

impl PathKind {
    pub fn name(self) -> &'static str {
        match self {
            PathKind::Projection => "projection",
            PathKind::Idempotent => "idempotent",
        }
    }
}

impl std::str::FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" => Ok(PathKind::Projection),
            "idempotent" => Ok(PathKind::Idempotent),
            _ => Err(Error::InvalidArgument(format!("unknown path kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Affine { start: Matrix, end: Matrix },
    /// Samples `(t, m)` with `t` increasing from 0 to 1.
    Sampled { samples: Vec<(f64, Matrix)> },
}

impl Piece {
    pub fn start(&self) -> &Matrix {
        match self {
            Piece::Affine { start, .. } => start,
            Piece::Sampled { samples } => &samples[0].1,
        }
    }

    pub fn end(&self) -> &Matrix {
        match self {
            Piece::Affine { end, .. } => end,
            Piece::Sampled { samples } => &samples[samples.len() - 1].1,
        }
    }

    pub fn reversed(&self) -> Piece {
        match self {
            Piece::Affine { start, end } => Piece::Affine {
                start: end.clone(),
                end: start.clone(),
            },
            Piece::Sampled { samples } => Piece::Sampled {
                samples: samples.iter().rev().map(|(t, m)| (1.0 - t, m.clone())).collect(),
            },
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Piece::Affine { start, end } => start.field().join(end.field()),
            Piece::Sampled { samples } => samples.iter().fold(Field::Real, |f, (_, m)| f.join(m.field())),
        }
    }

    pub fn sample_count(&self) -> usize {
        match self {
            Piece::Affine { .. } => 2,
            Piece::Sampled { samples } => samples.len(),
        }
    }

    /// Matrix at local parameter `t`; sampled pieces interpolate linearly.
    pub fn at(&self, t: f64) -> Matrix {
        match self {
            Piece::Affine { start, end } => start.lerp(end, t),
            Piece::Sampled { samples } => {
                let k = samples.partition_point(|(s, _)| *s < t);
                if k == 0 {
                    return samples[0].1.clone();
                }
                if k >= samples.len() {
                    return samples[samples.len() - 1].1.clone();
                }
                let (t0, m0) = &samples[k - 1];
                let (t1, m1) = &samples[k];
                m0.lerp(m1, (t - t0) / (t1 - t0))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPath {
    pub kind: PathKind,
    pub fixed_diagonal: DiagonalVector,
    pub pieces: Vec<Piece>,
}

impl OperatorPath {
    pub fn new(kind: PathKind, fixed_diagonal: DiagonalVector) -> Self {
        Self {
            kind,
            fixed_diagonal,
            pieces: Vec::new(),
        }
    }

    /// One sampled piece staying at `m`.
    pub fn constant(kind: PathKind, fixed_diagonal: DiagonalVector, m: &Matrix) -> Self {
        let mut path = Self::new(kind, fixed_diagonal.with_field(m.field()));
        path.pieces.push(Piece::Sampled {
            samples: vec![(0.0, m.clone()), (1.0, m.clone())],
        });
        path
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn start(&self) -> Option<&Matrix> {
        self.pieces.first().map(Piece::start)
    }

    pub fn end(&self) -> Option<&Matrix> {
        self.pieces.last().map(Piece::end)
    }

    pub fn sample_count(&self) -> usize {
        self.pieces.iter().map(Piece::sample_count).sum()
    }

    /// Append a piece whose start lies within `gap_tol` of the current end.
    /// The diagonal's field tag is widened to the field of the piece.
    pub fn push(&mut self, piece: Piece, gap_tol: f64) -> Result<()> {
        if let Some(end) = self.end() {
            let gap = end.dist(piece.start());
            if gap > gap_tol {
                return Err(Error::Discontinuous { gap });
            }
        }
        self.fixed_diagonal = self.fixed_diagonal.clone().with_field(piece.field());
        self.pieces.push(piece);
        Ok(())
    }

    pub fn concat(mut self, other: OperatorPath, gap_tol: f64) -> Result<Self> {
        for piece in other.pieces {
            self.push(piece, gap_tol)?;
        }
        Ok(self)
    }

    pub fn reversed(&self) -> Self {
        Self {
            kind: self.kind,
            fixed_diagonal: self.fixed_diagonal.clone(),
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
        }
    }

    /// Matrix at global parameter `s ∈ [0, pieces]`; piece `k` covers `[k, k+1]`.
    pub fn at(&self, s: f64) -> Option<Matrix> {
        if self.pieces.is_empty() {
            return None;
        }
        let k = (s.max(0.0).floor() as usize).min(self.pieces.len() - 1);
        Some(self.pieces[k].at(s - k as f64))
    }
}

/// Sample `f` on `opts.samples` uniform points of `[0, 1]`, then insert
/// midpoints wherever consecutive samples are more than `opts.max_step`
/// apart, up to `opts.max_samples` samples in total.
pub fn sample_adaptive(f: impl Fn(f64) -> Result<Matrix>, opts: &PathOptions) -> Result<Piece> {
    let n = opts.samples.max(2);
    let mut samples: Vec<(f64, Matrix)> = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        samples.push((t, f(t)?));
    }
    loop {
        let mut refined: Vec<(f64, Matrix)> = Vec::with_capacity(samples.len() * 2);
        let mut inserted = false;
        let mut budget = opts.max_samples.saturating_sub(samples.len());
        for w in 0..samples.len() {
            if w > 0 && budget > 0 {
                let (t0, m0) = &samples[w - 1];
                let (t1, m1) = &samples[w];
                if m0.dist(m1) > opts.max_step && t1 - t0 > 1e-12 {
                    let tm = 0.5 * (t0 + t1);
                    refined.push((tm, f(tm)?));
                    budget -= 1;
                    inserted = true;
                }
            }
            refined.push(samples[w].clone());
        }
        samples = refined;
        if !inserted {
            break;
        }
    }
    Ok(Piece::Sampled { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;

    fn rot(a: f64) -> Matrix {
        let (s, c) = a.sin_cos();
        Matrix::real_rows(&[[c, -s], [s, c]])
    }

    #[test]
    fn adaptive_sampling_bounds_steps() {
        let opts = PathOptions::default().with_samples(3);
        let piece = sample_adaptive(|t| Ok(rot(6.0 * t)), &opts).unwrap();
        let Piece::Sampled { samples } = &piece else { unreachable!() };
        assert!(samples.windows(2).all(|w| w[0].1.dist(&w[1].1) <= opts.max_step));
        assert!(samples.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(samples[0].0, 0.0);
        assert_eq!(samples.last().unwrap().0, 1.0);
    }

    #[test]
    fn sample_cap_is_respected() {
        let mut opts = PathOptions::default().with_samples(2);
        opts.max_samples = 10;
        let piece = sample_adaptive(|t| Ok(rot(100.0 * t)), &opts).unwrap();
        assert!(piece.sample_count() <= 10);
    }

    #[test]
    fn concat_checks_gaps() {
        let d = DiagonalVector::constant(2, 1.0);
        let a = OperatorPath::constant(PathKind::Projection, d.clone(), &Matrix::identity(2));
        let b = OperatorPath::constant(PathKind::Projection, d.clone(), &Matrix::zeros(2, 2));
        assert!(matches!(a.clone().concat(b, 1e-8), Err(Error::Discontinuous { .. })));
        let c = a.clone().concat(a.clone(), 1e-8).unwrap();
        assert_eq!(c.pieces.len(), 2);
    }

    #[test]
    fn reverse_swaps_endpoints() {
        let d = DiagonalVector::constant(2, 0.5);
        let mut path = OperatorPath::new(PathKind::Idempotent, d);
        let x = Matrix::zeros(2, 2).into_field(Field::Real);
        path.push(Piece::Affine { start: x.clone(), end: Matrix::identity(2) }, 1e-8).unwrap();
        let r = path.reversed();
        assert_eq!(r.start(), Some(&Matrix::identity(2)));
        assert_eq!(r.end(), Some(&x));
        assert!(r.at(0.5).unwrap().dist(&Matrix::identity(2).scale_real(0.5)) < 1e-15);
    }
}
