use std::io::Write;

use crate::config::ToleranceConfig;
use crate::diagonal::expectation;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::path::{OperatorPath, PathKind, Piece};

/// One checked sample; `t` is the piece index plus the local parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRow {
    pub t: f64,
    pub algebraic_residual: f64,
    pub diagonal_residual: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub kind: PathKind,
    pub samples_checked: usize,
    pub max_algebraic_residual: f64,
    pub max_diagonal_residual: f64,
    pub max_step: f64,
    pub passed: bool,
    pub rows: Vec<ResidualRow>,
}

fn algebraic_residual(kind: PathKind, m: &Matrix) -> f64 {
    match kind {
        PathKind::Projection => m.projection_residual(),
        PathKind::Idempotent => m.idempotent_residual(),
    }
}

/// Points at which a piece is checked. Affine segments are checked at both
/// ends, the midpoint, and a uniform grid fine enough for the step bound.
fn checkpoints(piece: &Piece, step_bound: f64) -> Vec<(f64, Matrix)> {
    match piece {
        Piece::Sampled { samples } => samples.clone(),
        Piece::Affine { start, end } => {
            let len = start.dist(end);
            let mut parts = if step_bound > 0.0 { (len / step_bound).ceil() as usize } else { 2 };
            parts = parts.clamp(2, 100_000);
            parts += parts % 2;
            (0..=parts)
                .map(|i| {
                    let t = i as f64 / parts as f64;
                    (t, piece.at(t))
                })
                .collect()
        }
    }
}

/// Check every sample of `path` against its kind law and fixed diagonal,
/// and every consecutive step against `step_bound`.
pub fn validate_path(path: &OperatorPath, cfg: &ToleranceConfig, step_bound: f64) -> ValidationReport {
    let mut rows = Vec::new();
    let mut prev: Option<Matrix> = None;
    for (idx, piece) in path.pieces.iter().enumerate() {
        for (t, m) in checkpoints(piece, step_bound) {
            let step = prev.as_ref().map_or(0.0, |p| p.dist(&m));
            let diagonal_residual = if m.shape() == (path.fixed_diagonal.len(), path.fixed_diagonal.len()) {
                expectation(&m).dist_inf(&path.fixed_diagonal)
            } else {
                f64::INFINITY
            };
            rows.push(ResidualRow {
                t: idx as f64 + t,
                algebraic_residual: algebraic_residual(path.kind, &m),
                diagonal_residual,
                step,
            });
            prev = Some(m);
        }
    }
    let max = |f: fn(&ResidualRow) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    let max_algebraic_residual = max(|r| r.algebraic_residual);
    let max_diagonal_residual = max(|r| r.diagonal_residual);
    let max_step = max(|r| r.step);
    let nan = rows
        .iter()
        .any(|r| r.algebraic_residual.is_nan() || r.diagonal_residual.is_nan() || r.step.is_nan());
    ValidationReport {
        kind: path.kind,
        samples_checked: rows.len(),
        max_algebraic_residual,
        max_diagonal_residual,
        max_step,
        passed: !nan
            && max_algebraic_residual <= cfg.residual_tol
            && max_diagonal_residual <= cfg.residual_tol
            && max_step <= step_bound,
        rows,
    }
}

/// CSV with columns `t, algebraic_residual, diagonal_residual, step`.
pub fn write_residual_csv(rows: &[ResidualRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| crate::error::Error::Io(e.to_string());
    w.write_record(["t", "algebraic_residual", "diagonal_residual", "step"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.t, r.algebraic_residual, r.diagonal_residual, r.step].map(|x| format!("{x:e}")))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
