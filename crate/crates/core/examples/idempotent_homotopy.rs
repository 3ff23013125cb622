//! Connect two idempotents with the same diagonal, reporting the
//! reduction rounds taken on each side.

use diagonal_homotopy::config::{PathOptions, ToleranceConfig};
use diagonal_homotopy::diagonal::expectation;
use diagonal_homotopy::error::Result;
use diagonal_homotopy::idempotent::construct_idempotent_with_diagonal;
use diagonal_homotopy::idempotent_paths::connect_idempotents_traced;
use diagonal_homotopy::linalg::Matrix;
use diagonal_homotopy::pathio::validate_path;

fn main() -> Result<()> {
    let tol = ToleranceConfig::default();
    let q = Matrix::direct_sum(&[
        Matrix::real_rows(&[[0.5, 1.0], [0.25, 0.5]]),
        Matrix::real_rows(&[[1.0, 2.0], [0.0, 0.0]]),
    ]);
    let d = expectation(&q);
    let r = construct_idempotent_with_diagonal(&d, &tol)?;

    let conn = connect_idempotents_traced(&q, &r, 11, &PathOptions::default())?;
    for (side, trace) in [("q", &conn.forward), ("r", &conn.backward)] {
        let dims: Vec<usize> = trace.steps.iter().map(|s| s.commutant_dim_before).collect();
        println!("{side}: {} rounds, block counts {dims:?}", trace.steps.len());
    }
    let report = validate_path(&conn.path, &tol.with_residual_tol(1e-7), 0.2);
    println!(
        "{} pieces, {} checks, residual {:.2e}, diagonal {:.2e}, passed {}",
        conn.path.pieces.len(),
        report.samples_checked,
        report.max_algebraic_residual,
        report.max_diagonal_residual,
        report.passed
    );
    Ok(())
}
