//! Connect two projections with constant diagonal 1/2 and check the path.

use std::f64::consts::FRAC_PI_4;

use diagonal_homotopy::config::{PathOptions, ToleranceConfig};
use diagonal_homotopy::error::Result;
use diagonal_homotopy::linalg::Field;
use diagonal_homotopy::pathio::validate_path;
use diagonal_homotopy::projection_paths::{canonical_projection, connect_half_projections, p1_form};
use diagonal_homotopy::random::{random_unitary, seeded};

fn main() -> Result<()> {
    let mut rng = seeded(7);
    let n = 3;
    let p = p1_form(&random_unitary(&mut rng, n, Field::Complex), FRAC_PI_4);
    let q = canonical_projection(n, FRAC_PI_4);

    let path = connect_half_projections(&p, &q, Field::Complex, &PathOptions::default())?;
    println!("{} pieces, {} samples", path.pieces.len(), path.sample_count());

    let report = validate_path(&path, &ToleranceConfig::default(), 0.15);
    println!(
        "passed {} | residual {:.2e} | diagonal {:.2e} | max step {:.3}",
        report.passed, report.max_algebraic_residual, report.max_diagonal_residual, report.max_step
    );
    for (i, piece) in path.pieces.iter().enumerate() {
        println!("piece {i}: {} samples, length {:.3}", piece.sample_count(), piece.start().dist(piece.end()));
    }
    Ok(())
}
