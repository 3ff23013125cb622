//! Real projections with diagonal 1/2: M2(R) has two components, while
//! larger sizes are joined through the bridge projection.

use std::f64::consts::FRAC_PI_4;

use diagonal_homotopy::config::{PathOptions, ToleranceConfig};
use diagonal_homotopy::error::Result;
use diagonal_homotopy::linalg::{Field, Matrix};
use diagonal_homotopy::pathio::validate_path;
use diagonal_homotopy::projection_paths::{bridge_projection, canonical_projection, half_diagonal_path_to_canonical};

fn main() -> Result<()> {
    let opts = PathOptions::default();

    let other = Matrix::real_rows(&[[0.5, -0.5], [-0.5, 0.5]]);
    match half_diagonal_path_to_canonical(&other, Field::Real, &opts) {
        Err(e) => println!("M2(R): {e}"),
        Ok(_) => println!("M2(R): unexpectedly connected"),
    }

    for n in [2, 3] {
        let b = bridge_projection(n)?;
        let path = half_diagonal_path_to_canonical(&b, Field::Real, &opts)?;
        let r = validate_path(&path, &ToleranceConfig::default(), 0.15);
        let real = path.pieces.iter().all(|p| p.field() == Field::Real);
        println!(
            "M{}(R): bridge to canonical, {} samples, real {real}, passed {}",
            2 * n,
            path.sample_count(),
            r.passed
        );
        println!("  end matches canonical: {}", path.end().unwrap().dist(&canonical_projection(n, FRAC_PI_4)) < 1e-12);
    }
    Ok(())
}
