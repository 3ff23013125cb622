//! Write a path to JSON, read it back, and emit the residual table.

use diagonal_homotopy::config::ToleranceConfig;
use diagonal_homotopy::error::Result;
use diagonal_homotopy::pathio::{path_from_json, path_to_json, validate_path, write_residual_csv};
use diagonal_homotopy::projection_paths::m4_real_extreme_path;

fn main() -> Result<()> {
    let tol = ToleranceConfig::default();
    let path = m4_real_extreme_path([-1.0, 1.0, 1.0, 1.0], 16)?;
    let text = path_to_json(&path, tol, Some(42))?;
    println!("{} bytes of JSON", text.len());

    let (header, back) = path_from_json(&text)?;
    println!("kind {:?}, n {}, seed {:?}, identical {}", header.kind, header.n, header.seed, back == path);

    let report = validate_path(&back, &tol, 0.15);
    println!("passed {}, {} rows:", report.passed, report.rows.len());
    write_residual_csv(&report.rows[..4], std::io::stdout())?;
    Ok(())
}
