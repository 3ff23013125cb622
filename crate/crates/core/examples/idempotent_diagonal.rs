//! Build an idempotent with a prescribed diagonal, then one with a
//! prescribed range as well.

use diagonal_homotopy::config::ToleranceConfig;
use diagonal_homotopy::diagonal::{expectation, DiagonalVector};
use diagonal_homotopy::error::Result;
use diagonal_homotopy::idempotent::{
    construct_idempotent_with_diagonal, diagonal_feasible, idempotent_with_range_and_diagonal, range_diagonal_feasible,
};
use diagonal_homotopy::linalg::Matrix;
use diagonal_homotopy::pathio::format_complex;

fn show(name: &str, m: &Matrix) {
    println!("{name} =");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).into_iter().map(format_complex).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() -> Result<()> {
    let tol = ToleranceConfig::default();

    let d = DiagonalVector::from_real(&[0.9, -0.4, 1.7, 0.8]);
    println!("{:?}", diagonal_feasible(&d, &tol));
    let q = construct_idempotent_with_diagonal(&d, &tol)?;
    show("q", &q);
    println!("|q^2 - q| = {:.2e}, |E(q) - d| = {:.2e}", q.idempotent_residual(), expectation(&q).dist_inf(&d));

    // trace 1.5 is not an integer
    let bad = DiagonalVector::from_real(&[0.5, 0.5, 0.5]);
    println!("{:?}", construct_idempotent_with_diagonal(&bad, &tol).unwrap_err());

    let p = Matrix::real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
    let d = DiagonalVector::from_real(&[1.0, 0.0]);
    println!("{:?}", range_diagonal_feasible(&p, &d, &tol)?);
    show("q with range of p", &idempotent_with_range_and_diagonal(&p, &d, &tol)?);
    Ok(())
}
