//! Subset-sum gap of a diagonal and the rigidity check near it.

use diagonal_homotopy::config::ToleranceConfig;
use diagonal_homotopy::diagonal::DiagonalVector;
use diagonal_homotopy::error::Result;
use diagonal_homotopy::idempotent::{gamma_bound, rigidity_check};
use diagonal_homotopy::projection_paths::canonical_projection;

fn main() -> Result<()> {
    let tol = ToleranceConfig::default();
    for d in [vec![0.5; 6], vec![0.3, 0.4, 0.3], vec![1.0, 0.0, 1.0]] {
        let g = gamma_bound(&DiagonalVector::from_real(&d), &tol)?;
        println!("{d:?}: gamma {:.3}, bound {:.4}, non-integer sums {}", g.gamma, g.bound, g.s_has_nonintegers);
    }

    let q = canonical_projection(3, std::f64::consts::FRAC_PI_4);
    // blocks of q are {i, i + 3}
    for d in [[0.6, 0.5, 0.5, 0.4, 0.5, 0.5], [0.6, 0.4, 0.5, 0.5, 0.5, 0.5]] {
        let d = DiagonalVector::from_real(&d);
        let g = gamma_bound(&d, &tol)?;
        println!(
            "{:?}: distance 0.1, bound {:.4}, feasible for the range of q = {}",
            d.real_parts(),
            g.bound,
            rigidity_check(&q, &d, &tol)?
        );
    }
    Ok(())
}
