//! Unit-norm tight frames: Gram projections, the way back, and a path
//! between two frames of 2n vectors.

use diagonal_homotopy::config::{PathOptions, ToleranceConfig};
use diagonal_homotopy::error::Result;
use diagonal_homotopy::frames::{connect_frames, Frame, frame_from_projection, gram_projection, harmonic_frame, verify_funtf};
use diagonal_homotopy::linalg::{Field, Matrix};

fn main() -> Result<()> {
    let tol = ToleranceConfig::default();
    let f = harmonic_frame(2, 4)?;
    let report = verify_funtf(&f, 1e-12);
    println!("harmonic 4 in C^2: funtf {} ({:.1e})", report.is_funtf, report.max_residual());

    let p = gram_projection(&f, &tol)?;
    let back = frame_from_projection(&p, &tol)?;
    println!("gram round trip: {:.1e}", gram_projection(&back, &tol)?.dist(&p));

    let g = harmonic_frame(2, 4)?;
    let mut rotated = g.vectors.clone();
    rotated.rotate_left(1);
    let g = Frame::new(rotated, Field::Complex)?;

    let path = connect_frames(&f, &g, &PathOptions::default())?;
    println!(
        "{} frames along the path, tightness {:.1e}, norms {:.1e}",
        path.samples.len(),
        path.max_tightness_residual,
        path.max_norm_residual
    );
    let (_, mid) = &path.samples[path.samples.len() / 2];
    let a = mid.analysis_isometry();
    println!("midpoint |A*A - id| = {:.1e}", (&a.adjoint() * &a).dist(&Matrix::identity(2)));

    let real = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let flipped = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, -1.0]])?;
    match connect_frames(&real, &flipped, &PathOptions::default()) {
        Ok(p) => println!("real pair connected with {} frames", p.samples.len()),
        Err(e) => println!("real pair: {e}"),
    }
    Ok(())
}
