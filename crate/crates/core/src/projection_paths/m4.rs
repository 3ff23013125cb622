use std::f64::consts::FRAC_PI_2;

use crate::config::PathOptions;
use crate::diagonal::{expectation, DiagonalVector};
use crate::error::{Error, Result};
use crate::linalg::{real, Field, Matrix, C64, I};
use crate::path::{sample_adaptive, OperatorPath, PathKind};

/// The projections of M₄ with diagonal 1/2, by number of zero entries.
///
/// Pair partitions of `{0,1,2,3}` are numbered `P0 = {01,23}`,
/// `P1 = {02,13}`, `P2 = {03,12}`. `EightNull` variant `v` is supported on
/// `P_v`. `FourNull` variant 0 vanishes on `P2`, variant 1 on `P0` and
/// variant 2 on `P1`.
#[derive(Debug, Clone, PartialEq)]
pub enum M4Family {
    /// `upper_sign = +1` selects the upper signs of `∓` and `±`.
    Full { t: [f64; 3], xi: [C64; 3], upper_sign: f64 },
    FourNull { variant: usize, t: [f64; 2], xi: [C64; 3] },
    EightNull { variant: usize, xi: [C64; 2] },
}

const PARAM_TOL: f64 = 1e-12;

fn check_t(t: &[f64]) -> Result<()> {
    if t.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::BadParameters(format!("t must be positive: {t:?}")));
    }
    let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 0.5).abs() > PARAM_TOL {
        return Err(Error::BadParameters(format!("|t| = {norm} but must equal 1/2")));
    }
    Ok(())
}

fn check_xi(xi: &[C64], field: Field) -> Result<()> {
    for z in xi {
        if (z.norm() - 1.0).abs() > PARAM_TOL {
            return Err(Error::BadParameters(format!("|xi| must be 1, got {z}")));
        }
        if field == Field::Real && z.im.abs() > PARAM_TOL {
            return Err(Error::BadParameters(format!("real family needs xi = ±1, got {z}")));
        }
    }
    Ok(())
}

fn check_variant(v: usize) -> Result<()> {
    if v > 2 {
        return Err(Error::BadParameters(format!("variant {v} not in 0..=2")));
    }
    Ok(())
}

fn swap(i: usize, j: usize) -> Vec<usize> {
    let mut p = vec![0, 1, 2, 3];
    p.swap(i, j);
    p
}

pub fn m4_family(family: &M4Family, field: Field) -> Result<Matrix> {
    let h = real(0.5);
    let m = match family {
        M4Family::Full { t, xi, upper_sign } => {
            if field == Field::Real {
                return Err(Error::RealFullFamilyEmpty);
            }
            check_t(t)?;
            check_xi(xi, field)?;
            if *upper_sign != 1.0 && *upper_sign != -1.0 {
                return Err(Error::BadParameters("sign must be +1 or -1".into()));
            }
            let s = I * *upper_sign;
            let [t1, t2, t3] = *t;
            let [x1, x2, x3] = *xi;
            Matrix::complex_rows(&[
                [h, x1.conj() * t1, x2.conj() * t2, x3.conj() * t3],
                [x1 * t1, h, -s * t3 * x1 * x2.conj(), s * t2 * x1 * x3.conj()],
                [x2 * t2, s * t3 * x1.conj() * x2, h, -s * t1 * x2 * x3.conj()],
                [x3 * t3, -s * t2 * x1.conj() * x3, s * t1 * x2.conj() * x3, h],
            ])
        }
        M4Family::FourNull { variant, t, xi } => {
            check_variant(*variant)?;
            check_t(t)?;
            check_xi(xi, field)?;
            let [t1, t2] = *t;
            let [x1, x2, x3] = *xi;
            let z = C64::new(0.0, 0.0);
            let m = Matrix::complex_rows(&[
                [h, x1.conj() * t1, x2.conj() * t2, z],
                [x1 * t1, h, z, x3.conj() * t2],
                [x2 * t2, z, h, -t1 * x1.conj() * x2 * x3.conj()],
                [z, x3 * t2, -t1 * x1 * x2.conj() * x3, h],
            ]);
            match variant {
                0 => m,
                1 => m.permute(&swap(1, 3)),
                _ => m.permute(&swap(2, 3)),
            }
        }
        M4Family::EightNull { variant, xi } => {
            check_variant(*variant)?;
            check_xi(xi, field)?;
            let [x1, x2] = *xi;
            let z = C64::new(0.0, 0.0);
            let m = Matrix::complex_rows(&[
                [h, x1.conj() * 0.5, z, z],
                [x1 * 0.5, h, z, z],
                [z, z, h, x2.conj() * 0.5],
                [z, z, x2 * 0.5, h],
            ]);
            match variant {
                0 => m,
                1 => m.permute(&swap(1, 2)),
                _ => m.permute(&swap(1, 3)),
            }
        }
    };
    let m = m.into_field(field);
    let residual = m.projection_residual().max(expectation(&m).dist_inf(&DiagonalVector::constant(4, 0.5)));
    if residual > PARAM_TOL {
        return Err(Error::BadParameters(format!("result is off by {residual:.3e}")));
    }
    Ok(m)
}

fn check_signs(eps: [f64; 4]) -> Result<()> {
    if eps.iter().any(|&e| e != 1.0 && e != -1.0) {
        return Err(Error::BadParameters(format!("signs must be ±1: {eps:?}")));
    }
    if eps.iter().product::<f64>() != -1.0 {
        return Err(Error::SignConstraintViolated);
    }
    Ok(())
}

/// Real projection with diagonal 1/2 on the path between two extreme
/// points; `eps = (ε₁, ε₂, ε₅, ε₆)` with product −1.
pub fn m4_real_extreme(eps: [f64; 4], theta: f64) -> Result<Matrix> {
    check_signs(eps)?;
    let [e1, e2, e5, e6] = eps;
    let (s, c) = theta.sin_cos();
    Ok(Matrix::real_rows(&[
        [0.5, c * e1 / 2.0, s * e2 / 2.0, 0.0],
        [c * e1 / 2.0, 0.5, 0.0, s * e5 / 2.0],
        [s * e2 / 2.0, 0.0, 0.5, c * e6 / 2.0],
        [0.0, s * e5 / 2.0, c * e6 / 2.0, 0.5],
    ]))
}

/// `θ ↦ m4_real_extreme(eps, θ)` for `θ ∈ [0, π/2]`.
pub fn m4_real_extreme_path(eps: [f64; 4], samples: usize) -> Result<OperatorPath> {
    check_signs(eps)?;
    let opts = PathOptions::default().with_samples(samples);
    let piece = sample_adaptive(|t| m4_real_extreme(eps, t * FRAC_PI_2), &opts)?;
    let mut path = OperatorPath::new(PathKind::Projection, DiagonalVector::constant(4, 0.5));
    path.pieces.push(piece);
    Ok(path)
}
