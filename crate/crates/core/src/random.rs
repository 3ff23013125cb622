//! Seeded random matrices for tests, examples and the randomized steps of
//! the idempotent pipeline.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{gram_schmidt_ordered, Field, Matrix, C64, I};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (`E|z|² = 1`); real Gaussian over R.
pub fn gaussian(rng: &mut impl Rng, field: Field) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    match field {
        Field::Real => C64::new(re, 0.0),
        Field::Complex => {
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize, field: Field) -> Matrix {
    Matrix::from_fn(rows, cols, field, |_, _| gaussian(rng, field))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize, field: Field) -> Matrix {
    gaussian_matrix(rng, n, n, field).hermitian_part()
}

/// Skew-Hermitian `i·H` (real skew-symmetric over R).
pub fn random_skew_hermitian(rng: &mut impl Rng, n: usize, field: Field) -> Matrix {
    let g = gaussian_matrix(rng, n, n, field);
    let s = (&g - &g.adjoint()).scale_real(0.5);
    match field {
        Field::Real => s,
        Field::Complex => {
            let h = random_hermitian(rng, n, field);
            (&s + &h.scale(I)).scale_real(std::f64::consts::FRAC_1_SQRT_2)
        }
    }
}

/// Haar-like unitary from Gram–Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut impl Rng, n: usize, field: Field) -> Matrix {
    loop {
        let g = gaussian_matrix(rng, n, n, field);
        if let Some(cols) = gram_schmidt_ordered(&g.columns(), 1e-6) {
            return Matrix::from_columns(n, &cols).into_field(field);
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Diagonal unitary with uniform phases (signs over R).
pub fn random_diagonal_unitary(rng: &mut impl Rng, n: usize, field: Field) -> Matrix {
    let entries: Vec<C64> = (0..n)
        .map(|_| match field {
            Field::Real => C64::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0),
            Field::Complex => C64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)),
        })
        .collect();
    Matrix::diag(&entries).into_field(field)
}

/// Rank-`k` orthogonal projection onto a random subspace.
pub fn random_projection(rng: &mut impl Rng, n: usize, k: usize, field: Field) -> Matrix {
    let u = random_unitary(rng, n, field);
    let cols: Vec<Vec<C64>> = u.columns().into_iter().take(k).collect();
    let r = Matrix::from_columns(n, &cols);
    (&r * &r.adjoint()).hermitian_part().into_field(field)
}
