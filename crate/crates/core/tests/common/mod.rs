#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_4, PI};

use diagonal_homotopy::linalg::{Field, Matrix, C64};
use diagonal_homotopy::projection_paths::{m4_family, p1_form, M4Family};
use diagonal_homotopy::random::{gaussian_matrix, random_diagonal_unitary, random_permutation, random_unitary, SeededRng};
use rand::Rng;

pub fn phase(rng: &mut SeededRng) -> C64 {
    C64::from_polar(1.0, rng.random_range(-PI..PI))
}

/// `t ∈ (0,∞)³` with `|t| = 1/2`.
pub fn t3(rng: &mut SeededRng) -> [f64; 3] {
    let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.05..1.0));
    let s = 0.5 / v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x * s)
}

pub fn t2(rng: &mut SeededRng) -> [f64; 2] {
    let a: f64 = rng.random_range(0.05..1.5);
    [0.5 * a.cos(), 0.5 * a.sin()]
}

pub fn random_m4(rng: &mut SeededRng, field: Field) -> Matrix {
    let which = if field == Field::Real { rng.random_range(1..3) } else { rng.random_range(0..3) };
    let xi = |rng: &mut SeededRng| match field {
        Field::Real => C64::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0),
        Field::Complex => phase(rng),
    };
    let fam = match which {
        0 => M4Family::Full {
            t: t3(rng),
            xi: [xi(rng), xi(rng), xi(rng)],
            upper_sign: if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        },
        1 => M4Family::FourNull {
            variant: rng.random_range(0..3),
            t: t2(rng),
            xi: [xi(rng), xi(rng), xi(rng)],
        },
        _ => M4Family::EightNull {
            variant: rng.random_range(0..3),
            xi: [xi(rng), xi(rng)],
        },
    };
    m4_family(&fam, field).unwrap()
}

/// `D·P·p·P^T·D*` for a random permutation `P` and diagonal unitary `D`.
pub fn scramble(rng: &mut SeededRng, p: &Matrix, field: Field) -> Matrix {
    let perm = random_permutation(rng, p.rows());
    let d = random_diagonal_unitary(rng, p.rows(), field);
    (&(&d * &p.permute(&perm)) * &d.adjoint()).into_field(field)
}

/// Projection with diagonal 1/2 in `M_{2n}`.
pub fn random_half_projection(rng: &mut SeededRng, n: usize, field: Field) -> Matrix {
    let p = match (n, rng.random_range(0..3)) {
        (2, 0) => random_m4(rng, field),
        (3, 0) => Matrix::direct_sum(&[random_m4(rng, field), p1_form(&random_unitary(rng, 1, field), FRAC_PI_4)]),
        _ => p1_form(&random_unitary(rng, n, field), FRAC_PI_4),
    };
    scramble(rng, &p, field)
}

/// `S·diag(1,…,1,0,…,0)·S⁻¹` with `S = id + G/2`, rank `k`.
pub fn random_idempotent(rng: &mut SeededRng, n: usize, k: usize) -> Matrix {
    loop {
        let s = &Matrix::identity(n) + &gaussian_matrix(rng, n, n, Field::Complex).scale_real(0.5);
        let Ok(si) = diagonal_homotopy::linalg::inverse(&s) else { continue };
        let e: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
        let q = &(&s * &Matrix::diag_real(&e)) * &si;
        if q.norm_fro() < 20.0 {
            return q;
        }
    }
}

/// Rank of `m` by Gaussian elimination with full pivoting.
pub fn elimination_rank(m: &Matrix, tol: f64) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<C64>> = (0..rows).map(|i| m.row(i)).collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, z| s.max(z.norm())).max(1.0);
    let mut rank = 0;
    for c in 0..cols.min(rows) {
        let mut best = (0.0, 0, 0);
        for (i, row) in a.iter().enumerate().skip(c) {
            for (j, z) in row.iter().enumerate().skip(c) {
                if z.norm() > best.0 {
                    best = (z.norm(), i, j);
                }
            }
        }
        if best.0 <= tol * scale {
            break;
        }
        a.swap(c, best.1);
        for row in a.iter_mut() {
            row.swap(c, best.2);
        }
        let piv = a[c][c];
        for i in c + 1..rows {
            let f = a[i][c] / piv;
            for j in c..cols {
                let v = a[c][j];
                a[i][j] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Residual `‖M·c − b‖_∞` of a particular solution of `M·c = b` found by
/// full-pivot Gauss–Jordan elimination, dropping pivots below `tol`.
/// Small exactly when the system is solvable.
pub fn solve_residual(m: &Matrix, b: &[C64], tol: f64) -> f64 {
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut r = m.row(i);
            r.push(b[i]);
            r
        })
        .collect();
    let scale = m.data().iter().fold(0.0f64, |s, z| s.max(z.norm())).max(1.0);
    let mut order: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    for c in 0..n {
        let mut best = (0.0, 0, 0);
        for (i, row) in a.iter().enumerate().skip(c) {
            for (j, z) in row.iter().enumerate().take(n).skip(c) {
                if z.norm() > best.0 {
                    best = (z.norm(), i, j);
                }
            }
        }
        if best.0 <= tol * scale {
            break;
        }
        a.swap(c, best.1);
        for row in a.iter_mut() {
            row.swap(c, best.2);
        }
        order.swap(c, best.2);
        let piv = a[c][c];
        for i in 0..n {
            if i != c {
                let f = a[i][c] / piv;
                for j in c..=n {
                    let v = a[c][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for &c in &pivots {
        x[order[c]] = a[c][n] / a[c][c];
    }
    m.mul_vec(&x).iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}
