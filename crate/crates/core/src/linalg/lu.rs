//! LU factorization with partial pivoting.

use super::matrix::{Matrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = a.norm_max().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != ZERO {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= f * u;
                    }
                }
            }
        }
        Ok(Self { n, lu, perm, sign })
    }

    pub fn det(&self) -> C64 {
        let mut d = C64::new(self.sign, 0.0);
        for k in 0..self.n {
            d *= self.lu[k * self.n + k];
        }
        d
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.n;
        let cols: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                self.solve_vec(&e)
            })
            .collect();
        Matrix::from_columns(n, &cols)
    }
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let inv = Lu::new(a)?.inverse();
    Ok(inv.into_field(a.field()))
}

/// Determinant; zero for numerically singular input.
pub fn det(a: &Matrix) -> Result<C64> {
    a.ensure_square()?;
    match Lu::new(a) {
        Ok(lu) => Ok(lu.det()),
        Err(Error::Singular) => Ok(ZERO),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{real, I};

    #[test]
    fn inverse_and_det_of_small_matrices() {
        let a = Matrix::real_rows(&[[1.0, 1.0], [1.0, -1.0]]);
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).dist(&Matrix::identity(2)) < 1e-15);
        assert!((det(&a).unwrap() - real(-2.0)).norm() < 1e-15);
        let c = Matrix::complex_rows(&[[I, ONE], [ZERO, I]]);
        assert!((det(&c).unwrap() - real(-1.0)).norm() < 1e-15);
        let s = Matrix::real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(det(&s).unwrap(), ZERO);
        assert!(matches!(inverse(&s), Err(Error::Singular)));
    }
}
