use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Base field of a matrix, vector or frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl Field {
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }

    pub fn of_scalar(z: C64) -> Field {
        if z.im == 0.0 {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "R"),
            Field::Complex => write!(f, "C"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" | "real" => Ok(Field::Real),
            "C" | "c" | "complex" => Ok(Field::Complex),
            other => Err(Error::InvalidArgument(format!("unknown field {other:?}"))),
        }
    }
}

/// Dense row-major matrix over R or C.
///
/// Entries are always stored as complex numbers. The field tag records the
/// intended base field; a `Real` matrix has identically zero imaginary parts.
/// Arithmetic joins the tags, and [`Matrix::into_field`] re-tags a result
/// (dropping round-off imaginary parts when moving to `Real`).
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            field: Field::Real,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, field: Field, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, field, data }.into_field(field)
    }

    /// Build from complex entries in row-major order; tagged `Complex`.
    pub fn from_complex(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{}", data.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            field: Field::Complex,
            data,
        })
    }

    /// Build from real entries in row-major order; tagged `Real`.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{}", data.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            field: Field::Real,
            data: data.iter().map(|&x| real(x)).collect(),
        })
    }

    /// Build a real matrix from rows. Panics on ragged input.
    pub fn real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged rows");
            data.extend(row.as_ref().iter().map(|&x| real(x)));
        }
        Self {
            rows: r,
            cols: c,
            field: Field::Real,
            data,
        }
    }

    /// Build a complex matrix from rows. Panics on ragged input.
    pub fn complex_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged rows");
            data.extend_from_slice(row.as_ref());
        }
        Self {
            rows: r,
            cols: c,
            field: Field::Complex,
            data,
        }
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let field = entries
            .iter()
            .fold(Field::Real, |f, z| f.join(Field::of_scalar(*z)));
        let mut m = Self::zeros(n, n);
        m.field = field;
        for (i, z) in entries.iter().enumerate() {
            m.data[i * n + i] = *z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let z: Vec<C64> = entries.iter().map(|&x| real(x)).collect();
        Self::diag(&z)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        m.field = Field::Complex;
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, z) in col.iter().enumerate() {
                m.data[i * m.cols + j] = *z;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Re-tag the matrix. Moving to `Real` discards imaginary parts.
    pub fn into_field(mut self, field: Field) -> Self {
        if field == Field::Real {
            for z in &mut self.data {
                z.im = 0.0;
            }
        }
        self.field = field;
        self
    }

    /// Largest imaginary part, in modulus.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        if v.im != 0.0 {
            self.field = Field::Complex;
        }
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        m.field = self.field;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        m.field = self.field;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let data: Vec<C64> = self.data.iter().map(|&z| f(z)).collect();
        let field = data
            .iter()
            .fold(Field::Real, |acc, z| acc.join(Field::of_scalar(*z)))
            .join(self.field);
        Self {
            rows: self.rows,
            cols: self.cols,
            field,
            data,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = self.map(|z| z * s);
        m.field = self.field.join(Field::of_scalar(s));
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        let mut m = self.clone();
        for z in &mut m.data {
            *z *= s;
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// ‖self − other‖_F; panics on shape mismatch.
    pub fn dist(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in dist");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖a − a*‖_F.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// (a + a*) / 2.
    pub fn hermitian_part(&self) -> Self {
        let mut m = self + &self.adjoint();
        for z in &mut m.data {
            *z *= 0.5;
        }
        m
    }

    /// ‖m² − m‖_F.
    pub fn idempotent_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self * self).dist(self)
    }

    /// ‖m² − m‖_F + ‖m − m*‖_F.
    pub fn projection_residual(&self) -> f64 {
        self.idempotent_residual() + self.hermitian_residual()
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        let mut m = Self::zeros(rows.len(), cols.len());
        m.field = self.field;
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                m.data[i * m.cols + j] = self[(r0 + i, c0 + j)];
            }
        }
        m
    }

    /// Rows and columns picked out by `idx` (compression to a coordinate subset).
    pub fn select(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), self.field, |i, j| self[(idx[i], idx[j])])
    }

    /// Assemble a 2×2 block matrix [[a, b], [c, d]].
    pub fn block2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let field = a.field.join(b.field).join(c.field).join(d.field);
        let mut m = Self::zeros(rows, cols);
        m.field = field;
        for i in 0..rows {
            for j in 0..cols {
                let v = match (i < a.rows, j < a.cols) {
                    (true, true) => a[(i, j)],
                    (true, false) => b[(i, j - a.cols)],
                    (false, true) => c[(i - a.rows, j)],
                    (false, false) => d[(i - a.rows, j - a.cols)],
                };
                m.data[i * cols + j] = v;
            }
        }
        m
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.field = m.field.join(b.field);
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(r0 + i) * cols + c0 + j] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// `P·self·Pᵀ` for the permutation sending old index `perm[i]` to new index `i`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        assert!(self.is_square());
        self.select(perm)
    }

    /// Inverse of [`Matrix::permute`].
    pub fn unpermute(&self, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        m.field = self.field;
        for i in 0..n {
            for j in 0..n {
                m.data[perm[i] * n + perm[j]] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(C64, C64) -> C64) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field.join(other.field),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// (1 − s)·self + s·other.
    pub fn lerp(&self, other: &Matrix, s: f64) -> Matrix {
        self.zip_with(other, |a, b| a * (1.0 - s) + b * s)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Matrix {
            rows: n,
            cols: p,
            field: self.field.join(rhs.field),
            data: out,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Matrix {
            type Output = Matrix;
            fn $f(self, rhs: Matrix) -> Matrix {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Matrix> for Matrix {
            type Output = Matrix;
            fn $f(self, rhs: &Matrix) -> Matrix {
                (&self).$f(rhs)
            }
        }
        impl $tr<Matrix> for &Matrix {
            type Output = Matrix;
            fn $f(self, rhs: Matrix) -> Matrix {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if self.field == Field::Real {
                    write!(f, " {:>10.6}", z.re)?;
                } else {
                    write!(f, " {:>9.5}{:+.5}i", z.re, z.im)?;
                }
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Hermitian inner product ⟨x, y⟩ = Σ x_i conj(y_i) (linear in the first slot).
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Outer product x·y*.
pub fn outer(x: &[C64], y: &[C64]) -> Matrix {
    let field = x
        .iter()
        .chain(y)
        .fold(Field::Real, |f, z| f.join(Field::of_scalar(*z)));
    Matrix::from_fn(x.len(), y.len(), field, |i, j| x[i] * y[j].conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_and_permutation_bookkeeping() {
        let a = Matrix::real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let z = Matrix::zeros(2, 2);
        let m = Matrix::block2(&a, &z, &z, &a);
        assert_eq!(m[(3, 2)], real(3.0));
        assert_eq!(m.submatrix(2..4, 2..4), a);
        let perm = [2, 0, 3, 1];
        let back = m.permute(&perm).unpermute(&perm);
        assert_eq!(back, m);
        assert_eq!(m.permute(&perm)[(0, 0)], m[(2, 2)]);
    }

    #[test]
    fn field_tags_join() {
        let r = Matrix::identity(2);
        let c = Matrix::diag(&[I, ONE]);
        assert_eq!((&r * &r).field(), Field::Real);
        assert_eq!((&r * &c).field(), Field::Complex);
        assert_eq!(c.into_field(Field::Real).max_imag(), 0.0);
        assert_eq!(r.scale(I).field(), Field::Complex);
    }

    #[test]
    fn adjoint_and_residuals() {
        let m = Matrix::complex_rows(&[[ONE, I], [-I, real(2.0)]]);
        assert_eq!(m.hermitian_residual(), 0.0);
        assert_eq!(m.adjoint(), m);
        let p = Matrix::real_rows(&[[0.5, 0.5], [0.5, 0.5]]);
        assert!(p.projection_residual() < 1e-15);
    }
}
