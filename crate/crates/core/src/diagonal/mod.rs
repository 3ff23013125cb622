//! The diagonal masa: expectation onto diagonals, diagonal projections and
//! minimal block decompositions.

mod union_find;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_tol, real, Field, Matrix, C64};
pub use union_find::UnionFind;

/// An element of the diagonal algebra, stored as its diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalVector {
    entries: Vec<C64>,
    field: Field,
}

impl DiagonalVector {
    pub fn new(entries: Vec<C64>) -> Self {
        let field = entries.iter().fold(Field::Real, |f, z| f.join(Field::of_scalar(*z)));
        Self { entries, field }
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self {
            entries: entries.iter().map(|&x| real(x)).collect(),
            field: Field::Real,
        }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self::from_real(&vec![value; n])
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = self.field.join(field);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.iter().sum()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.entries.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.re).collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::diag(&self.entries).into_field(self.field)
    }

    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            entries: idx.iter().map(|&i| self.entries[i]).collect(),
            field: self.field,
        }
    }

    /// Sup-norm distance.
    pub fn dist_inf(&self, other: &DiagonalVector) -> f64 {
        assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &DiagonalVector) -> DiagonalVector {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self {
            entries,
            field: self.field.join(other.field),
        }
    }
}

impl std::ops::Index<usize> for DiagonalVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

/// Orthogonal projection onto the coordinates in `support`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalProjection {
    support: Vec<usize>,
    n: usize,
}

impl DiagonalProjection {
    pub fn new(n: usize, mut support: Vec<usize>) -> Result<Self> {
        support.sort_unstable();
        support.dedup();
        if support.iter().any(|&i| i >= n) {
            return Err(Error::InvalidArgument(format!("support index out of range for n = {n}")));
        }
        Ok(Self { support, n })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.support.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self {
            support: (0..self.n).filter(|&i| !self.contains(i)).collect(),
            n: self.n,
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        let d: Vec<f64> = (0..self.n).map(|i| if self.contains(i) { 1.0 } else { 0.0 }).collect();
        Matrix::diag_real(&d)
    }
}

/// Partition of `{0..n-1}` into the supports of the minimal projections of
/// a relative commutant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::InvalidArgument(format!("index {i} repeated or out of range")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("blocks do not cover all indices".into()));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }

    pub fn projection(&self, j: usize) -> DiagonalProjection {
        DiagonalProjection {
            support: self.blocks[j].clone(),
            n: self.n(),
        }
    }

    /// Every block of `finer` lies inside a block of `self`.
    pub fn is_coarser_than(&self, finer: &BlockPartition) -> bool {
        finer.blocks.iter().all(|b| {
            let j = self.block_of(b[0]);
            j.is_some() && b.iter().all(|&i| self.block_of(i) == j)
        })
    }
}

/// Diagonal part of a square matrix.
pub fn expectation(x: &Matrix) -> DiagonalVector {
    DiagonalVector {
        entries: x.diagonal(),
        field: x.field(),
    }
}

/// Connected components of the graph with an edge i–j whenever
/// `|x[i,j]|` or `|x[j,i]|` exceeds `tol`.
pub fn minimal_block_decomposition(x: &Matrix, tol: f64) -> BlockPartition {
    let n = x.rows();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if x[(i, j)].norm() > tol || x[(j, i)].norm() > tol {
                uf.union(i, j);
            }
        }
    }
    BlockPartition { blocks: uf.groups() }
}

pub fn relative_commutant_dimension(p: &Matrix, tol: f64) -> usize {
    minimal_block_decomposition(p, tol).len()
}

/// Per block `f_j`: `(Tr d·f_j, rank f_j·p·f_j)`.
pub fn block_trace_profile(
    d: &DiagonalVector,
    p: &Matrix,
    part: &BlockPartition,
    tol: &ToleranceConfig,
) -> Result<Vec<(C64, usize)>> {
    let n = p.ensure_square()?;
    if d.len() != n || part.n() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("length {n}"),
            got: format!("diagonal {}, partition {}", d.len(), part.n()),
        });
    }
    let residual = p.projection_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    part.blocks()
        .iter()
        .map(|b| {
            let trace: C64 = b.iter().map(|&i| d[i]).sum();
            Ok((trace, projection_rank(&p.select(b))?))
        })
        .collect()
}

/// Number of eigenvalues above 1/2 of a (numerical) projection.
pub fn projection_rank(p: &Matrix) -> Result<usize> {
    let eig = hermitian_eig_tol(&p.hermitian_part(), 1e-6)?;
    Ok(eig.values.iter().filter(|&&l| l > 0.5).count())
}

/// `|z − round(re z)| ≤ tol` and `|im z| ≤ tol`; returns the integer.
pub fn near_integer(z: C64, tol: f64) -> Option<i64> {
    let k = z.re.round();
    ((z.re - k).abs() <= tol && z.im.abs() <= tol).then_some(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_block() -> Matrix {
        Matrix::real_rows(&[[0.5, 0.5], [0.5, 0.5]])
    }

    fn bridge_block() -> Matrix {
        Matrix::direct_sum(&[half_block(), half_block()])
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation(&Matrix::identity(3)), DiagonalVector::constant(3, 1.0));
        let x = Matrix::real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(expectation(&x).real_parts(), vec![1.0, 4.0]);
    }

    #[test]
    fn block_decomposition_examples() {
        let t = 1e-10;
        let part = minimal_block_decomposition(&Matrix::diag_real(&[1.0, 2.0, 3.0]), t);
        assert_eq!(part.blocks(), &[vec![0], vec![1], vec![2]]);
        let ones = Matrix::from_fn(3, 3, Field::Real, |_, _| real(1.0));
        assert_eq!(minimal_block_decomposition(&ones, t).blocks(), &[vec![0, 1, 2]]);
        assert_eq!(minimal_block_decomposition(&bridge_block(), t).blocks(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn one_sided_entries_connect() {
        let x = Matrix::real_rows(&[[1.0, 0.0], [1.0, 0.0]]);
        assert_eq!(minimal_block_decomposition(&x, 1e-10).len(), 1);
    }

    #[test]
    fn commutant_dimensions() {
        assert_eq!(relative_commutant_dimension(&Matrix::identity(4), 1e-10), 4);
        assert_eq!(relative_commutant_dimension(&half_block(), 1e-10), 1);
        assert_eq!(relative_commutant_dimension(&bridge_block(), 1e-10), 2);
    }

    #[test]
    fn trace_profiles() {
        let tol = ToleranceConfig::default();
        let id = Matrix::identity(2);
        let part = minimal_block_decomposition(&id, tol.zero_tol);
        let prof = block_trace_profile(&DiagonalVector::constant(2, 1.0), &id, &part, &tol).unwrap();
        assert_eq!(prof, vec![(real(1.0), 1), (real(1.0), 1)]);

        let p = half_block();
        let part = minimal_block_decomposition(&p, tol.zero_tol);
        let prof = block_trace_profile(&DiagonalVector::constant(2, 0.5), &p, &part, &tol).unwrap();
        assert_eq!(prof, vec![(real(1.0), 1)]);

        let p = bridge_block();
        let part = minimal_block_decomposition(&p, tol.zero_tol);
        let prof = block_trace_profile(&DiagonalVector::constant(4, 0.5), &p, &part, &tol).unwrap();
        assert_eq!(prof, vec![(real(1.0), 1), (real(1.0), 1)]);
    }

    #[test]
    fn profile_rejects_non_projection() {
        let tol = ToleranceConfig::default();
        let x = Matrix::real_rows(&[[1.0, 1.0], [0.0, 0.0]]);
        let part = minimal_block_decomposition(&x, tol.zero_tol);
        let r = block_trace_profile(&DiagonalVector::constant(2, 0.5), &x, &part, &tol);
        assert!(matches!(r, Err(Error::NotProjection { .. })));
    }

    #[test]
    fn partitions_compare() {
        let coarse = BlockPartition::new(4, vec![vec![0, 1, 2], vec![3]]).unwrap();
        let fine = BlockPartition::new(4, vec![vec![0, 2], vec![1], vec![3]]).unwrap();
        assert!(coarse.is_coarser_than(&fine));
        assert!(!fine.is_coarser_than(&coarse));
        assert!(BlockPartition::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn integrality() {
        assert_eq!(near_integer(C64::new(2.0 + 1e-12, -1e-12), 1e-8), Some(2));
        assert_eq!(near_integer(C64::new(1.5, 0.0), 1e-8), None);
        assert_eq!(near_integer(C64::new(1.0, 0.1), 1e-8), None);
    }
}
