use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::LinalgError;

/// A sparse integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, data: (0..rows).map(|_| Vec::new()).collect() }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated
    /// positions are summed and zeros dropped.
    pub fn from_triplets<T: Into<BigInt>>(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self, LinalgError> {
        let mut m = SparseIntMatrix::zeros(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange { row: r, col: c });
            }
            m.data[r].push((c, v.into()));
        }
        for row in &mut m.data {
            normalize(row);
        }
        Ok(m)
    }

    /// Builds a matrix from sparse rows of small coefficients.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, i64)>]) -> Result<Self, LinalgError> {
        let trip = rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)));
        Self::from_triplets(rows.len(), cols, trip)
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(dense: &[Vec<T>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let trip =
            dense.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone())));
        Self::from_triplets(dense.len(), cols, trip).unwrap()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = alloc::vec![alloc::vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let trip = self.triplets().map(|(r, c, v)| (c, r, v.clone()));
        Self::from_triplets(self.cols, self.rows, trip).unwrap()
    }

    /// The matrix with rows and columns renumbered: entry `(r, c)` moves
    /// to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let trip = self.triplets().map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone()));
        Self::from_triplets(self.rows, self.cols, trip).unwrap()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stacked(&self, other: &SparseIntMatrix) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::ColumnMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(SparseIntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// The rows as pairs of small integers, if every entry fits in `i64`.
    pub(crate) fn small_rows(&self) -> Option<Vec<Vec<(usize, i64)>>> {
        self.data.iter().map(|row| row.iter().map(|(c, v)| v.to_i64().map(|v| (*c, v))).collect()).collect()
    }

    pub(crate) fn big_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        self.data.clone()
    }
}

fn normalize(row: &mut Vec<(usize, BigInt)>) {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
    for (c, v) in row.drain(..) {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    *row = out;
}
