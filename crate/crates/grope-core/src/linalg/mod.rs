//! Exact integer linear algebra: Smith invariants, cokernels and ranks.
//!
//! Everything starts with a sparse elimination on unit pivots (fixed-width
//! arithmetic, redone with big integers on overflow). Only the remainder,
//! usually small, goes through dense Smith normal form or dense rank.

mod elim;
mod group;
pub mod modular;
mod snf;
mod sparse;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub use group::GradedAbelianGroup;
pub use sparse::SparseIntMatrix;

use elim::{eliminate, Big, Row, I64};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) is outside the matrix")]
    IndexOutOfRange { row: usize, col: usize },
    #[error("expected {expected} columns, found {found}")]
    ColumnMismatch { expected: usize, found: usize },
    #[error("dense remainder of {size} entries exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("torsion coefficient {0} does not fit in 64 bits")]
    TorsionTooLarge(BigInt),
}

/// Limits and seeds for the computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinalgOptions {
    /// Largest dense remainder (rows times columns) accepted.
    pub dense_cap: usize,
    /// Seed for the random primes of the modular rank.
    pub seed: u64,
}

impl Default for LinalgOptions {
    fn default() -> Self {
        LinalgOptions { dense_cap: 40_000_000, seed: 0x6772_6f70_6531 }
    }
}

/// Unit-pivot elimination over the integers. Returns the number of unit
/// pivots and the big-integer remainder.
fn integer_reduce(ncols: usize, rows: Vec<Row<i64>>) -> (usize, Vec<Row<BigInt>>) {
    let big_rows = |rows: &[Row<i64>]| -> Vec<Row<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()).collect()
    };
    match eliminate(&I64, rows.clone(), ncols) {
        Some(e) => (e.pivots, big_rows(&e.rest)),
        None => {
            let e = eliminate(&Big, big_rows(&rows), ncols).unwrap();
            (e.pivots, e.rest)
        }
    }
}

fn big_reduce(ncols: usize, rows: Vec<Row<BigInt>>) -> (usize, Vec<Row<BigInt>>) {
    let e = eliminate(&Big, rows, ncols).unwrap();
    (e.pivots, e.rest)
}

fn densify(rest: &[Row<BigInt>], cap: usize) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    let mut cols: Vec<usize> = rest.iter().flat_map(|r| r.iter().map(|x| x.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    let size = rest.len() * cols.len();
    if size > cap {
        return Err(LinalgError::CapExceeded { size, cap });
    }
    let mut dense = vec![vec![BigInt::zero(); cols.len()]; rest.len()];
    for (i, row) in rest.iter().enumerate() {
        for (c, v) in row {
            dense[i][cols.binary_search(c).unwrap()] = v.clone();
        }
    }
    Ok(dense)
}

fn invariants_from(pivots: usize, rest: &[Row<BigInt>], opts: &LinalgOptions) -> Result<Vec<BigInt>, LinalgError> {
    let mut out = vec![BigInt::one(); pivots];
    out.extend(snf::dense_invariants(densify(rest, opts.dense_cap)?));
    Ok(out)
}

/// Invariant factors `d1 | d2 | ...` of `m` (all positive); their number
/// is the rank over the rationals.
pub fn smith_invariants(m: &SparseIntMatrix) -> Result<Vec<BigInt>, LinalgError> {
    smith_invariants_with(m, &LinalgOptions::default())
}

pub fn smith_invariants_with(m: &SparseIntMatrix, opts: &LinalgOptions) -> Result<Vec<BigInt>, LinalgError> {
    let (pivots, rest) = match m.small_rows() {
        Some(rows) => integer_reduce(m.cols(), rows),
        None => big_reduce(m.cols(), m.big_rows()),
    };
    invariants_from(pivots, &rest, opts)
}

/// Invariant factors of the matrix with the given sparse rows.
pub fn smith_invariants_of_rows(
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    opts: &LinalgOptions,
) -> Result<Vec<BigInt>, LinalgError> {
    let (pivots, rest) = integer_reduce(ncols, rows);
    invariants_from(pivots, &rest, opts)
}

fn group_from_invariants(n: usize, inv: &[BigInt]) -> Result<GradedAbelianGroup, LinalgError> {
    let mut torsion = Vec::new();
    for d in inv {
        if !d.is_one() {
            torsion.push(d.to_u64().ok_or_else(|| LinalgError::TorsionTooLarge(d.clone()))?);
        }
    }
    Ok(GradedAbelianGroup { free_rank: n - inv.len(), torsion })
}

/// `Z^n` modulo the row span of `relations`.
pub fn cokernel(n: usize, relations: &SparseIntMatrix) -> Result<GradedAbelianGroup, LinalgError> {
    if relations.cols() != n {
        return Err(LinalgError::ColumnMismatch { expected: n, found: relations.cols() });
    }
    group_from_invariants(n, &smith_invariants(relations)?)
}

/// `Z^n` modulo the given sparse rows.
pub fn cokernel_of_rows(
    n: usize,
    rows: Vec<Vec<(usize, i64)>>,
    opts: &LinalgOptions,
) -> Result<GradedAbelianGroup, LinalgError> {
    if let Some(&(c, _)) = rows.iter().flat_map(|r| r.iter()).find(|e| e.0 >= n) {
        return Err(LinalgError::ColumnMismatch { expected: n, found: c + 1 });
    }
    group_from_invariants(n, &smith_invariants_of_rows(n, rows, opts)?)
}

/// Outcome of the modular rank computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub primes: Vec<u64>,
    /// The ranks found modulo each prime.
    pub modular: Vec<usize>,
    /// Whether the exact computation was needed.
    pub exact_fallback: bool,
}

/// Rank over the rationals.
pub fn rational_rank(m: &SparseIntMatrix) -> usize {
    rational_rank_report(m, &LinalgOptions::default()).map(|r| r.rank).unwrap_or_else(|_| exact_rank(m))
}

/// Rank over the rationals from two random primes, with the exact
/// computation when they disagree.
pub fn rational_rank_report(m: &SparseIntMatrix, opts: &LinalgOptions) -> Result<RankReport, LinalgError> {
    let big = m.big_rows();
    rank_report(m.cols(), |p| modular::rows_mod(&big, p), || exact_rank(m), opts)
}

/// [`rational_rank_report`] for small-coefficient rows.
pub fn rational_rank_of_rows(
    ncols: usize,
    rows: &[Vec<(usize, i64)>],
    opts: &LinalgOptions,
) -> Result<RankReport, LinalgError> {
    rank_report(
        ncols,
        |p| modular::small_rows_mod(rows, p),
        || exact_rank_of_rows(ncols, rows.to_vec(), opts).unwrap_or(usize::MAX),
        opts,
    )
}

fn rank_report(
    ncols: usize,
    reduce: impl Fn(u64) -> Vec<Row<u64>>,
    exact: impl FnOnce() -> usize,
    opts: &LinalgOptions,
) -> Result<RankReport, LinalgError> {
    let primes = modular::random_primes(opts.seed, 2);
    let mut ranks = Vec::new();
    for &p in &primes {
        let r = modular::rank_mod(reduce(p), ncols, p, opts.dense_cap)
            .map_err(|size| LinalgError::CapExceeded { size, cap: opts.dense_cap })?;
        ranks.push(r);
    }
    if ranks[0] == ranks[1] {
        Ok(RankReport { rank: ranks[0], primes, modular: ranks, exact_fallback: false })
    } else {
        Ok(RankReport { rank: exact(), primes, modular: ranks, exact_fallback: true })
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn exact_rank(m: &SparseIntMatrix) -> usize {
    let (pivots, rest) = match m.small_rows() {
        Some(rows) => integer_reduce(m.cols(), rows),
        None => big_reduce(m.cols(), m.big_rows()),
    };
    pivots + bareiss_rank(densify(&rest, usize::MAX).unwrap())
}

pub fn exact_rank_of_rows(
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    opts: &LinalgOptions,
) -> Result<usize, LinalgError> {
    let (pivots, rest) = integer_reduce(ncols, rows);
    Ok(pivots + bareiss_rank(densify(&rest, opts.dense_cap)?))
}

/// Fraction-free Gaussian elimination.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (rank..m).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m {
            for j in c + 1..n {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Whether every row of `a` lies in the rational row span of `b`.
pub fn row_space_contains(b: &SparseIntMatrix, a: &SparseIntMatrix) -> Result<bool, LinalgError> {
    let opts = LinalgOptions::default();
    let rb = rational_rank_report(b, &opts)?.rank;
    let rab = rational_rank_report(&b.stacked(a)?, &opts)?.rank;
    Ok(rab == rb)
}
