//! Smith invariants against a textbook dense reduction and against
//! determinantal divisors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grope_core::linalg::{exact_rank, rational_rank};
use grope_core::{cokernel, smith_invariants, SparseIntMatrix};

#[path = "support/naive_snf.rs"]
mod naive_snf;
use naive_snf::naive_snf;

fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    // Bareiss
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of minors: `d_k = D_k / D_{k-1}`.
fn determinantal(a: &[Vec<i64>]) -> Vec<BigInt> {
    let m = a.len();
    let n = a[0].len();
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(a[r][c])).collect()).collect();
                g = g.gcd(&det(minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let m = rng.gen_range(1..=max_dim);
    let n = rng.gen_range(1..=max_dim);
    let density: f64 = rng.gen_range(0.2..1.0);
    (0..m)
        .map(|_| (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 }).collect())
        .collect()
}

fn ours(a: &[Vec<i64>]) -> Vec<i128> {
    smith_invariants(&SparseIntMatrix::from_dense(a)).unwrap().iter().map(|d| d.to_i128().unwrap()).collect()
}

#[test]
fn thousand_random_matrices_match_the_textbook_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000 {
        let a = random_matrix(&mut rng, 8, 3);
        let naive = naive_snf(a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect());
        assert_eq!(ours(&a), naive, "case {case}: {a:?}");
    }
}

#[test]
fn matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..60 {
        let a = random_matrix(&mut rng, 5, 6);
        let ours: Vec<BigInt> = smith_invariants(&SparseIntMatrix::from_dense(&a)).unwrap();
        assert_eq!(ours, determinantal(&a), "case {case}: {a:?}");
    }
}

#[test]
fn invariants_divide_each_other() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let a = random_matrix(&mut rng, 7, 9);
        let inv = smith_invariants(&SparseIntMatrix::from_dense(&a)).unwrap();
        assert!(inv.iter().all(|d| d.is_positive()));
        assert!(inv.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=7, 1usize..=7).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-4i64..=4, n), m))
}

proptest! {
    #[test]
    fn invariants_ignore_row_and_column_order(a in matrix_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = SparseIntMatrix::from_dense(&a);
        let mut rp: Vec<usize> = (0..m.rows()).collect();
        let mut cp: Vec<usize> = (0..m.cols()).collect();
        for i in (1..rp.len()).rev() { rp.swap(i, rng.gen_range(0..=i)); }
        for i in (1..cp.len()).rev() { cp.swap(i, rng.gen_range(0..=i)); }
        prop_assert_eq!(smith_invariants(&m).unwrap(), smith_invariants(&m.permuted(&rp, &cp)).unwrap());
    }

    #[test]
    fn cokernel_rank_is_corank(a in matrix_strategy()) {
        let m = SparseIntMatrix::from_dense(&a);
        let g = cokernel(m.cols(), &m).unwrap();
        prop_assert_eq!(g.free_rank, m.cols() - rational_rank(&m));
        prop_assert_eq!(rational_rank(&m), exact_rank(&m));
        prop_assert_eq!(rational_rank(&m), rational_rank(&m.transpose()));
    }
}
