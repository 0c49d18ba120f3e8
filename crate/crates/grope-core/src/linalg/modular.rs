use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::elim::{eliminate, Mod, Row};

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `count` distinct random primes in `[2^61, 2^62)`.
pub fn random_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let c = (rng.next_u64() >> 3) | (1 << 61) | 1;
        if is_prime(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().unwrap()
}

pub(crate) fn rows_mod(rows: &[Vec<(usize, BigInt)>], p: u64) -> Vec<Row<u64>> {
    rows.iter().map(|row| row.iter().map(|(c, v)| (*c, reduce(v, p))).filter(|e| e.1 != 0).collect()).collect()
}

pub(crate) fn small_rows_mod(rows: &[Vec<(usize, i64)>], p: u64) -> Vec<Row<u64>> {
    rows.iter()
        .map(|row| {
            row.iter().map(|&(c, v)| (c, (v as i128).rem_euclid(p as i128) as u64)).filter(|e| e.1 != 0).collect()
        })
        .collect()
}

/// Rank modulo `p` of sparse rows over `ncols` columns. `dense_cap`
/// bounds the size of the dense remainder.
pub(crate) fn rank_mod(rows: Vec<Row<u64>>, ncols: usize, p: u64, dense_cap: usize) -> Result<usize, usize> {
    let ar = Mod(p);
    let e = eliminate(&ar, rows, ncols).expect("modular arithmetic cannot overflow");
    let mut cols: Vec<usize> = e.rest.iter().flat_map(|r| r.iter().map(|x| x.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    let size = e.rest.len() * cols.len();
    if size > dense_cap {
        return Err(size);
    }
    let mut dense = vec![vec![0u64; cols.len()]; e.rest.len()];
    for (i, row) in e.rest.iter().enumerate() {
        for &(c, v) in row {
            dense[i][cols.binary_search(&c).unwrap()] = v;
        }
    }
    Ok(e.pivots + dense_rank_mod(&mut dense, &ar))
}

fn dense_rank_mod(a: &mut [Vec<u64>], ar: &Mod) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..n {
        let Some(pr) = (rank..m).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = ar.inv(a[rank][c]);
        for x in a[rank][c..].iter_mut() {
            *x = ar.mul(*x, inv);
        }
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..n {
                if prow[j] != 0 {
                    let fb = ar.mul(f, prow[j]);
                    row[j] = if row[j] >= fb { row[j] - fb } else { row[j] + (ar.0 - fb) };
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}
