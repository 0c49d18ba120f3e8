//! Sparse elimination on pivots that keep the lattice intact: entries
//! `±1` over the integers, any nonzero entry modulo a prime.
//!
//! Eliminating such a pivot splits off an invariant factor 1 (or one unit
//! of rank), so the remaining rows carry the rest of the Smith form.
//! Columns are visited in order of increasing population and the shortest
//! eligible pivot row is chosen, which keeps fill-in low.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub(crate) trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_pivot(&self, a: &Self::E) -> bool;
    /// `a / pivot`, exact for eligible pivots.
    fn factor(&self, a: &Self::E, pivot: &Self::E) -> Self::E;
    /// `a - f * b`, or `None` on overflow.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Option<Self::E>;
    /// `-f * b`, or `None` on overflow.
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Option<Self::E>;
}

pub(crate) struct I64;

impl Arith for I64 {
    type E = i64;
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn is_pivot(&self, a: &i64) -> bool {
        *a == 1 || *a == -1
    }
    fn factor(&self, a: &i64, pivot: &i64) -> i64 {
        a * pivot
    }
    fn sub_mul(&self, a: &i64, f: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn neg_mul(&self, f: &i64, b: &i64) -> Option<i64> {
        f.checked_mul(*b)?.checked_neg()
    }
}

pub(crate) struct Big;

impl Arith for Big {
    type E = BigInt;
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_pivot(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn factor(&self, a: &BigInt, pivot: &BigInt) -> BigInt {
        a * pivot
    }
    fn sub_mul(&self, a: &BigInt, f: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - f * b)
    }
    fn neg_mul(&self, f: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(-(f * b))
    }
}

/// Arithmetic modulo a prime below `2^63`.
pub(crate) struct Mod(pub u64);

impl Mod {
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub(crate) fn inv(&self, a: u64) -> u64 {
        super::modular::pow_mod(a, self.0 - 2, self.0)
    }
}

impl Arith for Mod {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_pivot(&self, a: &u64) -> bool {
        *a != 0
    }
    fn factor(&self, a: &u64, pivot: &u64) -> u64 {
        self.mul(*a, self.inv(*pivot))
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> Option<u64> {
        let fb = self.mul(*f, *b);
        Some(if *a >= fb { a - fb } else { a + (self.0 - fb) })
    }
    fn neg_mul(&self, f: &u64, b: &u64) -> Option<u64> {
        let fb = self.mul(*f, *b);
        Some(if fb == 0 { 0 } else { self.0 - fb })
    }
}

pub(crate) type Row<E> = Vec<(usize, E)>;

pub(crate) struct Eliminated<E> {
    pub pivots: usize,
    /// Rows still to be reduced, restricted to unpivoted columns.
    pub rest: Vec<Row<E>>,
}

/// `target - f * pivot_row`, merged by column. New columns are reported
/// through `fresh`.
fn combine<A: Arith>(
    ar: &A,
    target: &Row<A::E>,
    f: &A::E,
    pivot_row: &Row<A::E>,
    fresh: &mut Vec<usize>,
) -> Option<Row<A::E>> {
    let mut out = Vec::with_capacity(target.len() + pivot_row.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot_row.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot_row.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            let v = ar.neg_mul(f, &pivot_row[j].1)?;
            if !ar.is_zero(&v) {
                fresh.push(cj);
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = ar.sub_mul(&target[i].1, f, &pivot_row[j].1)?;
            if !ar.is_zero(&v) {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn entry<E>(row: &Row<E>, c: usize) -> Option<&E> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
}

/// Eliminates eligible pivots until none is left. Returns `None` if the
/// arithmetic overflows.
pub(crate) fn eliminate<A: Arith>(ar: &A, rows: Vec<Row<A::E>>, ncols: usize) -> Option<Eliminated<A::E>> {
    let mut rows: Vec<Option<Row<A::E>>> =
        rows.into_iter().map(|r| if r.is_empty() { None } else { Some(r) }).collect();
    let mut col_rows: Vec<Vec<usize>> = alloc::vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        if let Some(row) = row {
            for &(c, _) in row {
                col_rows[c].push(r);
            }
        }
    }
    let mut done = alloc::vec![false; ncols];
    let mut pivots = 0;
    let mut queued: Vec<usize> = (0..ncols).filter(|&c| !col_rows[c].is_empty()).collect();
    loop {
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            queued.drain(..).filter(|&c| !done[c]).map(|c| Reverse((col_rows[c].len(), c))).collect();
        let mut deferred = Vec::new();
        let mut progress = false;
        while let Some(Reverse((cnt, c))) = heap.pop() {
            if done[c] {
                continue;
            }
            // drop stale references
            let mut live: Vec<usize> = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| rows[r].as_ref().is_some_and(|row| entry(row, c).is_some()))
                .collect();
            live.sort_unstable();
            live.dedup();
            col_rows[c] = live;
            if col_rows[c].is_empty() {
                continue;
            }
            if cnt != col_rows[c].len() {
                heap.push(Reverse((col_rows[c].len(), c)));
                continue;
            }
            let best = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| ar.is_pivot(entry(rows[r].as_ref().unwrap(), c).unwrap()))
                .min_by_key(|&r| (rows[r].as_ref().unwrap().len(), r));
            let Some(p) = best else {
                deferred.push(c);
                continue;
            };
            let prow = rows[p].take().unwrap();
            let pv = entry(&prow, c).unwrap().clone();
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p).collect();
            for r in others {
                let target = rows[r].take().unwrap();
                let f = ar.factor(entry(&target, c).unwrap(), &pv);
                let mut fresh = Vec::new();
                let new = combine(ar, &target, &f, &prow, &mut fresh)?;
                for col in fresh {
                    col_rows[col].push(r);
                    if !done[col] {
                        heap.push(Reverse((col_rows[col].len(), col)));
                    }
                }
                rows[r] = if new.is_empty() { None } else { Some(new) };
            }
            done[c] = true;
            col_rows[c].clear();
            pivots += 1;
            progress = true;
        }
        if !progress || deferred.is_empty() {
            break;
        }
        queued = deferred;
    }
    let rest = rows.into_iter().flatten().collect();
    Some(Eliminated { pivots, rest })
}
