//! Dense Smith normal form by the textbook algorithm.
#![allow(clippy::needless_range_loop)]

use num_integer::Integer;

/// Textbook reduction: bring the gcd of the current submatrix into the
/// corner with extended-gcd row and column operations.
pub fn naive_snf(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let nz = (t..m).flat_map(|i| (t..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] != 0);
        let Some((i0, j0)) = nz else { break };
        a.swap(t, i0);
        for r in a.iter_mut() {
            r.swap(t, j0);
        }
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if a[i][t] != 0 && a[i][t] % a[t][t] == 0 {
                    let q = a[i][t] / a[t][t];
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                    }
                } else if a[i][t] != 0 {
                    // rows t, i replaced by Bezout combinations
                    let (x, y) = (a[t][t], a[i][t]);
                    let e = x.extended_gcd(&y);
                    let (g, s, u) = (e.gcd, e.x, e.y);
                    let (p, q) = (x / g, y / g);
                    for j in 0..n {
                        let (rt, ri) = (a[t][j], a[i][j]);
                        a[t][j] = s * rt + u * ri;
                        a[i][j] = -q * rt + p * ri;
                    }
                    changed = true;
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 && a[t][j] % a[t][t] == 0 {
                    let q = a[t][j] / a[t][t];
                    for r in a.iter_mut() {
                        r[j] -= q * r[t];
                    }
                } else if a[t][j] != 0 {
                    let (x, y) = (a[t][t], a[t][j]);
                    let e = x.extended_gcd(&y);
                    let (g, s, u) = (e.gcd, e.x, e.y);
                    let (p, q) = (x / g, y / g);
                    for r in a.iter_mut() {
                        let (ct, cj) = (r[t], r[j]);
                        r[t] = s * ct + u * cj;
                        r[j] = -q * ct + p * cj;
                    }
                    changed = true;
                }
            }
            if !changed {
                let d = a[t][t];
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % d != 0));
                match bad {
                    Some(i) => {
                        for j in 0..n {
                            a[t][j] += a[i][j];
                        }
                    }
                    None => break,
                }
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}
