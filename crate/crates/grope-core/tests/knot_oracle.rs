//! Knot invariants against independent computations on closed braids.
//!
//! `c2` is compared with the Alexander matrix route and `v3` with the
//! third derivative of the Jones polynomial at `t = 1` (from the Kauffman
//! bracket), which is additive, odd under mirror image and of degree 3.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grope_core::knot::examples::*;
use grope_core::knot::{arf, c2, connected_sum, conway_c2_oracle, v3, GaussCode, Passage, Token};

/// Closure of a braid on `n` strands, or `None` unless it is a knot.
/// Strands run downwards; `σ_i` puts the left strand over the right one.
fn braid_closure(n: usize, word: &[i32]) -> Option<GaussCode> {
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    for _ in 0..n {
        for (k, &g) in word.iter().enumerate() {
            let i = g.unsigned_abs() as usize - 1;
            if pos == i || pos == i + 1 {
                let left = pos == i;
                let over = if g > 0 { left } else { !left };
                // the left-over crossing of downward strands is negative
                let sign = if g > 0 { -1 } else { 1 };
                tokens.push(Token {
                    label: k as u32 + 1,
                    passage: if over { Passage::Over } else { Passage::Under },
                    sign,
                });
                pos = if left { i + 1 } else { i };
            }
        }
        if pos == 0 {
            break;
        }
    }
    if tokens.len() != 2 * word.len() {
        return None;
    }
    Some(GaussCode::new(tokens).unwrap().relabeled(1))
}

fn random_knot(rng: &mut ChaCha8Rng, max_len: usize) -> GaussCode {
    loop {
        let n = rng.gen_range(2..=4);
        let len = rng.gen_range(2..=max_len);
        let word: Vec<i32> =
            (0..len).map(|_| rng.gen_range(1..n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        if let Some(k) = braid_closure(n, &word) {
            let r = rng.gen_range(0..k.tokens().len().max(1));
            return k.rotated(r);
        }
    }
}

type Laurent = BTreeMap<i64, i64>;

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut r = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *r.entry(i + j).or_insert(0) += x * y;
        }
    }
    r.retain(|_, c| *c != 0);
    r
}

/// Kauffman bracket in the variable `A`, using the rotation of each
/// crossing in the plane.
fn bracket(k: &GaussCode) -> Laurent {
    let toks = k.tokens();
    let m = toks.len();
    let mut cross: BTreeMap<u32, (usize, usize, i8)> = BTreeMap::new();
    for (p, t) in toks.iter().enumerate() {
        let e = cross.entry(t.label).or_insert((0, 0, t.sign));
        if t.passage == Passage::Over {
            e.0 = p;
        } else {
            e.1 = p;
        }
    }
    let rot: Vec<[usize; 4]> = cross
        .values()
        .map(|&(o, u, s)| {
            let (oi, oo, ui, uo) = (2 * o, 2 * o + 1, 2 * u, 2 * u + 1);
            if s > 0 {
                [oo, uo, oi, ui]
            } else {
                [oo, ui, oi, uo]
            }
        })
        .collect();
    let loop_value: Laurent = [(2, -1), (-2, -1)].into_iter().collect();
    let mut total = Laurent::new();
    for state in 0u32..(1 << rot.len()) {
        let mut parent: Vec<usize> = (0..2 * m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for p in 0..m {
            union(&mut parent, 2 * p + 1, 2 * ((p + 1) % m));
        }
        let mut a_exp = 0i64;
        for (c, r) in rot.iter().enumerate() {
            if state >> c & 1 == 0 {
                union(&mut parent, r[1], r[2]);
                union(&mut parent, r[3], r[0]);
                a_exp += 1;
            } else {
                union(&mut parent, r[0], r[1]);
                union(&mut parent, r[2], r[3]);
                a_exp -= 1;
            }
        }
        let loops = (0..2 * m).filter(|&x| find(&mut parent, x) == x).count();
        let mut term: Laurent = [(a_exp, 1)].into_iter().collect();
        for _ in 1..loops {
            term = mul(&term, &loop_value);
        }
        for (e, c) in term {
            *total.entry(e).or_insert(0) += c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

/// Jones polynomial as powers of `t = A^-4`.
fn jones(k: &GaussCode) -> Laurent {
    let writhe: i64 = k.tokens().iter().filter(|t| t.passage == Passage::Over).map(|t| t.sign as i64).sum();
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let mut out = Laurent::new();
    if k.is_empty() {
        out.insert(0, 1);
        return out;
    }
    for (e, c) in bracket(k) {
        let a = e - 3 * writhe;
        assert_eq!(a % 4, 0);
        *out.entry(-a / 4).or_insert(0) += sign * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `V(e^h) = 1 - 3 c2 h^2 + j3 h^3 + ...`; returns `(c2, -j3 / 6)`.
fn jones_invariants(k: &GaussCode) -> (i64, i64) {
    let v = jones(k);
    let h2: i64 = v.iter().map(|(e, c)| c * e * e).sum();
    let h3: i64 = v.iter().map(|(e, c)| c * e * e * e).sum();
    assert_eq!(h2 % 6, 0);
    assert_eq!(h3 % 36, 0);
    (-h2 / 6, -h3 / 36)
}

#[test]
fn braid_closure_of_the_positive_trefoil() {
    let k = braid_closure(2, &[-1, -1, -1]).unwrap();
    assert!(k.is_classical());
    assert_eq!(jones(&k), [(1, 1), (3, 1), (4, -1)].into_iter().collect());
    assert_eq!((c2(&k), v3(&k)), (1, 1));
    assert_eq!(jones(&right_trefoil()), jones(&k));
}

#[test]
fn named_knots() {
    let cases: [(&str, GaussCode, (i64, i64, u8)); 6] = [
        ("unknot", GaussCode::unknot(), (0, 0, 0)),
        ("right trefoil", right_trefoil(), (1, 1, 1)),
        ("left trefoil", left_trefoil(), (1, -1, 1)),
        ("figure eight", figure_eight(), (-1, 0, 1)),
        ("granny", granny(), (2, 2, 0)),
        ("square", square(), (2, 0, 0)),
    ];
    for (name, k, want) in cases {
        assert_eq!((c2(&k), v3(&k), arf(&k)), want, "{name}");
        assert_eq!(conway_c2_oracle(&k), Ok(want.0), "{name}");
        assert_eq!(jones_invariants(&k), (want.0, want.1), "{name}");
    }
}

#[test]
fn random_closed_braids_match_both_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let k = random_knot(&mut rng, 10);
        assert!(k.is_classical(), "{k}");
        let (jc2, jv3) = jones_invariants(&k);
        assert_eq!(conway_c2_oracle(&k), Ok(c2(&k)), "{k}");
        assert_eq!((jc2, jv3), (c2(&k), v3(&k)), "{k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn base_point_mirror_and_reversal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_knot(&mut rng, 12);
        let (a, b) = (c2(&k), v3(&k));
        for r in 0..k.tokens().len() {
            let kr = k.rotated(r);
            prop_assert_eq!((c2(&kr), v3(&kr)), (a, b));
        }
        prop_assert_eq!((c2(&k.mirror()), v3(&k.mirror())), (a, -b));
        prop_assert_eq!((c2(&k.reversed()), v3(&k.reversed())), (a, b));
        prop_assert_eq!(arf(&k), a.rem_euclid(2) as u8);
    }

    #[test]
    fn additive_under_connected_sum(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_knot(&mut ChaCha8Rng::seed_from_u64(s1), 9);
        let b = random_knot(&mut ChaCha8Rng::seed_from_u64(s2), 9);
        let s = connected_sum(&a, &b);
        prop_assert!(s.is_classical());
        prop_assert_eq!(c2(&s), c2(&a) + c2(&b));
        prop_assert_eq!(v3(&s), v3(&a) + v3(&b));
        prop_assert_eq!(conway_c2_oracle(&s), Ok(c2(&s)));
    }
}
