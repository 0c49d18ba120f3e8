//! Signed Gauss codes and the invariants `c2`, `v3` and Arf.
//!
//! `c2` and `v3` are Gauss diagram formulas: sums, over subsets of
//! crossings whose over/under passages occur in a prescribed order from
//! the base point, of the product of the crossing signs. `conway_c2_oracle`
//! computes `c2` independently from the Alexander matrix.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Passage {
    Over,
    Under,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub label: u32,
    pub passage: Passage,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.passage == Passage::Over { 'O' } else { 'U' };
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{p}{}{s}", self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GaussError {
    #[error("malformed token {token:?} at position {position}")]
    Malformed { position: usize, token: String },
    #[error("crossing {label} occurs {count} times")]
    Multiplicity { label: u32, count: usize },
    #[error("crossing {label} is not passed once over and once under")]
    Passage { label: u32 },
    #[error("crossing {label} carries two different signs")]
    Sign { label: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the code has no planar realization")]
    NotRealizable,
    #[error("the Alexander polynomial is not symmetric with value 1 at t = 1")]
    Degenerate,
}

/// A validated signed Gauss code. The base point is before the first token.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussCode {
    tokens: Vec<Token>,
}

pub fn parse_gauss(text: &str) -> Result<GaussCode, GaussError> {
    let mut tokens = Vec::new();
    for (position, t) in text.split_whitespace().enumerate() {
        tokens.push(parse_token(t).ok_or_else(|| GaussError::Malformed { position, token: t.into() })?);
    }
    GaussCode::new(tokens)
}

fn parse_token(t: &str) -> Option<Token> {
    let b = t.as_bytes();
    if b.len() < 3 {
        return None;
    }
    let passage = match b[0] {
        b'O' => Passage::Over,
        b'U' => Passage::Under,
        _ => return None,
    };
    let sign = match b[b.len() - 1] {
        b'+' => 1,
        b'-' => -1,
        _ => return None,
    };
    let digits = &t[1..t.len() - 1];
    if !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some(Token { label: digits.parse().ok()?, passage, sign })
}

impl GaussCode {
    pub fn new(tokens: Vec<Token>) -> Result<GaussCode, GaussError> {
        let mut seen: alloc::collections::BTreeMap<u32, Vec<Token>> = alloc::collections::BTreeMap::new();
        for t in &tokens {
            seen.entry(t.label).or_default().push(*t);
        }
        for (&label, ts) in &seen {
            if ts.len() != 2 {
                return Err(GaussError::Multiplicity { label, count: ts.len() });
            }
            if ts[0].passage == ts[1].passage {
                return Err(GaussError::Passage { label });
            }
            if ts[0].sign != ts[1].sign {
                return Err(GaussError::Sign { label });
            }
        }
        Ok(GaussCode { tokens })
    }

    pub fn unknot() -> GaussCode {
        GaussCode::default()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn crossing_count(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The same knot with the base point moved forward by `r` tokens.
    pub fn rotated(&self, r: usize) -> GaussCode {
        let mut tokens = self.tokens.clone();
        if !tokens.is_empty() {
            let n = tokens.len();
            tokens.rotate_left(r % n);
        }
        GaussCode { tokens }
    }

    /// Mirror image: every crossing changes both passage and sign.
    pub fn mirror(&self) -> GaussCode {
        let tokens = self
            .tokens
            .iter()
            .map(|t| Token {
                label: t.label,
                passage: if t.passage == Passage::Over { Passage::Under } else { Passage::Over },
                sign: -t.sign,
            })
            .collect();
        GaussCode { tokens }
    }

    /// Reversed orientation. Reversing both strands keeps every sign.
    pub fn reversed(&self) -> GaussCode {
        let mut tokens = self.tokens.clone();
        tokens.reverse();
        GaussCode { tokens }
    }

    /// Labels renumbered `1, 2, ...` in order of first occurrence.
    pub fn relabeled(&self, first: u32) -> GaussCode {
        let mut map = alloc::collections::BTreeMap::new();
        let tokens = self
            .tokens
            .iter()
            .map(|t| {
                let n = map.len() as u32;
                let l = *map.entry(t.label).or_insert(first + n);
                Token { label: l, ..*t }
            })
            .collect();
        GaussCode { tokens }
    }

    /// Crossings as `(over position, under position, sign)`, by label.
    fn crossings(&self) -> Vec<(usize, usize, i8)> {
        let mut by_label: alloc::collections::BTreeMap<u32, (usize, usize, i8)> = alloc::collections::BTreeMap::new();
        for (p, t) in self.tokens.iter().enumerate() {
            let e = by_label.entry(t.label).or_insert((0, 0, t.sign));
            match t.passage {
                Passage::Over => e.0 = p,
                Passage::Under => e.1 = p,
            }
        }
        by_label.into_values().collect()
    }

    /// Whether the code is realized by a planar diagram: the ribbon graph
    /// with vertex rotations given by the crossing signs has genus zero.
    pub fn is_classical(&self) -> bool {
        let n = self.crossing_count();
        n == 0 || self.face_count() == n + 2
    }

    fn face_count(&self) -> usize {
        let m = self.tokens.len();
        let crossings = self.crossings();
        // dart 2p is the arrival at passage p, 2p + 1 the departure
        let mut slot = vec![(0usize, 0usize); 2 * m];
        let mut rotation = Vec::with_capacity(crossings.len());
        for (c, &(o, u, s)) in crossings.iter().enumerate() {
            let (oi, oo, ui, uo) = (2 * o, 2 * o + 1, 2 * u, 2 * u + 1);
            // counterclockwise around the crossing
            let r = if s > 0 { [oo, uo, oi, ui] } else { [oo, ui, oi, uo] };
            for (i, &d) in r.iter().enumerate() {
                slot[d] = (c, i);
            }
            rotation.push(r);
        }
        let along = |d: usize| if d % 2 == 1 { 2 * ((d / 2 + 1) % m) } else { 2 * ((d / 2 + m - 1) % m) + 1 };
        let mut seen = vec![false; 2 * m];
        let mut faces = 0;
        for start in 0..2 * m {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                let e = along(d);
                let (c, i) = slot[e];
                d = rotation[c][(i + 1) % 4];
            }
        }
        faces
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A based arrow pattern: for each passage in order, the index of its
/// crossing (numbered by first passage) and whether it is the over passage.
type Pattern = &'static [(u8, bool)];

const O: bool = true;
const U: bool = false;

const C2_PATTERNS: [Pattern; 1] = [&[(0, O), (1, U), (0, U), (1, O)]];

const V3_PATTERNS: [Pattern; 5] = [
    &[(0, O), (1, U), (2, O), (0, U), (1, O), (2, U)],
    &[(0, O), (1, U), (2, O), (1, O), (0, U), (2, U)],
    &[(0, U), (1, O), (0, O), (2, U), (1, U), (2, O)],
    &[(0, U), (1, O), (2, U), (0, O), (1, U), (2, O)],
    &[(0, U), (1, O), (2, U), (0, O), (2, O), (1, U)],
];

/// Signed count of subsets of `m` crossings matching one of `patterns`.
fn pairing(k: &GaussCode, m: usize, patterns: &[Pattern]) -> i64 {
    let cs = k.crossings();
    let n = cs.len();
    if n < m {
        return 0;
    }
    let mut total = 0i64;
    let mut idx: Vec<usize> = (0..m).collect();
    let mut word: Vec<(usize, usize, bool)> = Vec::with_capacity(2 * m);
    let mut pat: Vec<(u8, bool)> = Vec::with_capacity(2 * m);
    loop {
        word.clear();
        for (j, &c) in idx.iter().enumerate() {
            word.push((cs[c].0, j, O));
            word.push((cs[c].1, j, U));
        }
        word.sort_unstable();
        let mut rename = [u8::MAX; 8];
        let mut next = 0u8;
        pat.clear();
        for &(_, j, p) in &word {
            if rename[j] == u8::MAX {
                rename[j] = next;
                next += 1;
            }
            pat.push((rename[j], p));
        }
        if patterns.contains(&pat.as_slice()) {
            total += idx.iter().map(|&c| cs[c].2 as i64).product::<i64>();
        }
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if idx[i] < n - m + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The `z^2` coefficient of the Conway polynomial.
pub fn c2(k: &GaussCode) -> i64 {
    pairing(k, 2, &C2_PATTERNS)
}

/// The primitive degree 3 invariant with value 1 on the right trefoil.
pub fn v3(k: &GaussCode) -> i64 {
    pairing(k, 3, &V3_PATTERNS)
}

/// The Arf invariant, `c2 mod 2`.
pub fn arf(k: &GaussCode) -> u8 {
    c2(k).rem_euclid(2) as u8
}

/// `a` followed by `b`, with the labels of `b` shifted past those of `a`.
pub fn connected_sum(a: &GaussCode, b: &GaussCode) -> GaussCode {
    let a = a.relabeled(1);
    let b = b.relabeled(a.crossing_count() as u32 + 1);
    let mut tokens = a.tokens;
    tokens.extend(b.tokens);
    GaussCode { tokens }
}

/// Polynomials in `t` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn zero() -> Poly {
        Poly(Vec::new())
    }

    fn from_coeffs(c: &[i64]) -> Poly {
        Poly(c.iter().map(|&x| BigInt::from(x)).collect()).trim()
    }

    fn trim(mut self) -> Poly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect()).trim()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly(r).trim()
    }

    /// Exact quotient; the division must leave no remainder.
    fn div_exact(&self, d: &Poly) -> Poly {
        let mut rem = self.0.clone();
        let dl = d.0.len();
        if rem.len() < dl {
            return Poly::zero();
        }
        let lead = d.0.last().unwrap();
        let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dl - 1];
            if c.is_zero() {
                continue;
            }
            let (qi, r) = c.div_rem(lead);
            debug_assert!(r.is_zero());
            for (j, dj) in d.0.iter().enumerate() {
                rem[i + j] -= &qi * dj;
            }
            q[i] = qi;
        }
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        Poly(q).trim()
    }
}

fn poly_det(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::from_coeffs(&[1]);
    }
    let mut sign = false;
    let mut prev = Poly::from_coeffs(&[1]);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].mul(&a[i][j]).add(&a[i][k].mul(&a[k][j]).neg());
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// The Alexander polynomial as `(exponent, coefficient)` pairs, made
/// symmetric under `t -> 1/t` and normalized by `Δ(1) = 1`.
pub fn alexander_polynomial(k: &GaussCode) -> Result<Vec<(i64, BigInt)>, OracleError> {
    if !k.is_classical() {
        return Err(OracleError::NotRealizable);
    }
    let n = k.crossing_count();
    if n == 0 {
        return Ok(vec![(0, BigInt::one())]);
    }
    let m = k.tokens.len();
    // arcs run from one under passage to the next
    let mut arc = vec![0usize; m];
    let mut cur = 0;
    #[allow(clippy::needless_range_loop)]
    for p in 0..m {
        arc[p] = cur;
        if k.tokens[p].passage == Passage::Under {
            cur += 1;
        }
    }
    let last_under = (0..m).rev().find(|&p| k.tokens[p].passage == Passage::Under).unwrap();
    for a in arc.iter_mut().skip(last_under + 1) {
        *a = 0;
    }
    let mut mat = vec![vec![Poly::zero(); n]; n];
    for (r, &(o, u, s)) in k.crossings().iter().enumerate() {
        let over = arc[o];
        let inc = arc[u];
        let out = if u == last_under { 0 } else { arc[u + 1] };
        // Fox derivatives of the Wirtinger relation, abelianized
        let (co, ci, cj) = if s > 0 { ([1, -1], [0, 1], [-1, 0]) } else { ([-1, 1], [1, 0], [0, -1]) };
        mat[r][over] = mat[r][over].add(&Poly::from_coeffs(&co));
        mat[r][inc] = mat[r][inc].add(&Poly::from_coeffs(&ci));
        mat[r][out] = mat[r][out].add(&Poly::from_coeffs(&cj));
    }
    let minor: Vec<Vec<Poly>> = mat[1..].iter().map(|row| row[1..].to_vec()).collect();
    let d = poly_det(minor);
    let terms: Vec<(i64, BigInt)> =
        d.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e as i64, c.clone())).collect();
    let (Some(lo), Some(hi)) = (terms.first().map(|t| t.0), terms.last().map(|t| t.0)) else {
        return Err(OracleError::Degenerate);
    };
    if (lo + hi) % 2 != 0 {
        return Err(OracleError::Degenerate);
    }
    let shift = (lo + hi) / 2;
    let mut sym: Vec<(i64, BigInt)> = terms.into_iter().map(|(e, c)| (e - shift, c)).collect();
    let total: BigInt = sym.iter().map(|t| &t.1).sum();
    if !total.abs().is_one() {
        return Err(OracleError::Degenerate);
    }
    if total.is_negative() {
        for t in sym.iter_mut() {
            t.1 = -t.1.clone();
        }
    }
    let get = |e: i64| sym.iter().find(|t| t.0 == e).map(|t| t.1.clone()).unwrap_or_default();
    if sym.iter().any(|t| get(-t.0) != t.1) {
        return Err(OracleError::Degenerate);
    }
    Ok(sym)
}

/// `c2` from the Alexander polynomial: with `z^2 = t - 2 + 1/t`, the
/// `z^2` coefficient of the Conway polynomial is `Δ''(1) / 2`, i.e. the
/// sum of `e^2 a_e / 2`.
pub fn conway_c2_oracle(k: &GaussCode) -> Result<i64, OracleError> {
    let delta = alexander_polynomial(k)?;
    let s: BigInt = delta.iter().map(|(e, c)| c * BigInt::from(e * e)).sum();
    (s / BigInt::from(2)).to_i64().ok_or(OracleError::Degenerate)
}

/// Codes for a few small knots.
pub mod examples {
    use super::{parse_gauss, GaussCode};

    pub fn right_trefoil() -> GaussCode {
        parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap()
    }

    pub fn left_trefoil() -> GaussCode {
        right_trefoil().mirror()
    }

    pub fn figure_eight() -> GaussCode {
        parse_gauss("O1- U2+ O3+ U1- O4- U3+ O2+ U4-").unwrap()
    }

    pub fn granny() -> GaussCode {
        super::connected_sum(&right_trefoil(), &right_trefoil())
    }

    pub fn square() -> GaussCode {
        super::connected_sum(&right_trefoil(), &left_trefoil())
    }
}
