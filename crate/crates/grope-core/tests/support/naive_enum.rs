//! Naive diagram generation: every multigraph with the right vertex
//! degrees, realized as a half-edge graph, plus brute-force isomorphism.

use std::collections::BTreeSet;

use grope_core::canon::Canonical;
use grope_core::{CanonicalKey, ClosedDiagram, UniTrivalentGraph, Vertex};

/// Symmetric multigraph adjacency; `m[i][i]` counts self-loops.
pub type Adjacency = Vec<Vec<usize>>;

/// All adjacency matrices on `u` legs (vertices `0..u`) and `t` trivalent
/// vertices with the right degrees.
pub fn multigraphs(u: usize, t: usize) -> Vec<Adjacency> {
    let n = u + t;
    let deg: Vec<usize> = (0..n).map(|i| if i < u { 1 } else { 3 }).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut m = vec![vec![0; n]; n];
    let mut left = deg.clone();
    fn rec(
        idx: usize,
        pairs: &[(usize, usize)],
        m: &mut Adjacency,
        left: &mut Vec<usize>,
        u: usize,
        out: &mut Vec<Adjacency>,
    ) {
        if idx == pairs.len() {
            if left.iter().all(|&l| l == 0) {
                out.push(m.clone());
            }
            return;
        }
        let (i, j) = pairs[idx];
        // once every pair at vertex i has been decided it must be full
        let last_for_i = idx + 1 == pairs.len() || pairs[idx + 1].0 != i;
        let max = if i == j {
            if i < u {
                0
            } else {
                left[i] / 2
            }
        } else {
            left[i].min(left[j])
        };
        for c in 0..=max {
            let used_i = if i == j { 2 * c } else { c };
            if last_for_i && left[i] != used_i {
                continue;
            }
            left[i] -= used_i;
            if i != j {
                left[j] -= c;
            }
            m[i][j] = c;
            m[j][i] = c;
            rec(idx + 1, pairs, m, left, u, out);
            m[i][j] = 0;
            m[j][i] = 0;
            left[i] += used_i;
            if i != j {
                left[j] += c;
            }
        }
    }
    rec(0, &pairs, &mut m, &mut left, u, &mut out);
    out
}

/// A half-edge graph realizing the adjacency, with arbitrary rotations.
/// Vertex `i` of the adjacency becomes vertex `i` of the graph.
pub fn realize(m: &Adjacency, u: usize) -> UniTrivalentGraph {
    let n = m.len();
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    let mut next = 0;
    for i in 0..n {
        for j in i..n {
            for _ in 0..m[i][j] {
                let (a, b) = (next, next + 1);
                next += 2;
                ends[i].push(a);
                ends[j].push(b);
                edges.push((a, b));
            }
        }
    }
    let vertices = (0..n)
        .map(|i| if i < u { Vertex::Leg(ends[i][0]) } else { Vertex::Trivalent([ends[i][0], ends[i][1], ends[i][2]]) })
        .collect();
    UniTrivalentGraph::new(vertices, &edges).unwrap()
}

pub fn connected(m: &Adjacency) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if m[i][j] > 0 && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn naive_open(v: usize, t: usize) -> BTreeSet<CanonicalKey> {
    let u = 2 * v - t;
    let mut keys = BTreeSet::new();
    if u == 0 {
        return keys;
    }
    for m in multigraphs(u, t) {
        if connected(&m) {
            keys.insert(realize(&m, u).canonical().key);
        }
    }
    keys
}

pub fn naive_closed(v: usize, t: usize, want_connected: bool) -> BTreeSet<CanonicalKey> {
    let u = 2 * v - t;
    let mut keys = BTreeSet::new();
    if u == 0 {
        return keys;
    }
    for m in multigraphs(u, t) {
        if want_connected && !connected(&m) {
            continue;
        }
        let g = realize(&m, u);
        // legs sit on the circle in vertex order
        if let Ok(d) = ClosedDiagram::new(g, (0..u).collect()) {
            keys.insert(d.canonical().key);
        }
    }
    keys
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism classes of adjacency matrices by trying every permutation
/// of the trivalent vertices together with every allowed permutation of
/// the legs.
pub fn brute_force_classes(ms: &[Adjacency], u: usize, leg_perms: &[Vec<usize>]) -> usize {
    let Some(n) = ms.first().map(|m| m.len()) else {
        return 0;
    };
    let t = n - u;
    let tri_perms = permutations(t);
    let mut classes: BTreeSet<Adjacency> = BTreeSet::new();
    for m in ms {
        let mut best: Option<Adjacency> = None;
        for lp in leg_perms {
            for tp in &tri_perms {
                let perm: Vec<usize> = (0..n).map(|i| if i < u { lp[i] } else { u + tp[i - u] }).collect();
                let mut pm = vec![vec![0; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        pm[perm[i]][perm[j]] = m[i][j];
                    }
                }
                if best.as_ref().is_none_or(|b| pm < *b) {
                    best = Some(pm);
                }
            }
        }
        classes.insert(best.unwrap());
    }
    classes.len()
}
