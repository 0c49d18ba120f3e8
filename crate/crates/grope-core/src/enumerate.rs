//! Exhaustive generation of diagram bases.
//!
//! Diagrams are grown level by level, a level being the set of classes
//! with given Vassiliev degree `v` and trivalent vertex count `t`. Every
//! diagram other than a seed reduces to a smaller level by undoing one of
//! three moves:
//!
//! * `a`: put a new trivalent vertex on an edge and hang a leg from it;
//! * `a'`: put new vertices on two edges of one component and join them;
//! * `d`: replace a leg by a trivalent vertex carrying a self-loop.
//!
//! Open graphs grow from the strut, closed diagrams from chord diagrams.
//! Children are deduplicated by canonical key, so each level holds exactly
//! one oriented representative per class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::canon::{Canonical, CanonicalKey, Sign};
use crate::graph::{ClosedDiagram, Degrees, RawGraph, UniTrivalentGraph, Vertex, VertexId, MAX_HALF_EDGES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    Vassiliev,
    Grope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// Connected open graphs with at least one leg.
    B,
    /// Closed diagrams, dashed part arbitrary.
    A,
    /// Closed diagrams with connected dashed part.
    AConnected,
}

/// Inclusive bounds on the first Betti number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LoopBounds {
    pub min: Option<usize>,
    pub max: Option<usize>,
}

impl LoopBounds {
    pub fn contains(&self, b1: usize) -> bool {
        self.min.is_none_or(|m| b1 >= m) && self.max.is_none_or(|m| b1 <= m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnumSpec {
    pub space: Space,
    pub grading: Grading,
    pub degree: usize,
    pub loops: LoopBounds,
    /// Largest number of classes allowed in any single level.
    pub cap: Option<usize>,
}

impl EnumSpec {
    pub fn new(space: Space, grading: Grading, degree: usize) -> Self {
        EnumSpec { space, grading, degree, loops: LoopBounds::default(), cap: None }
    }

    pub fn with_loops(mut self, min: Option<usize>, max: Option<usize>) -> Self {
        self.loops = LoopBounds { min, max };
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn validate(&self) -> Result<(), EnumError> {
        if self.space == Space::B && self.degree < 2 {
            return Err(EnumError::DegreeTooSmall(self.degree));
        }
        if let (Some(a), Some(b)) = (self.loops.min, self.loops.max) {
            if a > b {
                return Err(EnumError::BadLoopBounds { min: a, max: b });
            }
        }
        Ok(())
    }

    /// Whether a diagram with these degrees belongs to the requested basis.
    pub fn accepts(&self, d: &Degrees) -> bool {
        let graded = match self.grading {
            Grading::Vassiliev => d.v,
            Grading::Grope => d.g,
        };
        graded == self.degree && self.loops.contains(d.b1) && (self.space != Space::B || d.v >= 2)
    }

    /// The `(v, t)` levels that can hold a diagram of the basis.
    fn target_levels(&self) -> Vec<(usize, usize)> {
        let k = self.degree;
        let mut out = Vec::new();
        match (self.space, self.grading) {
            (_, Grading::Vassiliev) => {
                for t in 0..2 * k {
                    out.push((k, t));
                }
            }
            // connected open graphs have g = t + 1
            (Space::B, Grading::Grope) => {
                if k >= 1 {
                    for v in k.div_ceil(2)..=k {
                        out.push((v, k - 1));
                    }
                }
            }
            (_, Grading::Grope) => {
                for v in 1..=k {
                    for t in 0..2 * v {
                        out.push((v, t));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error("degree {0} is below 2; the open diagram groups vanish there")]
    DegreeTooSmall(usize),
    #[error("loop bounds {min}..={max} are empty")]
    BadLoopBounds { min: usize, max: usize },
    #[error("level (v={v}, t={t}) exceeds the cap of {cap} classes")]
    CapExceeded { v: usize, t: usize, cap: usize },
    #[error("diagrams at level (v={v}, t={t}) exceed the half-edge limit")]
    TooLarge { v: usize, t: usize },
}

/// One class of a basis: an oriented representative with canonical sign
/// `+1` (unless the class is self-negative, when the sign is meaningless).
#[derive(Clone, Debug)]
pub struct Generator<D> {
    pub key: CanonicalKey,
    pub diagram: D,
    pub self_negative: bool,
    pub degrees: Degrees,
}

/// Either kind of basis.
#[derive(Clone, Debug)]
pub enum Diagrams {
    Open(Vec<Generator<UniTrivalentGraph>>),
    Closed(Vec<Generator<ClosedDiagram>>),
}

impl Diagrams {
    pub fn len(&self) -> usize {
        match self {
            Diagrams::Open(v) => v.len(),
            Diagrams::Closed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn keys(&self) -> Vec<CanonicalKey> {
        match self {
            Diagrams::Open(v) => v.iter().map(|g| g.key.clone()).collect(),
            Diagrams::Closed(v) => v.iter().map(|g| g.key.clone()).collect(),
        }
    }
}

/// Diagrams that can be grown by the three moves.
pub trait Family: Canonical + Clone {
    fn graph(&self) -> &UniTrivalentGraph;
    fn op_a(&self, out: &mut Vec<Self>);
    fn op_a2(&self, out: &mut Vec<Self>);
    fn op_d(&self, out: &mut Vec<Self>);
    fn flip_first_trivalent(&self) -> Self;
    fn degrees(&self) -> Degrees;
}

fn leg_counts_per_component(g: &UniTrivalentGraph) -> (Vec<usize>, Vec<usize>) {
    let (comp, n) = g.components();
    let mut legs = vec![0; n];
    for v in g.legs() {
        legs[comp[v]] += 1;
    }
    (comp, legs)
}

/// Subdivides the edge at `h` and hangs a new leg from the new vertex.
fn hang_leg(g: &UniTrivalentGraph, h: usize) -> (UniTrivalentGraph, Vec<Option<VertexId>>, VertexId) {
    let mut raw = RawGraph::from_graph(g);
    let (_, free) = raw.subdivide(h);
    let lh = raw.new_half_edge();
    let leg = raw.add_vertex(Vertex::Leg(lh));
    raw.pair(free, lh);
    let (out, vmap) = raw.finish();
    let leg = vmap[leg].unwrap();
    (out, vmap, leg)
}

/// All graphs obtained by joining new vertices on two edges of the same
/// component of `g`.
fn join_edges(g: &UniTrivalentGraph) -> Vec<(UniTrivalentGraph, Vec<Option<VertexId>>)> {
    let (comp, _) = g.components();
    let mut out = Vec::new();
    for (h, _) in g.edges() {
        let c = comp[g.vertex_of(h)];
        let mut raw = RawGraph::from_graph(g);
        let (_, fp) = raw.subdivide(h);
        let first_new = g.half_edge_count();
        for h2 in 0..first_new + 3 {
            if h2 == fp {
                continue;
            }
            let q = raw.partner(h2);
            if q < h2 {
                continue;
            }
            let c2 = if h2 < first_new { comp[g.vertex_of(h2)] } else { c };
            if c2 != c {
                continue;
            }
            let mut r = raw.clone();
            let (_, fq) = r.subdivide(h2);
            r.pair(fp, fq);
            out.push(r.finish());
        }
    }
    out
}

impl Family for UniTrivalentGraph {
    fn graph(&self) -> &UniTrivalentGraph {
        self
    }

    fn op_a(&self, out: &mut Vec<Self>) {
        for (h, _) in self.edges() {
            out.push(hang_leg(self, h).0);
        }
    }

    fn op_a2(&self, out: &mut Vec<Self>) {
        out.extend(join_edges(self).into_iter().map(|(g, _)| g));
    }

    fn op_d(&self, out: &mut Vec<Self>) {
        let (comp, legs) = leg_counts_per_component(self);
        for l in self.legs() {
            if legs[comp[l]] >= 2 {
                out.push(loop_at_leg(self, l).0);
            }
        }
    }

    fn flip_first_trivalent(&self) -> Self {
        match self.vertices().iter().position(|v| !v.is_leg()) {
            Some(i) => self.reversed_at(i),
            None => self.clone(),
        }
    }

    fn degrees(&self) -> Degrees {
        UniTrivalentGraph::degrees(self)
    }
}

fn loop_at_leg(g: &UniTrivalentGraph, l: VertexId) -> (UniTrivalentGraph, Vec<Option<VertexId>>) {
    let mut raw = RawGraph::from_graph(g);
    let h = g.vertex(l).half_edges()[0];
    let s1 = raw.new_half_edge();
    let s2 = raw.new_half_edge();
    raw.pair(s1, s2);
    raw.set_vertex(l, Vertex::Trivalent([h, s1, s2]));
    raw.finish()
}

fn remap_circle(circle: &[VertexId], vmap: &[Option<VertexId>]) -> Vec<VertexId> {
    circle.iter().map(|&v| vmap[v].unwrap()).collect()
}

impl Family for ClosedDiagram {
    fn graph(&self) -> &UniTrivalentGraph {
        self.dashed()
    }

    fn op_a(&self, out: &mut Vec<Self>) {
        let g = self.dashed();
        let u = self.circle().len();
        for (h, _) in g.edges() {
            let (ng, vmap, leg) = hang_leg(g, h);
            let base = remap_circle(self.circle(), &vmap);
            // a cyclic word of u letters has u gaps
            for pos in 0..u.max(1) {
                let mut c = base.clone();
                c.insert(pos, leg);
                out.push(ClosedDiagram::new_unchecked(ng.clone(), c));
            }
        }
    }

    fn op_a2(&self, out: &mut Vec<Self>) {
        for (g, vmap) in join_edges(self.dashed()) {
            let c = remap_circle(self.circle(), &vmap);
            out.push(ClosedDiagram::new_unchecked(g, c));
        }
    }

    fn op_d(&self, out: &mut Vec<Self>) {
        let g = self.dashed();
        let (comp, legs) = leg_counts_per_component(g);
        for l in g.legs() {
            if legs[comp[l]] >= 2 {
                let (ng, vmap) = loop_at_leg(g, l);
                let c: Vec<VertexId> = self.circle().iter().filter(|&&v| v != l).map(|&v| vmap[v].unwrap()).collect();
                out.push(ClosedDiagram::new_unchecked(ng, c));
            }
        }
    }

    fn flip_first_trivalent(&self) -> Self {
        match self.dashed().vertices().iter().position(|v| !v.is_leg()) {
            Some(i) => self.reversed_at(i),
            None => self.clone(),
        }
    }

    fn degrees(&self) -> Degrees {
        ClosedDiagram::degrees(self)
    }
}

/// All chord diagrams with `n` chords, one per class.
pub fn chord_diagrams(n: usize) -> Vec<ClosedDiagram> {
    let mut word = vec![usize::MAX; 2 * n];
    let mut out = Vec::new();
    fn rec(word: &mut [usize], next: usize, out: &mut Vec<ClosedDiagram>) {
        let Some(i) = word.iter().position(|&w| w == usize::MAX) else {
            out.push(crate::graph::examples::chord_diagram(word));
            return;
        };
        word[i] = next;
        for j in i + 1..word.len() {
            if word[j] == usize::MAX {
                word[j] = next;
                rec(word, next + 1, out);
                word[j] = usize::MAX;
            }
        }
        word[i] = usize::MAX;
    }
    if n > 0 {
        rec(&mut word, 0, &mut out);
    }
    out
}

/// Memoized level-by-level generator for one family of diagrams.
#[derive(Clone, Debug)]
pub struct Enumerator<D> {
    seeds: fn(usize) -> Vec<D>,
    connected_seed_only: bool,
    levels: BTreeMap<(usize, usize), Vec<Generator<D>>>,
    cap: Option<usize>,
}

fn open_seeds(v: usize) -> Vec<UniTrivalentGraph> {
    if v == 1 {
        vec![crate::graph::examples::strut()]
    } else {
        Vec::new()
    }
}

fn connected_chord_seeds(v: usize) -> Vec<ClosedDiagram> {
    if v == 1 {
        chord_diagrams(1)
    } else {
        Vec::new()
    }
}

impl Enumerator<UniTrivalentGraph> {
    /// Connected open graphs with at least one leg.
    pub fn open() -> Self {
        Enumerator { seeds: open_seeds, connected_seed_only: true, levels: BTreeMap::new(), cap: None }
    }
}

impl Enumerator<ClosedDiagram> {
    /// Closed diagrams; `connected` restricts to a connected dashed part.
    pub fn closed(connected: bool) -> Self {
        Enumerator {
            seeds: if connected { connected_chord_seeds } else { chord_diagrams },
            connected_seed_only: connected,
            levels: BTreeMap::new(),
            cap: None,
        }
    }
}

impl<D: Family> Enumerator<D> {
    pub fn set_cap(&mut self, cap: Option<usize>) {
        self.cap = cap;
    }

    /// Whether only the connected family is generated.
    pub fn is_connected_family(&self) -> bool {
        self.connected_seed_only
    }

    /// The classes with Vassiliev degree `v` and `t` trivalent vertices,
    /// sorted by key.
    pub fn level(&mut self, v: usize, t: usize) -> Result<&[Generator<D>], EnumError> {
        self.ensure(v, t)?;
        Ok(&self.levels[&(v, t)])
    }

    fn ensure(&mut self, v: usize, t: usize) -> Result<(), EnumError> {
        // gather the missing dependencies, then build in (v, t) order
        let mut need = BTreeSet::new();
        let mut stack = vec![(v, t)];
        while let Some((v, t)) = stack.pop() {
            if self.levels.contains_key(&(v, t)) || !need.insert((v, t)) || v == 0 || t == 0 {
                continue;
            }
            stack.push((v, t - 1));
            stack.push((v - 1, t - 1));
            if t >= 2 {
                stack.push((v - 1, t - 2));
            }
        }
        for (v, t) in need {
            self.build(v, t)?;
        }
        Ok(())
    }

    fn build(&mut self, v: usize, t: usize) -> Result<(), EnumError> {
        // a level's diagrams have 2v vertices and 2v + 2t half-edges
        if 2 * v + 2 * t > MAX_HALF_EDGES || t > 2 * v {
            if t > 2 * v {
                self.levels.insert((v, t), Vec::new());
                return Ok(());
            }
            return Err(EnumError::TooLarge { v, t });
        }
        let mut candidates = Vec::new();
        if t == 0 {
            candidates = (self.seeds)(v);
        } else if v > 0 {
            let empty = Vec::new();
            let get = |s: &Self, k: (usize, usize)| -> Vec<D> {
                s.levels.get(&k).unwrap_or(&empty).iter().map(|g| g.diagram.clone()).collect()
            };
            for p in get(self, (v - 1, t - 1)) {
                p.op_a(&mut candidates);
            }
            if t >= 2 {
                for p in get(self, (v - 1, t - 2)) {
                    p.op_a2(&mut candidates);
                }
            }
            for p in get(self, (v, t - 1)) {
                p.op_d(&mut candidates);
            }
        }
        let mut found: BTreeMap<CanonicalKey, Generator<D>> = BTreeMap::new();
        for d in candidates {
            let c = d.canonical();
            if found.contains_key(&c.key) {
                continue;
            }
            let diagram = if c.sign == Sign::Minus && !c.self_negative { d.flip_first_trivalent() } else { d };
            debug_assert!(c.self_negative || diagram.canonical().sign == Sign::Plus);
            let degrees = diagram.degrees();
            found.insert(c.key.clone(), Generator { key: c.key, diagram, self_negative: c.self_negative, degrees });
            if let Some(cap) = self.cap {
                if found.len() > cap {
                    return Err(EnumError::CapExceeded { v, t, cap });
                }
            }
        }
        self.levels.insert((v, t), found.into_values().collect());
        Ok(())
    }

    /// All classes in the given levels that satisfy `spec`, sorted by key.
    fn collect(&mut self, spec: &EnumSpec) -> Result<Vec<Generator<D>>, EnumError> {
        let mut out = Vec::new();
        for (v, t) in spec.target_levels() {
            for g in self.level(v, t)? {
                if spec.accepts(&g.degrees) && (spec.space != Space::AConnected || g.diagram.graph().is_connected()) {
                    out.push(g.clone());
                }
            }
        }
        out.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(out)
    }

    /// Levels `(v, t)` with `v` in `vs` and any `t`, concatenated.
    pub fn vassiliev_degree(&mut self, vs: RangeInclusive<usize>) -> Result<Vec<Generator<D>>, EnumError> {
        let mut out = Vec::new();
        for v in vs {
            for t in 0..2 * v {
                out.extend(self.level(v, t)?.iter().cloned());
            }
        }
        Ok(out)
    }
}

/// Connected open graphs meeting `spec` (which must name space B).
pub fn enumerate_open(spec: &EnumSpec) -> Result<Vec<Generator<UniTrivalentGraph>>, EnumError> {
    enumerate_open_with(&mut Enumerator::open(), spec)
}

pub fn enumerate_open_with(
    e: &mut Enumerator<UniTrivalentGraph>,
    spec: &EnumSpec,
) -> Result<Vec<Generator<UniTrivalentGraph>>, EnumError> {
    spec.validate()?;
    e.set_cap(spec.cap);
    e.collect(spec)
}

/// Closed diagrams meeting `spec` (space A or A_connected).
pub fn enumerate_closed(spec: &EnumSpec) -> Result<Vec<Generator<ClosedDiagram>>, EnumError> {
    enumerate_closed_with(&mut Enumerator::closed(spec.space == Space::AConnected), spec)
}

pub fn enumerate_closed_with(
    e: &mut Enumerator<ClosedDiagram>,
    spec: &EnumSpec,
) -> Result<Vec<Generator<ClosedDiagram>>, EnumError> {
    spec.validate()?;
    e.set_cap(spec.cap);
    e.collect(spec)
}

pub fn enumerate(spec: &EnumSpec) -> Result<Diagrams, EnumError> {
    match spec.space {
        Space::B => enumerate_open(spec).map(Diagrams::Open),
        Space::A | Space::AConnected => enumerate_closed(spec).map(Diagrams::Closed),
    }
}

/// Every way of attaching the legs of `g` to an oriented circle, one per
/// class, sorted by key.
pub fn attach_legs(g: &UniTrivalentGraph) -> Vec<Generator<ClosedDiagram>> {
    let mut found: BTreeMap<CanonicalKey, Generator<ClosedDiagram>> = BTreeMap::new();
    for d in all_closures(g) {
        let c = d.canonical();
        if found.contains_key(&c.key) {
            continue;
        }
        let diagram = if c.sign == Sign::Minus && !c.self_negative { d.flip_first_trivalent() } else { d };
        let degrees = diagram.degrees();
        found.insert(c.key.clone(), Generator { key: c.key, diagram, self_negative: c.self_negative, degrees });
    }
    found.into_values().collect()
}

/// The `(u-1)!` closures of `g`, one per cyclic word in its legs.
pub fn all_closures(g: &UniTrivalentGraph) -> Vec<ClosedDiagram> {
    let legs = g.legs();
    let mut out = Vec::new();
    if legs.is_empty() {
        return out;
    }
    let mut rest: Vec<VertexId> = legs[1..].to_vec();
    permutations(&mut rest, 0, &mut |p| {
        let mut c = Vec::with_capacity(legs.len());
        c.push(legs[0]);
        c.extend_from_slice(p);
        out.push(ClosedDiagram::new_unchecked(g.clone(), c));
    });
    out
}

fn permutations(xs: &mut [VertexId], i: usize, f: &mut dyn FnMut(&[VertexId])) {
    if i == xs.len() {
        f(xs);
        return;
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        permutations(xs, i + 1, f);
        xs.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::*;

    fn keyset<D: Canonical>(ds: &[D]) -> BTreeSet<CanonicalKey> {
        ds.iter().map(|d| d.canonical().key).collect()
    }

    #[test]
    fn small_open_levels() {
        let mut e = Enumerator::open();
        assert_eq!(e.level(1, 0).unwrap().len(), 1);
        assert_eq!(e.level(1, 1).unwrap().len(), 1);
        assert_eq!(e.level(2, 1).unwrap().len(), 1);
        assert_eq!(e.level(2, 1).unwrap()[0].key, tripod().canonical().key);
    }

    #[test]
    fn grope_two_is_the_tripod() {
        let b = enumerate_open(&EnumSpec::new(Space::B, Grading::Grope, 2)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].key, tripod().canonical().key);
    }

    #[test]
    fn vassiliev_two_contains_tripod_and_bubble() {
        let b = enumerate_open(&EnumSpec::new(Space::B, Grading::Vassiliev, 2)).unwrap();
        let keys: BTreeSet<_> = b.iter().map(|g| g.key.clone()).collect();
        assert!(keys.contains(&tripod().canonical().key));
        assert!(keys.contains(&bubble().canonical().key));
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn degree_one_b_is_rejected() {
        let r = enumerate_open(&EnumSpec::new(Space::B, Grading::Vassiliev, 1));
        assert_eq!(r.unwrap_err(), EnumError::DegreeTooSmall(1));
    }

    #[test]
    fn degree_one_closed() {
        // the chord, and the tadpole on the circle
        let a = enumerate_closed(&EnumSpec::new(Space::AConnected, Grading::Vassiliev, 1)).unwrap();
        assert_eq!(a.len(), 2);
        let chord = chord_diagrams(1)[0].canonical().key;
        assert!(a.iter().any(|g| g.key == chord));
        let a = enumerate_closed(&EnumSpec::new(Space::A, Grading::Vassiliev, 1).with_loops(None, Some(0))).unwrap();
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn chord_diagram_counts() {
        // up to rotation
        let counts: Vec<usize> = (1..=5).map(|n| keyset(&chord_diagrams(n)).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 18, 105]);
    }

    #[test]
    fn attach_legs_examples() {
        assert_eq!(attach_legs(&tripod()).len(), 1);
        assert_eq!(attach_legs(&bubble()).len(), 1);
        assert_eq!(attach_legs(&strut()).len(), 1);
        assert_eq!(all_closures(&h_tree()).len(), 6);
    }

    #[test]
    fn cap_is_reported() {
        let spec = EnumSpec::new(Space::A, Grading::Vassiliev, 4).with_cap(3);
        assert!(matches!(enumerate_closed(&spec), Err(EnumError::CapExceeded { .. })));
    }

    #[test]
    fn levels_have_no_duplicates() {
        let mut e = Enumerator::closed(false);
        for v in 1..=3 {
            for t in 0..2 * v {
                let lvl = e.level(v, t).unwrap();
                let keys: BTreeSet<_> = lvl.iter().map(|g| g.key.clone()).collect();
                assert_eq!(keys.len(), lvl.len());
                for g in lvl {
                    assert_eq!(g.degrees.v, v);
                    assert_eq!(g.diagram.dashed().trivalent_count(), t);
                }
            }
        }
    }
}
