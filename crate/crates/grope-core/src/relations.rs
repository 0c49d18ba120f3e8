//! Relation rows over an enumerated basis.
//!
//! Columns are basis positions. A basis element is the canonically
//! oriented representative of its class, so an oriented diagram `X` is the
//! column of its key with coefficient equal to its canonical sign. This
//! absorbs every AS relation between distinct oriented diagrams; what is
//! left of AS are the rows `2D = 0` for self-negative classes.
//!
//! Sign conventions, with `w` a trivalent vertex rotated to `(p, a, b)`:
//!
//! * STU at a leg `x` attached to `w` through `p`: removing `x` and `w`
//!   makes `a`, `b` new legs placed where `x` was; `T` has them in circle
//!   order `(a, b)`, `U` in order `(b, a)`, and the row is `S - T + U`.
//! * IHX at an edge `u - w` with `u = (e, a, b)` and `w = (f, c, d)`, the
//!   edge being `e - f`: `H` has vertices `(c, f, b)` and `(e, d, a)`, `X`
//!   has `(c, f, a)` and `(e, d, b)`, and the row is `I - H + X`. Reading
//!   a vertex `(x, y, z)` as `<[x, y], z>` this is the Jacobi identity.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::canon::CanonicalKey;
use crate::enumerate::{Family, Generator};
use crate::graph::{ClosedDiagram, HalfEdge, RawGraph, UniTrivalentGraph, Vertex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    As,
    SelfNeg,
    Ihx,
    Stu,
    Decomposable,
    Decomposable1T,
    Loops,
}

impl Tag {
    pub const ALL: [Tag; 7] =
        [Tag::As, Tag::SelfNeg, Tag::Ihx, Tag::Stu, Tag::Decomposable, Tag::Decomposable1T, Tag::Loops];

    pub fn name(self) -> &'static str {
        match self {
            Tag::As => "AS",
            Tag::SelfNeg => "SELF_NEG",
            Tag::Ihx => "IHX",
            Tag::Stu => "STU",
            Tag::Decomposable => "DECOMPOSABLE",
            Tag::Decomposable1T => "DECOMPOSABLE-1T",
            Tag::Loops => "LOOPS",
        }
    }

    pub fn from_name(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// A relation: a sparse integer combination of basis columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationRow {
    /// `(column, coefficient)`, sorted by column, no zero coefficients.
    pub entries: Vec<(usize, i64)>,
    pub tag: Tag,
    /// Basis position of the diagram the row was generated from.
    pub source: usize,
    /// Vertex or half-edge identifying the site inside the source.
    pub site: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("relation term {key:?} (from basis element {source_index}) is not in the basis")]
    MissingGenerator { key: CanonicalKey, source_index: usize },
}

/// An enumerated basis with key lookup.
#[derive(Clone, Debug)]
pub struct Basis<D> {
    gens: Vec<Generator<D>>,
    index: BTreeMap<CanonicalKey, usize>,
}

impl<D: Family> Basis<D> {
    /// `gens` must have distinct keys.
    pub fn new(gens: Vec<Generator<D>>) -> Self {
        let index: BTreeMap<_, _> = gens.iter().enumerate().map(|(i, g)| (g.key.clone(), i)).collect();
        assert_eq!(index.len(), gens.len(), "duplicate keys in basis");
        Basis { gens, index }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator<D>] {
        &self.gens
    }

    pub fn get(&self, i: usize) -> &Generator<D> {
        &self.gens[i]
    }

    pub fn position(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn keys(&self) -> Vec<CanonicalKey> {
        self.gens.iter().map(|g| g.key.clone()).collect()
    }

    /// The column and coefficient of an oriented diagram.
    pub fn locate(&self, d: &D) -> Option<(usize, i64)> {
        let c = d.canonical();
        self.position(&c.key).map(|i| (i, c.sign.to_i64()))
    }
}

/// Accumulates `coeff * d` terms into a row.
struct RowBuilder<'a, D> {
    basis: &'a Basis<D>,
    source: usize,
    terms: BTreeMap<usize, i64>,
}

impl<'a, D: Family> RowBuilder<'a, D> {
    fn new(basis: &'a Basis<D>, source: usize) -> Self {
        RowBuilder { basis, source, terms: BTreeMap::new() }
    }

    fn add(&mut self, d: &D, coeff: i64) -> Result<(), RelationError> {
        let c = d.canonical();
        let Some(i) = self.basis.position(&c.key) else {
            return Err(RelationError::MissingGenerator { key: c.key, source_index: self.source });
        };
        *self.terms.entry(i).or_insert(0) += coeff * c.sign.to_i64();
        Ok(())
    }

    fn add_column(&mut self, i: usize, coeff: i64) {
        *self.terms.entry(i).or_insert(0) += coeff;
    }

    fn finish(self, tag: Tag, site: usize) -> Option<RelationRow> {
        let entries: Vec<(usize, i64)> = self.terms.into_iter().filter(|&(_, c)| c != 0).collect();
        if entries.is_empty() {
            None
        } else {
            Some(RelationRow { entries, tag, source: self.source, site })
        }
    }
}

/// Canonical form of a row for deduplication: entries scaled so the first
/// coefficient is positive.
fn normalized(entries: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let s = if entries.first().is_some_and(|&(_, c)| c < 0) { -1 } else { 1 };
    entries.iter().map(|&(i, c)| (i, s * c)).collect()
}

/// Drops rows with the same entries up to sign, keeping the first.
pub fn dedupe(rows: Vec<RelationRow>) -> Vec<RelationRow> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        if seen.insert(normalized(&r.entries), ()).is_none() {
            out.push(r);
        }
    }
    out
}

/// AS rows: `2D = 0` for every self-negative class.
pub fn as_rows<D: Family>(basis: &Basis<D>) -> Result<Vec<RelationRow>, RelationError> {
    let mut rows = Vec::new();
    for (i, g) in basis.generators().iter().enumerate() {
        if g.self_negative {
            rows.push(RelationRow { entries: vec![(i, 2)], tag: Tag::SelfNeg, source: i, site: 0 });
        }
    }
    Ok(rows)
}

/// The AS row comparing `d` with `d` reversed at `vertex`. Both are
/// expressed in the basis; the row is `d + flip(d)`, empty unless the
/// class is self-negative.
pub fn as_row_at<D: Family + FlipAt>(
    basis: &Basis<D>,
    source: usize,
    d: &D,
    vertex: VertexId,
) -> Result<Option<RelationRow>, RelationError> {
    let mut b = RowBuilder::new(basis, source);
    b.add(d, 1)?;
    b.add(&d.flip_at(vertex), 1)?;
    Ok(b.finish(Tag::As, vertex))
}

/// Reversal of the cyclic order at one vertex.
pub trait FlipAt {
    fn flip_at(&self, v: VertexId) -> Self;
}

impl FlipAt for UniTrivalentGraph {
    fn flip_at(&self, v: VertexId) -> Self {
        self.reversed_at(v)
    }
}

impl FlipAt for ClosedDiagram {
    fn flip_at(&self, v: VertexId) -> Self {
        self.reversed_at(v)
    }
}

/// Rotation of a trivalent vertex as `(h, x, y)` starting at `h`.
fn rotated(g: &UniTrivalentGraph, v: VertexId, h: HalfEdge) -> [HalfEdge; 3] {
    let Vertex::Trivalent(r) = g.vertex(v) else { unreachable!() };
    let i = r.iter().position(|&x| x == h).unwrap();
    [r[i], r[(i + 1) % 3], r[(i + 2) % 3]]
}

/// The `H` and `X` graphs of the IHX relation at the edge `e - partner(e)`.
fn ihx_terms(g: &UniTrivalentGraph, e: HalfEdge) -> (UniTrivalentGraph, UniTrivalentGraph) {
    let f = g.partner(e);
    let (u, w) = (g.vertex_of(e), g.vertex_of(f));
    let [_, a, b] = rotated(g, u, e);
    let [_, c, d] = rotated(g, w, f);
    let mut h = RawGraph::from_graph(g);
    h.set_vertex(u, Vertex::Trivalent([c, f, b]));
    h.set_vertex(w, Vertex::Trivalent([e, d, a]));
    let mut x = RawGraph::from_graph(g);
    x.set_vertex(u, Vertex::Trivalent([c, f, a]));
    x.set_vertex(w, Vertex::Trivalent([e, d, b]));
    (h.finish().0, x.finish().0)
}

/// Sites for IHX: edges joining two distinct trivalent vertices, once per
/// edge. Returns the sites and the number of skipped self-loops.
fn ihx_sites(g: &UniTrivalentGraph) -> (Vec<HalfEdge>, usize) {
    let mut sites = Vec::new();
    let mut loops = 0;
    for (a, b) in g.edges() {
        let (u, w) = (g.vertex_of(a), g.vertex_of(b));
        if g.vertex(u).is_leg() || g.vertex(w).is_leg() {
            continue;
        }
        if u == w {
            loops += 1;
        } else {
            sites.push(a);
        }
    }
    (sites, loops)
}

/// Output of [`ihx_rows`].
#[derive(Clone, Debug, Default)]
pub struct IhxRows {
    pub rows: Vec<RelationRow>,
    /// Self-loop edges, where no IHX relation is imposed.
    pub skipped_self_loops: usize,
}

/// Diagrams on which IHX acts through the dashed graph.
pub trait IhxSite: Family {
    fn with_graph(&self, g: UniTrivalentGraph) -> Self;
}

impl IhxSite for UniTrivalentGraph {
    fn with_graph(&self, g: UniTrivalentGraph) -> Self {
        g
    }
}

impl IhxSite for ClosedDiagram {
    fn with_graph(&self, g: UniTrivalentGraph) -> Self {
        // IHX keeps vertex ids, so the circle is unchanged
        ClosedDiagram::new_unchecked(g, self.circle().to_vec())
    }
}

/// IHX rows generated at basis element `i`.
pub fn ihx_rows_of<D: IhxSite>(basis: &Basis<D>, i: usize, out: &mut IhxRows) -> Result<(), RelationError> {
    let d = &basis.get(i).diagram;
    let (sites, loops) = ihx_sites(d.graph());
    out.skipped_self_loops += loops;
    for e in sites {
        let (h, x) = ihx_terms(d.graph(), e);
        let mut b = RowBuilder::new(basis, i);
        b.add_column(i, 1);
        b.add(&d.with_graph(h), -1)?;
        b.add(&d.with_graph(x), 1)?;
        if let Some(r) = b.finish(Tag::Ihx, e) {
            out.rows.push(r);
        }
    }
    Ok(())
}

pub fn ihx_rows<D: IhxSite>(basis: &Basis<D>) -> Result<IhxRows, RelationError> {
    let mut out = IhxRows::default();
    for i in 0..basis.len() {
        ihx_rows_of(basis, i, &mut out)?;
    }
    Ok(out)
}

/// The `T` and `U` diagrams of the STU relation at circle position `pos`,
/// or `None` when the leg there ends on another leg.
pub fn stu_terms(d: &ClosedDiagram, pos: usize) -> Option<(ClosedDiagram, ClosedDiagram)> {
    let g = d.dashed();
    let leg = d.circle()[pos];
    let hx = g.vertex(leg).half_edges()[0];
    let p = g.partner(hx);
    let w = g.vertex_of(p);
    if g.vertex(w).is_leg() {
        return None;
    }
    let [_, a, b] = rotated(g, w, p);
    let mut raw = RawGraph::from_graph(g);
    raw.remove_vertex(leg);
    raw.remove_vertex(w);
    let la = raw.new_half_edge();
    let lb = raw.new_half_edge();
    let va = raw.add_vertex(Vertex::Leg(la));
    let vb = raw.add_vertex(Vertex::Leg(lb));
    if g.partner(a) == b {
        raw.pair(la, lb);
    } else {
        raw.pair(la, g.partner(a));
        raw.pair(lb, g.partner(b));
    }
    let (ng, vmap) = raw.finish();
    let (va, vb) = (vmap[va].unwrap(), vmap[vb].unwrap());
    let mut t = Vec::with_capacity(d.circle().len() + 1);
    let mut u = Vec::with_capacity(d.circle().len() + 1);
    for (i, &v) in d.circle().iter().enumerate() {
        if i == pos {
            t.extend_from_slice(&[va, vb]);
            u.extend_from_slice(&[vb, va]);
        } else {
            let v = vmap[v].unwrap();
            t.push(v);
            u.push(v);
        }
    }
    Some((ClosedDiagram::new_unchecked(ng.clone(), t), ClosedDiagram::new_unchecked(ng, u)))
}

/// STU rows generated at basis element `i`, one per leg ending on a
/// trivalent vertex.
pub fn stu_rows_of(basis: &Basis<ClosedDiagram>, i: usize, out: &mut Vec<RelationRow>) -> Result<(), RelationError> {
    let d = &basis.get(i).diagram;
    for pos in 0..d.circle().len() {
        if let Some((t, u)) = stu_terms(d, pos) {
            let mut b = RowBuilder::new(basis, i);
            b.add_column(i, 1);
            b.add(&t, -1)?;
            b.add(&u, 1)?;
            if let Some(r) = b.finish(Tag::Stu, pos) {
                out.push(r);
            }
        }
    }
    Ok(())
}

pub fn stu_rows(basis: &Basis<ClosedDiagram>) -> Result<Vec<RelationRow>, RelationError> {
    let mut out = Vec::new();
    for i in 0..basis.len() {
        stu_rows_of(basis, i, &mut out)?;
    }
    Ok(out)
}

/// Rows killing every basis element selected by `pred`.
pub fn kill_rows<D>(basis: &Basis<D>, tag: Tag, mut pred: impl FnMut(&Generator<D>) -> bool) -> Vec<RelationRow>
where
    D: Family,
{
    basis
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| pred(g))
        .map(|(i, _)| RelationRow { entries: vec![(i, 1)], tag, source: i, site: 0 })
        .collect()
}

/// Products of diagrams of positive degree.
pub fn decomposable_rows(basis: &Basis<ClosedDiagram>) -> Vec<RelationRow> {
    kill_rows(basis, Tag::Decomposable, |g| g.diagram.is_separated())
}

/// Diagrams with an isolated chord (the unframed quotient).
pub fn isolated_chord_rows(basis: &Basis<ClosedDiagram>) -> Vec<RelationRow> {
    kill_rows(basis, Tag::Decomposable1T, |g| g.diagram.has_isolated_chord())
}

/// Diagrams with at least `m` loops, or exactly `m` when `exact`.
pub fn loop_rows<D: Family>(basis: &Basis<D>, m: usize, exact: bool) -> Vec<RelationRow> {
    kill_rows(basis, Tag::Loops, |g| if exact { g.degrees.b1 == m } else { g.degrees.b1 >= m })
}

/// Whether all terms of `row` share Vassiliev and grope degree.
pub fn is_homogeneous<D: Family>(basis: &Basis<D>, row: &RelationRow) -> bool {
    let mut it = row.entries.iter().map(|&(i, _)| {
        let d = basis.get(i).degrees;
        (d.v, d.g)
    });
    let first = it.next();
    it.all(|x| Some(x) == first)
}

pub fn is_vassiliev_homogeneous<D: Family>(basis: &Basis<D>, row: &RelationRow) -> bool {
    let mut it = row.entries.iter().map(|&(i, _)| basis.get(i).degrees.v);
    let first = it.next();
    it.all(|x| Some(x) == first)
}

/// Number of rows per tag.
pub fn tag_counts(rows: &[RelationRow]) -> BTreeMap<Tag, usize> {
    let mut m = BTreeMap::new();
    for r in rows {
        *m.entry(r.tag).or_insert(0) += 1;
    }
    m
}
