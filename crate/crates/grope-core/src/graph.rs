//! Uni-trivalent graphs and closed diagrams.
//!
//! A [`UniTrivalentGraph`] is stored at the level of half-edges: every
//! half-edge belongs to exactly one vertex and is paired with exactly one
//! other half-edge. A trivalent vertex lists its three half-edges in cyclic
//! order, which is its orientation. Self-loops and multiple edges are
//! allowed.
//!
//! A [`ClosedDiagram`] adds a cyclic order of the legs: the order in which
//! they are attached to the oriented outer circle.

use alloc::vec;
use alloc::vec::Vec;

pub type HalfEdge = usize;
pub type VertexId = usize;

/// Canonical keys address half-edges with a single byte.
pub const MAX_HALF_EDGES: usize = 250;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// A univalent vertex.
    Leg(HalfEdge),
    /// A trivalent vertex with its half-edges in cyclic order.
    Trivalent([HalfEdge; 3]),
}

impl Vertex {
    pub fn half_edges(&self) -> &[HalfEdge] {
        match self {
            Vertex::Leg(h) => core::slice::from_ref(h),
            Vertex::Trivalent(hs) => hs,
        }
    }

    pub fn is_leg(&self) -> bool {
        matches!(self, Vertex::Leg(_))
    }

    /// Same vertex, opposite cyclic orientation. Legs are unchanged.
    pub fn reversed(self) -> Vertex {
        match self {
            Vertex::Leg(h) => Vertex::Leg(h),
            Vertex::Trivalent([a, b, c]) => Vertex::Trivalent([a, c, b]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("half-edge h{0} is used by more than one vertex")]
    DuplicateHalfEdge(HalfEdge),
    #[error("half-edge h{0} is not attached to any vertex")]
    UnattachedHalfEdge(HalfEdge),
    #[error("half-edge h{0} appears in more than one edge")]
    DuplicatePairing(HalfEdge),
    #[error("half-edge h{0} is not part of any edge")]
    Unpaired(HalfEdge),
    #[error("half-edge h{0} is paired with itself")]
    FixedPoint(HalfEdge),
    #[error("half-edge h{0} is out of range")]
    OutOfRange(HalfEdge),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has {0} half-edges; at most {MAX_HALF_EDGES} are supported")]
    TooLarge(usize),
    #[error("circle order must list every leg exactly once")]
    BadCircle,
    #[error("closed diagram has an odd number of vertices ({0})")]
    OddVertexCount(usize),
    #[error("a component of the dashed part has no leg on the circle")]
    LeglessComponent,
}

/// The three degrees of a diagram, plus its loop number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degrees {
    /// Vassiliev degree: half the number of vertices.
    pub v: usize,
    /// First Betti number of the dashed part.
    pub b1: usize,
    /// Grope degree `v + b1`.
    pub g: usize,
    /// Euler degree: trivalent vertices with no univalent neighbour.
    pub e: usize,
    /// Same as `b1`; named for loop-filtration contexts.
    pub loops: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniTrivalentGraph {
    partner: Vec<HalfEdge>,
    vertex_of: Vec<VertexId>,
    vertices: Vec<Vertex>,
}

impl UniTrivalentGraph {
    /// Builds a graph from its vertices and its edges (pairs of half-edges).
    ///
    /// Half-edges are the integers `0..n`; each must appear in exactly one
    /// vertex and in exactly one edge.
    pub fn new(vertices: Vec<Vertex>, edges: &[(HalfEdge, HalfEdge)]) -> Result<Self, GraphError> {
        let n: usize = vertices.iter().map(|v| v.half_edges().len()).sum();
        if n > MAX_HALF_EDGES {
            return Err(GraphError::TooLarge(n));
        }
        let mut vertex_of = vec![usize::MAX; n];
        for (id, v) in vertices.iter().enumerate() {
            for &h in v.half_edges() {
                if h >= n {
                    return Err(GraphError::OutOfRange(h));
                }
                if vertex_of[h] != usize::MAX {
                    return Err(GraphError::DuplicateHalfEdge(h));
                }
                vertex_of[h] = id;
            }
        }
        let mut partner = vec![usize::MAX; n];
        for &(a, b) in edges {
            for h in [a, b] {
                if h >= n {
                    return Err(GraphError::OutOfRange(h));
                }
            }
            if a == b {
                return Err(GraphError::FixedPoint(a));
            }
            for h in [a, b] {
                if partner[h] != usize::MAX {
                    return Err(GraphError::DuplicatePairing(h));
                }
            }
            partner[a] = b;
            partner[b] = a;
        }
        if let Some(h) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::Unpaired(h));
        }
        Ok(UniTrivalentGraph { partner, vertex_of, vertices })
    }

    /// Like [`UniTrivalentGraph::new`], additionally requiring connectivity.
    pub fn new_connected(vertices: Vec<Vertex>, edges: &[(HalfEdge, HalfEdge)]) -> Result<Self, GraphError> {
        let g = Self::new(vertices, edges)?;
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn half_edge_count(&self) -> usize {
        self.partner.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> Vertex {
        self.vertices[id]
    }

    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h]
    }

    pub fn vertex_of(&self, h: HalfEdge) -> VertexId {
        self.vertex_of[h]
    }

    pub fn legs(&self) -> Vec<VertexId> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].is_leg()).collect()
    }

    pub fn leg_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_leg()).count()
    }

    pub fn trivalent_count(&self) -> usize {
        self.vertices.len() - self.leg_count()
    }

    pub fn edge_count(&self) -> usize {
        self.partner.len() / 2
    }

    /// Edges as `(h, partner(h))` with `h < partner(h)`, sorted.
    pub fn edges(&self) -> Vec<(HalfEdge, HalfEdge)> {
        (0..self.partner.len()).filter(|&h| h < self.partner[h]).map(|h| (h, self.partner[h])).collect()
    }

    /// Vertex adjacent to the other end of half-edge `h`.
    pub fn across(&self, h: HalfEdge) -> VertexId {
        self.vertex_of[self.partner[h]]
    }

    /// Component index of every vertex, and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.vertices.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &h in self.vertices[v].half_edges() {
                    let w = self.across(h);
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    pub fn first_betti(&self) -> usize {
        let (_, c) = self.components();
        self.edge_count() + c - self.vertex_count()
    }

    /// Trivalent vertices none of whose neighbours is a leg.
    pub fn euler_degree(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| match v {
                Vertex::Leg(_) => false,
                Vertex::Trivalent(hs) => hs.iter().all(|&h| !self.vertices[self.across(h)].is_leg()),
            })
            .count()
    }

    /// Degrees; `v` is half the vertex count (rounded down for odd counts).
    pub fn degrees(&self) -> Degrees {
        let v = self.vertex_count() / 2;
        let b1 = self.first_betti();
        Degrees { v, b1, g: v + b1, e: self.euler_degree(), loops: b1 }
    }

    /// The same graph with the cyclic order at `vertex` reversed.
    pub fn reversed_at(&self, vertex: VertexId) -> UniTrivalentGraph {
        let mut g = self.clone();
        g.vertices[vertex] = g.vertices[vertex].reversed();
        g
    }

    /// Whether the two ends of edge `h` lie at the same vertex.
    pub fn is_self_loop(&self, h: HalfEdge) -> bool {
        self.vertex_of[h] == self.vertex_of[self.partner[h]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedDiagram {
    dashed: UniTrivalentGraph,
    circle: Vec<VertexId>,
}

impl ClosedDiagram {
    /// `circle` lists the legs of `dashed` in the order they are met along
    /// the oriented circle (a cyclic word).
    pub fn new(dashed: UniTrivalentGraph, circle: Vec<VertexId>) -> Result<Self, GraphError> {
        let mut seen = vec![false; dashed.vertex_count()];
        for &v in &circle {
            if v >= dashed.vertex_count() || !dashed.vertex(v).is_leg() || seen[v] {
                return Err(GraphError::BadCircle);
            }
            seen[v] = true;
        }
        if circle.len() != dashed.leg_count() {
            return Err(GraphError::BadCircle);
        }
        if !dashed.vertex_count().is_multiple_of(2) {
            return Err(GraphError::OddVertexCount(dashed.vertex_count()));
        }
        let (comp, count) = dashed.components();
        let mut has_leg = vec![false; count];
        for &v in &circle {
            has_leg[comp[v]] = true;
        }
        if has_leg.iter().any(|&b| !b) {
            return Err(GraphError::LeglessComponent);
        }
        Ok(ClosedDiagram { dashed, circle })
    }

    pub(crate) fn new_unchecked(dashed: UniTrivalentGraph, circle: Vec<VertexId>) -> Self {
        debug_assert!(ClosedDiagram::new(dashed.clone(), circle.clone()).is_ok());
        ClosedDiagram { dashed, circle }
    }

    pub fn dashed(&self) -> &UniTrivalentGraph {
        &self.dashed
    }

    pub fn circle(&self) -> &[VertexId] {
        &self.circle
    }

    /// Vassiliev degree.
    pub fn degree(&self) -> usize {
        self.dashed.vertex_count() / 2
    }

    pub fn degrees(&self) -> Degrees {
        self.dashed.degrees()
    }

    /// The outer circle traversed backwards; the dashed part is unchanged.
    pub fn reverse_circle(&self) -> ClosedDiagram {
        let mut circle = self.circle.clone();
        circle.reverse();
        ClosedDiagram { dashed: self.dashed.clone(), circle }
    }

    pub fn reversed_at(&self, vertex: VertexId) -> ClosedDiagram {
        ClosedDiagram { dashed: self.dashed.reversed_at(vertex), circle: self.circle.clone() }
    }

    /// Component index (in the dashed part) of each circle position.
    pub fn circle_components(&self) -> Vec<usize> {
        let (comp, _) = self.dashed.components();
        self.circle.iter().map(|&v| comp[v]).collect()
    }

    /// Whether the circle can be cut at two points so that both arcs carry
    /// legs and no dashed component has legs on both arcs, i.e. the diagram
    /// is a connected sum of two diagrams of positive degree.
    pub fn is_separated(&self) -> bool {
        let comps = self.circle_components();
        let n = comps.len();
        let ncomp = comps.iter().copied().max().map_or(0, |m| m + 1);
        if ncomp < 2 {
            return false;
        }
        let mut total = vec![0usize; ncomp];
        for &c in &comps {
            total[c] += 1;
        }
        // An arc starting at position i is a union of whole components
        // exactly when every component it touches is fully inside it.
        for i in 0..n {
            let mut inside = vec![0usize; ncomp];
            let mut open = 0usize;
            for len in 1..n {
                let c = comps[(i + len - 1) % n];
                if inside[c] == 0 {
                    open += 1;
                }
                inside[c] += 1;
                if inside[c] == total[c] {
                    open -= 1;
                }
                if open == 0 {
                    return true;
                }
            }
        }
        false
    }

    /// Whether some component is a single chord that meets no other
    /// component, so the diagram is a product with the isolated chord.
    pub fn has_isolated_chord(&self) -> bool {
        let comps = self.circle_components();
        let n = comps.len();
        let (comp_of, ncomp) = self.dashed.components();
        let mut sizes = vec![0usize; ncomp];
        for v in 0..self.dashed.vertex_count() {
            sizes[comp_of[v]] += 1;
        }
        let mut total = vec![0usize; ncomp];
        for &c in &comps {
            total[c] += 1;
        }
        for i in 0..n {
            let c = comps[i];
            if sizes[c] != 2 {
                continue;
            }
            // walk from one endpoint to the other; the enclosed arc must be
            // a union of whole components
            let mut inside = vec![0usize; ncomp];
            let mut ok = true;
            let mut j = (i + 1) % n;
            while comps[j] != c {
                inside[comps[j]] += 1;
                j = (j + 1) % n;
            }
            for (x, &cnt) in inside.iter().enumerate() {
                if cnt != 0 && cnt != total[x] {
                    ok = false;
                }
            }
            if ok {
                return true;
            }
        }
        false
    }
}

/// Scratch representation used to splice graphs: vertices may be deleted
/// and half-edges added before the result is compacted.
#[derive(Clone, Debug)]
pub(crate) struct RawGraph {
    partner: Vec<HalfEdge>,
    vertices: Vec<Option<Vertex>>,
}

impl RawGraph {
    pub(crate) fn from_graph(g: &UniTrivalentGraph) -> Self {
        RawGraph { partner: g.partner.clone(), vertices: g.vertices.iter().map(|&v| Some(v)).collect() }
    }

    pub(crate) fn new_half_edge(&mut self) -> HalfEdge {
        self.partner.push(usize::MAX);
        self.partner.len() - 1
    }

    pub(crate) fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h]
    }

    pub(crate) fn pair(&mut self, a: HalfEdge, b: HalfEdge) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    pub(crate) fn add_vertex(&mut self, v: Vertex) -> VertexId {
        self.vertices.push(Some(v));
        self.vertices.len() - 1
    }

    pub(crate) fn set_vertex(&mut self, id: VertexId, v: Vertex) {
        self.vertices[id] = Some(v);
    }

    pub(crate) fn remove_vertex(&mut self, id: VertexId) {
        self.vertices[id] = None;
    }

    /// Inserts a trivalent vertex in the middle of the edge at `h`. Returns
    /// the new vertex and its third, still unpaired, half-edge.
    pub(crate) fn subdivide(&mut self, h: HalfEdge) -> (VertexId, HalfEdge) {
        let p = self.partner[h];
        let w0 = self.new_half_edge();
        let w1 = self.new_half_edge();
        let w2 = self.new_half_edge();
        self.pair(h, w0);
        self.pair(w1, p);
        let id = self.add_vertex(Vertex::Trivalent([w0, w1, w2]));
        (id, w2)
    }

    /// Renumbers half-edges and vertices densely. Returns the graph and the
    /// new id of every old vertex.
    pub(crate) fn finish(self) -> (UniTrivalentGraph, Vec<Option<VertexId>>) {
        let mut new_he = vec![usize::MAX; self.partner.len()];
        let mut vmap = vec![None; self.vertices.len()];
        let mut next = 0;
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (id, v) in self.vertices.iter().enumerate() {
            if let Some(v) = v {
                for &h in v.half_edges() {
                    new_he[h] = next;
                    next += 1;
                }
                vmap[id] = Some(vertices.len());
                vertices.push(match *v {
                    Vertex::Leg(h) => Vertex::Leg(new_he[h]),
                    Vertex::Trivalent([a, b, c]) => Vertex::Trivalent([new_he[a], new_he[b], new_he[c]]),
                });
            }
        }
        let mut partner = vec![usize::MAX; next];
        let mut vertex_of = vec![usize::MAX; next];
        for (old, &nh) in new_he.iter().enumerate() {
            if nh != usize::MAX {
                partner[nh] = new_he[self.partner[old]];
            }
        }
        for (id, v) in vertices.iter().enumerate() {
            for &h in v.half_edges() {
                vertex_of[h] = id;
            }
        }
        debug_assert!(partner.iter().all(|&p| p != usize::MAX));
        (UniTrivalentGraph { partner, vertex_of, vertices }, vmap)
    }
}

/// Small named diagrams used throughout tests and examples.
pub mod examples {
    use super::*;

    /// One edge with two legs.
    pub fn strut() -> UniTrivalentGraph {
        UniTrivalentGraph::new(vec![Vertex::Leg(0), Vertex::Leg(1)], &[(0, 1)]).unwrap()
    }

    /// One trivalent vertex with three legs.
    pub fn tripod() -> UniTrivalentGraph {
        UniTrivalentGraph::new(
            vec![Vertex::Trivalent([0, 1, 2]), Vertex::Leg(3), Vertex::Leg(4), Vertex::Leg(5)],
            &[(0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    /// Two trivalent vertices joined by a double edge, one leg on each.
    pub fn bubble() -> UniTrivalentGraph {
        UniTrivalentGraph::new(
            vec![Vertex::Trivalent([0, 1, 2]), Vertex::Trivalent([3, 4, 5]), Vertex::Leg(6), Vertex::Leg(7)],
            &[(0, 6), (3, 7), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    /// The wheel with `n >= 1` spokes: an `n`-cycle of trivalent vertices,
    /// one leg on each. Vertex `i` is oriented (spoke, previous, next).
    pub fn wheel(n: usize) -> UniTrivalentGraph {
        assert!(n >= 1);
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for i in 0..n {
            vertices.push(Vertex::Trivalent([3 * i, 3 * i + 1, 3 * i + 2]));
        }
        for i in 0..n {
            vertices.push(Vertex::Leg(3 * n + i));
            edges.push((3 * i, 3 * n + i));
            edges.push((3 * i + 2, 3 * ((i + 1) % n) + 1));
        }
        UniTrivalentGraph::new(vertices, &edges).unwrap()
    }

    /// Trivalent vertex with a self-loop and one leg.
    pub fn tadpole() -> UniTrivalentGraph {
        UniTrivalentGraph::new(vec![Vertex::Trivalent([0, 1, 2]), Vertex::Leg(3)], &[(0, 3), (1, 2)]).unwrap()
    }

    /// The tree with two trivalent vertices and four legs.
    pub fn h_tree() -> UniTrivalentGraph {
        UniTrivalentGraph::new(
            vec![
                Vertex::Trivalent([0, 1, 2]),
                Vertex::Trivalent([3, 4, 5]),
                Vertex::Leg(6),
                Vertex::Leg(7),
                Vertex::Leg(8),
                Vertex::Leg(9),
            ],
            &[(0, 3), (1, 6), (2, 7), (4, 8), (5, 9)],
        )
        .unwrap()
    }

    /// Closes `g` with its legs in the order given by `legs`.
    pub fn closed(g: UniTrivalentGraph, legs: &[VertexId]) -> ClosedDiagram {
        ClosedDiagram::new(g, legs.to_vec()).unwrap()
    }

    /// Closes `g` with its legs in increasing vertex order.
    pub fn closed_in_order(g: UniTrivalentGraph) -> ClosedDiagram {
        let legs = g.legs();
        ClosedDiagram::new(g, legs).unwrap()
    }

    /// The chord diagram given by a perfect matching of circle positions:
    /// `word[i]` names the chord at position `i`.
    pub fn chord_diagram(word: &[usize]) -> ClosedDiagram {
        let n = word.len();
        let vertices = (0..n).map(Vertex::Leg).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if word[i] == word[j] {
                    edges.push((i, j));
                }
            }
        }
        let g = UniTrivalentGraph::new(vertices, &edges).unwrap();
        ClosedDiagram::new(g, (0..n).collect()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn named_degrees() {
        let d = tripod().degrees();
        assert_eq!((d.v, d.b1, d.g, d.e), (2, 0, 2, 0));
        let d = bubble().degrees();
        assert_eq!((d.v, d.b1, d.g, d.e), (2, 1, 3, 0));
        let d = wheel(3).degrees();
        assert_eq!((d.v, d.b1, d.g, d.e), (3, 1, 4, 0));
        assert_eq!(d.loops, d.b1);
    }

    #[test]
    fn euler_degree_counts_internal_vertices() {
        // H-tree: both trivalent vertices carry legs
        assert_eq!(h_tree().degrees().e, 0);
        // a wheel with one spoke replaced by an internal tripod:
        // vertex 0 of the triangle gets a tripod hanging off it
        let g = UniTrivalentGraph::new(
            vec![
                Vertex::Trivalent([0, 1, 2]),
                Vertex::Trivalent([3, 4, 5]),
                Vertex::Trivalent([6, 7, 8]),
                Vertex::Trivalent([9, 10, 11]),
                Vertex::Leg(12),
                Vertex::Leg(13),
                Vertex::Leg(14),
                Vertex::Leg(15),
            ],
            &[(0, 9), (2, 4), (5, 7), (8, 1), (3, 12), (6, 13), (10, 14), (11, 15)],
        )
        .unwrap();
        assert_eq!(g.degrees().e, 1);
    }

    #[test]
    fn rejects_bad_structures() {
        assert_eq!(
            UniTrivalentGraph::new(vec![Vertex::Leg(0), Vertex::Leg(0)], &[(0, 0)]),
            Err(GraphError::DuplicateHalfEdge(0))
        );
        assert_eq!(
            UniTrivalentGraph::new(vec![Vertex::Leg(0), Vertex::Leg(1)], &[(0, 0)]),
            Err(GraphError::FixedPoint(0))
        );
        assert_eq!(UniTrivalentGraph::new(vec![Vertex::Leg(0), Vertex::Leg(1)], &[]), Err(GraphError::Unpaired(0)));
        assert_eq!(
            UniTrivalentGraph::new(vec![Vertex::Leg(0), Vertex::Leg(1)], &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicatePairing(1))
        );
        let two_struts = UniTrivalentGraph::new((0..4).map(Vertex::Leg).collect(), &[(0, 1), (2, 3)]);
        assert!(two_struts.is_ok());
        assert_eq!(
            UniTrivalentGraph::new_connected((0..4).map(Vertex::Leg).collect(), &[(0, 1), (2, 3)]),
            Err(GraphError::Disconnected)
        );
    }

    #[test]
    fn closed_diagram_validation() {
        assert_eq!(ClosedDiagram::new(tripod(), vec![1, 2]), Err(GraphError::BadCircle));
        assert_eq!(ClosedDiagram::new(tripod(), vec![1, 2, 2]), Err(GraphError::BadCircle));
        assert_eq!(ClosedDiagram::new(tripod(), vec![0, 1, 2]), Err(GraphError::BadCircle));
        assert!(ClosedDiagram::new(tripod(), vec![1, 3, 2]).is_ok());
        assert_eq!(ClosedDiagram::new(tadpole(), vec![1]).unwrap().degree(), 1);
    }

    #[test]
    fn separation_and_isolated_chords() {
        // parallel chords: separated, both chords isolated
        let p = chord_diagram(&[0, 0, 1, 1]);
        assert!(p.is_separated());
        assert!(p.has_isolated_chord());
        // crossed chords
        let x = chord_diagram(&[0, 1, 0, 1]);
        assert!(!x.is_separated());
        assert!(!x.has_isolated_chord());
        // a chord crossing one of two parallel... 0 1 0 2 1 2 ... is connected/overlapping
        let c = chord_diagram(&[0, 1, 0, 2, 1, 2]);
        assert!(!c.is_separated());
        // X followed by an isolated chord: separated
        let s = chord_diagram(&[0, 1, 0, 1, 2, 2]);
        assert!(s.is_separated());
        assert!(s.has_isolated_chord());
        // single chord: not separated (only one component) but isolated
        let one = chord_diagram(&[0, 0]);
        assert!(!one.is_separated());
        assert!(one.has_isolated_chord());
    }

    #[test]
    fn euler_identity_on_named_graphs() {
        for g in [tripod(), bubble(), wheel(3), wheel(4), h_tree(), tadpole()] {
            let t = g.trivalent_count() as i64;
            let u = g.leg_count() as i64;
            assert_eq!(t - u, 2 * (g.first_betti() as i64 - 1));
        }
    }

    #[test]
    fn reverse_circle_is_an_involution() {
        let d = closed(tripod(), &[1, 2, 3]);
        let r = d.reverse_circle();
        assert_eq!(r.circle(), &[3, 2, 1]);
        assert_eq!(r.reverse_circle(), d);
    }
}
