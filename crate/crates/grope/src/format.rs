//! Text exchange formats.
//!
//! A diagram is written one line per vertex and one line per edge:
//!
//! ```text
//! v0: h0 h1 h2
//! v1: h3
//! e: h0 h3
//! circle: h3 h5 h7
//! ```
//!
//! Trivalent vertices list their half-edges in cyclic order. A `circle`
//! line (closed diagrams only) lists the half-edges of the legs in the
//! order they sit on the oriented circle. Lines starting with `#` are
//! comments; in a stream, records are separated by blank lines.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use grope_core::graph::HalfEdge;
use grope_core::linalg::SparseIntMatrix;
use grope_core::relations::{RelationRow, Tag};
use grope_core::{CanonicalKey, ClosedDiagram, GraphError, UniTrivalentGraph, Vertex};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: half-edge h{half_edge} is used twice")]
    DuplicateHalfEdge { line: usize, half_edge: u64 },
    #[error("line {line}: half-edge h{half_edge} does not belong to any vertex")]
    UnknownHalfEdge { line: usize, half_edge: u64 },
    #[error("line {line}: vertex v{id} is defined twice")]
    DuplicateVertex { line: usize, id: u64 },
    #[error("line {line}: more than one circle line")]
    DuplicateCircle { line: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A parsed record: an open graph, or a closed diagram when a circle
/// line was present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedDiagram {
    Open(UniTrivalentGraph),
    Closed(ClosedDiagram),
}

pub fn write_graph(g: &UniTrivalentGraph) -> String {
    let mut s = String::new();
    write_body(&mut s, g);
    s
}

pub fn write_closed(d: &ClosedDiagram) -> String {
    let g = d.dashed();
    let mut s = String::new();
    write_body(&mut s, g);
    s.push_str("circle:");
    for &v in d.circle() {
        let _ = write!(s, " h{}", g.vertex(v).half_edges()[0]);
    }
    s.push('\n');
    s
}

fn write_body(s: &mut String, g: &UniTrivalentGraph) {
    for (i, v) in g.vertices().iter().enumerate() {
        let _ = write!(s, "v{i}:");
        for h in v.half_edges() {
            let _ = write!(s, " h{h}");
        }
        s.push('\n');
    }
    for (a, b) in g.edges() {
        let _ = writeln!(s, "e: h{a} h{b}");
    }
}

fn half_edge(tok: &str, line: usize) -> Result<u64, FormatError> {
    tok.strip_prefix('h')
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FormatError::Syntax { line, message: format!("expected a half-edge like h3, found {tok:?}") })
}

/// Parses one record. `first_line` only offsets the line numbers in
/// errors.
pub fn parse_diagram_at(text: &str, first_line: usize) -> Result<ParsedDiagram, FormatError> {
    let mut ids: HashMap<u64, HalfEdge> = HashMap::new();
    let mut vertex_ids: BTreeMap<u64, ()> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut edges: Vec<(u64, u64, usize)> = Vec::new();
    let mut circle: Option<(Vec<u64>, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = first_line + i;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (head, rest) =
            l.split_once(':').ok_or_else(|| FormatError::Syntax { line, message: format!("missing ':' in {l:?}") })?;
        let hs = rest.split_whitespace().map(|t| half_edge(t, line)).collect::<Result<Vec<_>, _>>()?;
        match head.trim() {
            "e" => {
                if hs.len() != 2 {
                    return Err(FormatError::Syntax { line, message: "an edge joins exactly two half-edges".into() });
                }
                edges.push((hs[0], hs[1], line));
            }
            "circle" => {
                if circle.is_some() {
                    return Err(FormatError::DuplicateCircle { line });
                }
                circle = Some((hs, line));
            }
            h => {
                let id: u64 = h
                    .strip_prefix('v')
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| FormatError::Syntax { line, message: format!("unknown line kind {h:?}") })?;
                if vertex_ids.insert(id, ()).is_some() {
                    return Err(FormatError::DuplicateVertex { line, id });
                }
                let mut local = Vec::with_capacity(3);
                for &x in &hs {
                    let next = ids.len();
                    if ids.insert(x, next).is_some() {
                        return Err(FormatError::DuplicateHalfEdge { line, half_edge: x });
                    }
                    local.push(next);
                }
                vertices.push(match local[..] {
                    [a] => Vertex::Leg(a),
                    [a, b, c] => Vertex::Trivalent([a, b, c]),
                    _ => {
                        return Err(FormatError::Syntax {
                            line,
                            message: format!("a vertex has 1 or 3 half-edges, found {}", local.len()),
                        })
                    }
                });
            }
        }
    }
    let mut paired = vec![false; ids.len()];
    let mut pairs = Vec::with_capacity(edges.len());
    for (a, b, line) in edges {
        let mut pair = [0; 2];
        for (slot, x) in pair.iter_mut().zip([a, b]) {
            let h = *ids.get(&x).ok_or(FormatError::UnknownHalfEdge { line, half_edge: x })?;
            if paired[h] {
                return Err(FormatError::DuplicateHalfEdge { line, half_edge: x });
            }
            paired[h] = true;
            *slot = h;
        }
        pairs.push((pair[0], pair[1]));
    }
    let g = UniTrivalentGraph::new(vertices, &pairs)?;
    match circle {
        None => Ok(ParsedDiagram::Open(g)),
        Some((hs, line)) => {
            let mut order = Vec::with_capacity(hs.len());
            for x in hs {
                let h = *ids.get(&x).ok_or(FormatError::UnknownHalfEdge { line, half_edge: x })?;
                order.push(g.vertex_of(h));
            }
            Ok(ParsedDiagram::Closed(ClosedDiagram::new(g, order)?))
        }
    }
}

pub fn parse_diagram(text: &str) -> Result<ParsedDiagram, FormatError> {
    parse_diagram_at(text, 1)
}

/// Splits a stream on blank lines and parses every record.
pub fn parse_stream(text: &str) -> Result<Vec<ParsedDiagram>, FormatError> {
    let mut out = Vec::new();
    let mut start = None;
    let mut buf = String::new();
    for (i, l) in text.lines().enumerate() {
        if l.trim().is_empty() {
            if let Some(s) = start.take() {
                out.push(parse_diagram_at(&buf, s)?);
                buf.clear();
            }
        } else {
            start.get_or_insert(i + 1);
            buf.push_str(l);
            buf.push('\n');
        }
    }
    if let Some(s) = start {
        out.push(parse_diagram_at(&buf, s)?);
    }
    Ok(out)
}

/// Relation rows as `row_id,tag,source,site,key,coeff`, one line per
/// nonzero entry, with the canonical key of the column in hex.
pub fn relation_triplets(rows: &[RelationRow], keys: &[CanonicalKey]) -> String {
    let mut s = String::from("row_id,tag,source,site,key,coeff\n");
    for (i, r) in rows.iter().enumerate() {
        for &(c, x) in &r.entries {
            let _ = writeln!(s, "{i},{},{},{},{},{x}", r.tag.name(), r.source, r.site, keys[c].to_hex());
        }
    }
    s
}

/// Inverse of [`relation_triplets`]; keys not in `keys` are an error.
pub fn parse_relation_triplets(text: &str, keys: &[CanonicalKey]) -> Result<Vec<RelationRow>, FormatError> {
    let index: HashMap<String, usize> = keys.iter().enumerate().map(|(i, k)| (k.to_hex(), i)).collect();
    let mut rows: BTreeMap<usize, RelationRow> = BTreeMap::new();
    for (i, l) in text.lines().enumerate().skip(1) {
        let line = i + 1;
        if l.trim().is_empty() {
            continue;
        }
        let bad = |m: &str| FormatError::Syntax { line, message: m.into() };
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != 6 {
            return Err(bad("expected 6 fields"));
        }
        let id: usize = f[0].parse().map_err(|_| bad("bad row id"))?;
        let tag = Tag::from_name(f[1]).ok_or_else(|| bad("unknown tag"))?;
        let source: usize = f[2].parse().map_err(|_| bad("bad source"))?;
        let site: usize = f[3].parse().map_err(|_| bad("bad site"))?;
        let col = *index.get(f[4]).ok_or_else(|| bad("key is not in the basis"))?;
        let coeff: i64 = f[5].parse().map_err(|_| bad("bad coefficient"))?;
        let row = rows.entry(id).or_insert(RelationRow { entries: Vec::new(), tag, source, site });
        row.entries.push((col, coeff));
    }
    Ok(rows
        .into_values()
        .map(|mut r| {
            r.entries.sort_unstable();
            r
        })
        .collect())
}

/// Matrix as `row,col,value` triplets after a `rows,cols` header line.
pub fn matrix_triplets(m: &SparseIntMatrix) -> String {
    let mut s = format!("{},{}\n", m.rows(), m.cols());
    for (r, c, x) in m.triplets() {
        let _ = writeln!(s, "{r},{c},{x}");
    }
    s
}

pub fn parse_matrix_triplets(text: &str) -> Result<SparseIntMatrix, FormatError> {
    let mut lines = text.lines().enumerate();
    let bad = |line: usize, m: &str| FormatError::Syntax { line, message: m.into() };
    let (_, head) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
    let (r, c) = head.split_once(',').ok_or_else(|| bad(1, "expected rows,cols"))?;
    let rows: usize = r.trim().parse().map_err(|_| bad(1, "bad row count"))?;
    let cols: usize = c.trim().parse().map_err(|_| bad(1, "bad column count"))?;
    let mut trips = Vec::new();
    for (i, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(bad(i + 1, "expected row,col,value"));
        }
        let rr: usize = f[0].parse().map_err(|_| bad(i + 1, "bad row"))?;
        let cc: usize = f[1].parse().map_err(|_| bad(i + 1, "bad column"))?;
        let x: BigInt = f[2].parse().map_err(|_| bad(i + 1, "bad value"))?;
        trips.push((rr, cc, x));
    }
    SparseIntMatrix::from_triplets(rows, cols, trips).map_err(|e| bad(0, &e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use grope_core::canon::Canonical;
    use grope_core::graph::examples;

    #[test]
    fn graph_round_trip() {
        for g in [examples::tripod(), examples::bubble(), examples::wheel(4), examples::tadpole()] {
            let text = write_graph(&g);
            match parse_diagram(&text).unwrap() {
                ParsedDiagram::Open(h) => assert_eq!(h.canonical(), g.canonical()),
                ParsedDiagram::Closed(_) => panic!("no circle line"),
            }
        }
    }

    #[test]
    fn closed_round_trip() {
        let d = examples::chord_diagram(&[0, 1, 0, 1]);
        let text = write_closed(&d);
        assert!(text.contains("circle:"));
        assert_eq!(parse_diagram(&text).unwrap(), ParsedDiagram::Closed(d));
    }

    #[test]
    fn rejects_reused_half_edges() {
        let e = parse_diagram("v0: h0\nv1: h0\ne: h0 h1").unwrap_err();
        assert_eq!(e, FormatError::DuplicateHalfEdge { line: 2, half_edge: 0 });
        let e = parse_diagram("v0: h0\nv1: h1\ne: h0 h1\ne: h1 h0").unwrap_err();
        assert_eq!(e, FormatError::DuplicateHalfEdge { line: 4, half_edge: 1 });
        assert!(matches!(parse_diagram("v0: h0 h1"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_diagram("v0: h0\nv1: h1"), Err(FormatError::Graph(GraphError::Unpaired(_)))));
    }

    #[test]
    fn arbitrary_labels_are_accepted() {
        let text = "# tripod\nv7: h10 h20 h30\nv1: h11\nv2: h21\nv3: h31\ne: h10 h11\ne: h21 h20\ne: h30 h31\n";
        let ParsedDiagram::Open(g) = parse_diagram(text).unwrap() else { panic!() };
        assert_eq!(g.canonical().key, examples::tripod().canonical().key);
    }

    #[test]
    fn streams_split_on_blank_lines() {
        let s = format!("{}\n{}\n\n", write_graph(&examples::strut()), write_graph(&examples::tripod()));
        assert_eq!(parse_stream(&s).unwrap().len(), 2);
        let e = parse_stream("v0: h0\nv1: h1\ne: h0 h1\n\nv0: h0 h1\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 5, .. }));
    }

    #[test]
    fn matrix_round_trip() {
        let m = SparseIntMatrix::from_dense(&[vec![2i64, 0, -1], vec![0, 0, 4]]);
        assert_eq!(parse_matrix_triplets(&matrix_triplets(&m)).unwrap(), m);
    }
}
