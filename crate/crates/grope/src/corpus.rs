//! Knot corpora: one knot per line as `name: <gauss tokens>`.

use grope_core::knot::{arf, c2, v3, GaussError};
use grope_core::{parse_gauss, GaussCode};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: expected `name: tokens`")]
    MissingName { line: usize },
    #[error("line {line}: {source}")]
    Code { line: usize, source: GaussError },
}

impl CorpusError {
    pub fn line(&self) -> usize {
        match self {
            CorpusError::MissingName { line } | CorpusError::Code { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub line: usize,
    pub code: GaussCode,
}

/// Blank lines and lines starting with `#` are skipped. An empty token
/// list is the unknot.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (name, tokens) = l.split_once(':').ok_or(CorpusError::MissingName { line })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(CorpusError::MissingName { line });
        }
        let code = parse_gauss(tokens).map_err(|source| CorpusError::Code { line, source })?;
        out.push(CorpusEntry { name: name.into(), line, code });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRow {
    pub name: String,
    pub c2: i64,
    pub v3: i64,
    pub arf: u8,
}

/// Invariants of every entry, in corpus order.
pub fn invariants(entries: &[CorpusEntry]) -> Vec<KnotRow> {
    entries
        .par_iter()
        .map(|e| KnotRow { name: e.name.clone(), c2: c2(&e.code), v3: v3(&e.code), arf: arf(&e.code) })
        .collect()
}

pub fn to_csv(rows: &[KnotRow]) -> String {
    let mut s = String::from("name,c2,v3,arf\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", r.name, r.c2, r.v3, r.arf));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_evaluates() {
        let text = "# sample\nunknot:\ntrefoil: O1+ U2+ O3+ U1+ O2+ U3+\n\nfig8: O1- U2+ O3+ U1- O4- U3+ O2+ U4-\n";
        let e = parse_corpus(text).unwrap();
        assert_eq!(e.iter().map(|x| x.line).collect::<Vec<_>>(), [2, 3, 5]);
        let csv = to_csv(&invariants(&e));
        assert_eq!(csv, "name,c2,v3,arf\nunknot,0,0,0\ntrefoil,1,1,1\nfig8,-1,0,1\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_corpus("a: O1+ U1+\nb O1+\n").unwrap_err();
        assert_eq!(e, CorpusError::MissingName { line: 2 });
        let e = parse_corpus("a: O1+ U1-\n").unwrap_err();
        assert!(matches!(e, CorpusError::Code { line: 1, source: GaussError::Sign { label: 1 } }));
        assert_eq!(parse_corpus("\n\nx: Q1+\n").unwrap_err().line(), 3);
    }
}
