//! Edge-list format. The first non-comment line is `n m`, followed by `m`
//! lines `u v` with 1-indexed vertices. Lines starting with `#` or `c` are
//! comments; blank lines are ignored.

use std::fmt;

use dmlst_core::{Arc, DiGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    BadArity { expected: usize, found: usize },
    NotANumber(String),
    OutOfRange(usize),
    DuplicateArc(usize, usize),
    SelfLoop(usize),
    ArcCount { declared: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number; 0 when the error concerns the whole input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::MissingHeader => f.write_str("missing `n m` header"),
            ParseErrorKind::BadArity { expected, found } => write!(f, "expected {expected} fields, found {found}"),
            ParseErrorKind::NotANumber(s) => write!(f, "`{s}` is not a non-negative integer"),
            ParseErrorKind::OutOfRange(v) => write!(f, "vertex {v} out of range"),
            ParseErrorKind::DuplicateArc(u, v) => write!(f, "duplicate arc {u} {v}"),
            ParseErrorKind::SelfLoop(v) => write!(f, "self-loop at {v}"),
            ParseErrorKind::ArcCount { declared, found } => write!(f, "header declares {declared} arcs, found {found}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn fields(line: usize, text: &str, expected: usize) -> Result<Vec<usize>, ParseError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != expected {
        return Err(ParseError { line, kind: ParseErrorKind::BadArity { expected, found: parts.len() } });
    }
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| ParseError { line, kind: ParseErrorKind::NotANumber(p.to_string()) }))
        .collect()
}

pub fn parse_graph(text: &str) -> Result<DiGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('c'));
    let (hline, header) = lines.next().ok_or(ParseError { line: 0, kind: ParseErrorKind::MissingHeader })?;
    let nm = fields(hline, header, 2)?;
    let (n, m) = (nm[0], nm[1]);
    let mut g = DiGraph::new(n);
    let mut found = 0;
    for (line, text) in lines {
        let uv = fields(line, text, 2)?;
        let (u, v) = (uv[0], uv[1]);
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(ParseError { line, kind: ParseErrorKind::OutOfRange(x) });
            }
        }
        if u == v {
            return Err(ParseError { line, kind: ParseErrorKind::SelfLoop(u) });
        }
        if g.has_arc(VertexId::from(u - 1), VertexId::from(v - 1)) {
            return Err(ParseError { line, kind: ParseErrorKind::DuplicateArc(u, v) });
        }
        g.add_arc(Arc::new(u - 1, v - 1)).expect("validated");
        found += 1;
    }
    if found != m {
        return Err(ParseError { line: 0, kind: ParseErrorKind::ArcCount { declared: m, found } });
    }
    Ok(g)
}

/// Inverse of [`parse_graph`].
pub fn write_graph(g: &DiGraph) -> String {
    let mut out = format!("{} {}\n", g.capacity(), g.arc_count());
    for a in g.arcs() {
        out.push_str(&format!("{} {}\n", a.tail.index() + 1, a.head.index() + 1));
    }
    out
}
