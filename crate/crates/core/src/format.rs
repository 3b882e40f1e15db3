//! Text encodings for graphs: a line-oriented edge list and graph6.
//!
//! Edge list:
//!
//! ```text
//! # comment
//! n m
//! u v        (m lines, 0 <= u, v < n, u != v)
//! ```
//!
//! Blank lines and lines starting with `#` are skipped anywhere.

use thiserror::Error;

use crate::bitset::MAX_VERTICES;
use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {kind}")]
    Line { line: usize, kind: LineError },
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("expected {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("graph6: {0}")]
    Graph6(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("malformed header, expected \"n m\"")]
    MalformedHeader,
    #[error("malformed edge, expected \"u v\"")]
    MalformedEdge,
    #[error("{0}")]
    Graph(#[from] GraphError),
}

fn line_err(line: usize, kind: impl Into<LineError>) -> ParseError {
    ParseError::Line {
        line,
        kind: kind.into(),
    }
}

fn two_numbers(s: &str) -> Option<(usize, usize)> {
    let mut it = s.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Parses the edge-list format. Line numbers in errors are 1-based.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = two_numbers(header).ok_or_else(|| line_err(header_line, LineError::MalformedHeader))?;
    let mut graph = Graph::empty(n).map_err(|e| line_err(header_line, e))?;

    let mut found = 0;
    for (line, body) in lines {
        let (u, v) = two_numbers(body).ok_or_else(|| line_err(line, LineError::MalformedEdge))?;
        graph.add_edge(u, v).map_err(|e| line_err(line, e))?;
        found += 1;
    }
    if found != m {
        return Err(ParseError::EdgeCountMismatch { expected: m, found });
    }
    Ok(graph)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Pairs `(i, j)`, `i < j`, in graph6 order: column by column of the upper
/// triangle. Bit `k` of an edge mask refers to the `k`-th pair.
pub fn edge_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut bytes = encode_order(n);
    let mut acc = 0u8;
    let mut filled = 0;
    for (i, j) in edge_pairs(n) {
        acc = acc << 1 | g.has_edge(i, j) as u8;
        filled += 1;
        if filled == 6 {
            bytes.push(acc + 63);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        bytes.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

fn encode_order(n: usize) -> Vec<u8> {
    if n <= 62 {
        vec![n as u8 + 63]
    } else {
        vec![
            126,
            (n >> 12 & 63) as u8 + 63,
            (n >> 6 & 63) as u8 + 63,
            (n & 63) as u8 + 63,
        ]
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(ParseError::Graph6(format!("invalid byte {b:#04x}")));
    }
    let (n, body) = match bytes {
        [] => return Err(ParseError::Graph6("empty input".into())),
        [126, 126, ..] => {
            return Err(ParseError::Graph6(format!(
                "order too large, the supported maximum is {MAX_VERTICES}"
            )))
        }
        [126, a, b, c, rest @ ..] => {
            let n = ((*a as usize - 63) << 12) | ((*b as usize - 63) << 6) | (*c as usize - 63);
            (n, rest)
        }
        [126, ..] => return Err(ParseError::Graph6("truncated order".into())),
        [first, rest @ ..] => (*first as usize - 63, rest),
    };
    if n > MAX_VERTICES {
        return Err(ParseError::Graph6(format!(
            "order {n} exceeds the supported maximum {MAX_VERTICES}"
        )));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(ParseError::Graph6(format!(
            "expected {expected} data bytes for order {n}, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(ParseError::Graph6("non-zero padding bits".into()));
    }
    let edges = edge_pairs(n).enumerate().filter(|&(k, _)| bit(k)).map(|(_, e)| e);
    Graph::from_edges(n, edges).map_err(|e| ParseError::Graph6(e.to_string()))
}

/// Edge list when the first meaningful line starts with a digit, graph6 otherwise.
pub fn parse_any(text: &str) -> Result<Graph, ParseError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with(|c: char| c.is_ascii_digit()) => parse_edge_list(text),
        Some(l) => parse_graph6(l),
        None => Err(ParseError::MissingHeader),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_p3() {
        let g = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g, Graph::path(3));
        let g = parse_edge_list("# a comment\n\n1 0\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn reports_bad_lines() {
        let e = parse_edge_list("2 1\n0 0").unwrap_err();
        assert_eq!(e, line_err(2, GraphError::SelfLoop(0)));
        assert_eq!(e.to_string(), "line 2: self-loop at vertex 0");

        let e = parse_edge_list("3 2\n0 1\n\n# x\n1 0").unwrap_err();
        assert_eq!(e, line_err(5, GraphError::DuplicateEdge(0, 1)));

        let e = parse_edge_list("3 1\n0 3").unwrap_err();
        assert_eq!(e, line_err(2, GraphError::VertexOutOfRange { vertex: 3, n: 3 }));

        assert_eq!(parse_edge_list("3\n").unwrap_err(), line_err(1, LineError::MalformedHeader));
        assert_eq!(parse_edge_list("3 x").unwrap_err(), line_err(1, LineError::MalformedHeader));
        assert_eq!(parse_edge_list("3 1\n0 1 2").unwrap_err(), line_err(2, LineError::MalformedEdge));
        assert_eq!(parse_edge_list("  \n# only comments").unwrap_err(), ParseError::MissingHeader);
        assert_eq!(
            parse_edge_list("3 2\n0 1").unwrap_err(),
            ParseError::EdgeCountMismatch { expected: 2, found: 1 }
        );
        assert_eq!(
            parse_edge_list("64 0").unwrap_err(),
            line_err(1, GraphError::TooManyVertices(64))
        );
    }

    #[test]
    fn graph6_known_vector() {
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(parse_graph6("DQc").unwrap(), g);
        assert_eq!(parse_graph6(">>graph6<<DQc\n").unwrap(), g);
    }

    #[test]
    fn graph6_small_orders() {
        assert_eq!(to_graph6(&Graph::empty(0).unwrap()), "?");
        assert_eq!(to_graph6(&Graph::empty(1).unwrap()), "@");
        assert_eq!(to_graph6(&Graph::complete(2)), "A_");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(parse_graph6("?").unwrap().vertex_count(), 0);
    }

    #[test]
    fn graph6_order_63_uses_long_form() {
        let g = Graph::path(63);
        let s = to_graph6(&g);
        assert!(s.starts_with("~??~"));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("D Q").is_err());
        assert!(parse_graph6("DQ").is_err());
        assert!(parse_graph6("A`").is_err());
        assert!(parse_graph6("~?@?").is_err());
    }

    #[test]
    fn autodetect() {
        assert_eq!(parse_any("3 2\n0 1\n1 2\n").unwrap(), Graph::path(3));
        assert_eq!(parse_any("# c\nA_\n").unwrap(), Graph::complete(2));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..=20).prop_flat_map(|n| {
            let pairs: Vec<_> = edge_pairs(n).collect();
            proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
                let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        }

        #[test]
        fn graph6_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }
}
