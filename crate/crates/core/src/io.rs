//! Edge-list and graph6 text formats.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("edge list declares {declared} edges but contains {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `n m` header followed by one `u v` pair per line. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let [n, m] = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let [u, v] = parse_pair(line, l)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount { declared: m, found: edges.len() });
    }
    Ok(Graph::from_edges(n, edges)?)
}

fn parse_pair(line: usize, l: &str) -> Result<[usize; 2], ParseError> {
    let mut it = l.split_whitespace().map(|t| {
        t.parse::<usize>().map_err(|e| ParseError::Syntax { line, msg: format!("{t:?}: {e}") })
    });
    let a = it.next().ok_or_else(|| ParseError::Syntax { line, msg: "expected two integers".into() })??;
    let b = it.next().ok_or_else(|| ParseError::Syntax { line, msg: "expected two integers".into() })??;
    if it.next().is_some() {
        return Err(ParseError::Syntax { line, msg: "trailing tokens".into() });
    }
    Ok([a, b])
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

const G6_HEADER: &str = ">>graph6<<";

/// Parses one graph6 line (optional `>>graph6<<` prefix).
pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let line = line.trim();
    let line = line.strip_prefix(G6_HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(ParseError::Graph6(format!("byte {b} outside 63..=126")));
    }
    let (n, rest) = decode_n(bytes)?;
    let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if rest.len() != need {
        return Err(ParseError::Graph6(format!("expected {need} data bytes for n={n}, found {}", rest.len())));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = rest[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

fn decode_n(bytes: &[u8]) -> Result<(usize, &[u8]), ParseError> {
    let short = |k: usize| ParseError::Graph6(format!("truncated size field ({k} bytes needed)"));
    let fold = |bs: &[u8]| bs.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    if bytes[0] != 126 {
        return Ok(((bytes[0] - 63) as usize, &bytes[1..]));
    }
    if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(short(8));
        }
        return Ok((fold(&bytes[2..8]), &bytes[8..]));
    }
    if bytes.len() < 4 {
        return Err(short(4));
    }
    Ok((fold(&bytes[1..4]), &bytes[4..]))
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    let push6 = |out: &mut Vec<u8>, x: usize, groups: usize| {
        for s in (0..groups).rev() {
            out.push(((x >> (6 * s)) & 63) as u8 + 63);
        }
    };
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        push6(&mut out, n, 3);
    } else {
        out.extend([126, 126]);
        push6(&mut out, n, 6);
    }
    let mut cur = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            cur <<= 1;
            if g.has_edge(i, j) {
                cur |= 1;
            }
            k += 1;
            if k % 6 == 0 {
                out.push(cur + 63);
                cur = 0;
            }
        }
    }
    if k % 6 != 0 {
        cur <<= 6 - k % 6;
        out.push(cur + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Edge list when the first meaningful line is two integers, graph6
/// otherwise.
pub fn parse_auto(text: &str) -> Result<Graph, ParseError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or(ParseError::Empty)?;
    let tokens: Vec<&str> = first.split_whitespace().collect();
    if tokens.len() == 2 && tokens.iter().all(|t| t.parse::<usize>().is_ok()) {
        parse_edge_list(text)
    } else {
        parse_graph6(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn known_graph6_strings() {
        // Reference strings from networkx.to_graph6_bytes.
        assert_eq!(write_graph6(&fixtures::complete(4)), "C~");
        assert_eq!(write_graph6(&fixtures::cycle(5)), "Dhc");
        assert_eq!(write_graph6(&fixtures::petersen()), "IheA@GUAo");
        assert_eq!(write_graph6(&Graph::empty(0)), "?");
        let k4 = parse_graph6(">>graph6<<C~").unwrap();
        assert_eq!(k4, fixtures::complete(4));
    }

    #[test]
    fn large_n_header() {
        let g = fixtures::cycle(100);
        let s = write_graph6(&g);
        assert_eq!(s.as_bytes()[0], 126);
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = fixtures::petersen();
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        assert!(matches!(parse_edge_list("3 1\n0 0\n"), Err(ParseError::Graph(GraphError::SelfLoop(0)))));
        assert!(matches!(parse_edge_list("3 2\n0 1\n"), Err(ParseError::EdgeCount { .. })));
        assert!(matches!(parse_edge_list("3 1\n0 x\n"), Err(ParseError::Syntax { line: 2, .. })));
    }

    #[test]
    fn autodetect() {
        assert_eq!(parse_auto("Dhc\n").unwrap(), fixtures::cycle(5));
        assert_eq!(parse_auto("# c\n2 1\n0 1\n").unwrap(), fixtures::path(2));
    }
}
