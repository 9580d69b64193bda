//! Line-oriented text formats.
//!
//! Stream: `n <count>` then `+ u v` / `- u v` per line (u < v).
//! Graph: `n <count>` then `u v` per line.
//! Lines starting with `#` are comments; `# c <k>` additionally records the
//! declared arboricity so that round trips keep it.

use std::fmt::Write;

use super::{EdgeStream, StreamError, StreamEvent};
use crate::graph::{Edge, Graph, GraphError};

fn parse_err(line: usize, message: impl Into<String>) -> StreamError {
    StreamError::Parse {
        line,
        message: message.into(),
    }
}

struct Header {
    n: usize,
    c: Option<usize>,
}

/// Splits input into numbered content lines, collecting the header and the
/// `# c` annotation on the way.
/// Header plus the numbered content lines that follow it.
type Content<'a> = (Header, Vec<(usize, &'a str)>);

fn content_lines(text: &str) -> Result<Content<'_>, StreamError> {
    let mut n = None;
    let mut c = None;
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("c") {
                if let (Some(k), None) = (parts.next(), parts.next()) {
                    if let Ok(k) = k.parse() {
                        c = Some(k);
                    }
                }
            }
            continue;
        }
        if n.is_none() {
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("n"), Some(count), None) => {
                    n =
                        Some(count.parse().map_err(|_| {
                            parse_err(line_no, format!("bad vertex count {count:?}"))
                        })?);
                }
                _ => return Err(parse_err(line_no, "expected header `n <count>`")),
            }
            continue;
        }
        body.push((line_no, line));
    }
    let n = n.ok_or_else(|| parse_err(1, "missing header `n <count>`"))?;
    Ok((Header { n, c }, body))
}

fn parse_vertex(tok: Option<&str>, line: usize) -> Result<usize, StreamError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing vertex id"))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad vertex id {tok:?}")))
}

pub fn serialize_stream(s: &EdgeStream) -> String {
    let mut out = String::with_capacity(8 + s.len() * 12);
    writeln!(out, "n {}", s.n()).unwrap();
    if let Some(c) = s.c_declared() {
        writeln!(out, "# c {c}").unwrap();
    }
    for ev in s.events() {
        let sign = if ev.is_insert() { '+' } else { '-' };
        writeln!(out, "{sign} {} {}", ev.edge.u, ev.edge.v).unwrap();
    }
    out
}

pub fn parse_stream(text: &str) -> Result<EdgeStream, StreamError> {
    let (header, body) = content_lines(text)?;
    let mut events = Vec::with_capacity(body.len());
    let mut lines = Vec::with_capacity(body.len());
    for (line_no, line) in body {
        let mut parts = line.split_whitespace();
        let sign = parts.next();
        let a = parse_vertex(parts.next(), line_no)?;
        let b = parse_vertex(parts.next(), line_no)?;
        if parts.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens"));
        }
        let ev = match sign {
            Some("+") => StreamEvent::insert(a, b),
            Some("-") => StreamEvent::delete(a, b),
            _ => return Err(parse_err(line_no, "expected `+` or `-`")),
        };
        events.push(ev);
        lines.push(line_no);
    }
    let stream = EdgeStream::new(header.n, events).map_err(|e| {
        let index = match &e {
            StreamError::SelfLoop { index, .. }
            | StreamError::VertexOutOfRange { index, .. }
            | StreamError::DeleteOfAbsentEdge { index, .. }
            | StreamError::InsertOfLiveEdge { index, .. } => *index,
            _ => return e,
        };
        parse_err(lines[index], e.to_string())
    })?;
    Ok(stream.with_declared_arboricity(header.c))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(8 + g.m() * 10);
    writeln!(out, "n {}", g.n()).unwrap();
    if let Some(c) = g.c_declared() {
        writeln!(out, "# c {c}").unwrap();
    }
    for e in g.edges() {
        writeln!(out, "{} {}", e.u, e.v).unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, StreamError> {
    let (header, body) = content_lines(text)?;
    let mut pairs = Vec::with_capacity(body.len());
    for &(line_no, line) in &body {
        let mut parts = line.split_whitespace();
        let a = parse_vertex(parts.next(), line_no)?;
        let b = parse_vertex(parts.next(), line_no)?;
        if parts.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens"));
        }
        pairs.push((a, b));
    }
    let g = Graph::new(header.n, &pairs).map_err(|err| {
        let k = match err {
            GraphError::DuplicateEdge(a, b) => {
                let e = Edge::new(a, b);
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, &(x, y))| Edge::new(x, y) == e)
                    .nth(1)
                    .map(|(k, _)| k)
            }
            GraphError::SelfLoop(a) => pairs.iter().position(|&(x, y)| x == a && y == a),
            GraphError::VertexOutOfRange(a, b, _) => pairs.iter().position(|&p| p == (a, b)),
            _ => None,
        };
        parse_err(k.map_or(1, |k| body[k].0), err.to_string())
    })?;
    Ok(match header.c {
        Some(c) => g.with_declared_arboricity(c),
        None => g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{generate_dynamic_stream, generate_union_of_forests};
    use proptest::prelude::*;

    #[test]
    fn serialize_example() {
        let s = EdgeStream::new(2, vec![StreamEvent::insert(0, 1)]).unwrap();
        assert_eq!(serialize_stream(&s), "n 2\n+ 0 1\n");
    }

    #[test]
    fn delete_before_insert_is_a_parse_error() {
        assert_eq!(
            parse_stream("n 2\n- 0 1\n").unwrap_err(),
            parse_err(2, "event 0: delete of edge (0, 1) which is not live")
        );
    }

    #[test]
    fn comments_and_bad_lines() {
        let s = parse_stream("# hello\nn 3\n# mid\n+ 0 1\n+ 1 2\n").unwrap();
        assert_eq!(s.len(), 2);
        assert!(matches!(
            parse_stream("n 3\n* 0 1\n"),
            Err(StreamError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_stream("+ 0 1\n"),
            Err(StreamError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_stream("n 3\n+ 0 x\n"),
            Err(StreamError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn declared_arboricity_survives() {
        let g = generate_union_of_forests(20, 2, 4);
        let s = generate_dynamic_stream(&g, 0.5, 4).unwrap();
        assert_eq!(parse_stream(&serialize_stream(&s)).unwrap(), s);
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_format_errors_carry_lines() {
        assert!(matches!(
            parse_graph("n 3\n0 1\n0 1\n"),
            Err(StreamError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("n 2\n0 2\n"),
            Err(StreamError::Parse { line: 2, .. })
        ));
    }

    proptest! {
        #[test]
        fn stream_round_trip(n in 2usize..30, seed in any::<u64>(), frac in 0.0f64..=1.0) {
            let g = generate_union_of_forests(n, 1, seed);
            let s = generate_dynamic_stream(&g, frac, seed).unwrap();
            prop_assert_eq!(parse_stream(&serialize_stream(&s)).unwrap(), s);
        }
    }
}
