//! Edge-list text format.
//!
//! One `u v` pair per line with 0-based ids. Blank lines and `#` comments are
//! ignored, except that a `# nodes: N` comment fixes the node count so that
//! trailing isolated nodes survive a round trip. Without it the node count is
//! one past the largest id seen.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("nodes:") {
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_error(lineno, format!("bad node count {:?}", rest.trim())))?;
                declared = Some((n, lineno));
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let id = |tok: Option<&str>| -> Result<usize> {
            let tok = tok.ok_or_else(|| parse_error(lineno, "expected two node ids"))?;
            tok.parse::<usize>()
                .map_err(|_| parse_error(lineno, format!("not a node id: {tok:?}")))
        };
        let u = id(tokens.next())?;
        let v = id(tokens.next())?;
        if tokens.next().is_some() {
            return Err(parse_error(lineno, "trailing tokens after edge"));
        }
        if u == v {
            return Err(parse_error(lineno, format!("self-loop at node {u}")));
        }
        if let Some((n, _)) = declared {
            if u >= n || v >= n {
                return Err(parse_error(lineno, format!("node id out of range for {n} nodes")));
            }
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_error(lineno, format!("duplicate edge ({u}, {v})")));
        }
        pairs.push((u, v, lineno));
    }
    let max_id = pairs.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some((n, _)) => {
            if let Some(&(_, _, lineno)) = pairs.iter().find(|&&(u, v, _)| u >= n || v >= n) {
                return Err(parse_error(lineno, format!("node id out of range for {n} nodes")));
            }
            n
        }
        None => max_id,
    };
    Graph::from_edges(n, pairs.into_iter().map(|(u, v, _)| (u, v)))
}

pub fn write_edge_list<W: Write>(g: &Graph, writer: W) -> Result<()> {
    write_edge_list_with_header(g, writer, &[])
}

/// Writes `header` lines as `#` comments ahead of the node count and edges.
pub fn write_edge_list_with_header<W: Write>(g: &Graph, mut writer: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(writer, "# {line}")?;
    }
    writeln!(writer, "# nodes: {}", g.node_count())?;
    writeln!(writer, "# edges: {}", g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(writer, "{u} {v}")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::clique;

    fn read(s: &str) -> Result<Graph> {
        read_edge_list(s.as_bytes())
    }

    #[test]
    fn path_graph() {
        let g = read("0 1\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn round_trip_keeps_isolated_nodes() {
        let k3 = clique(3).unwrap().to_graph();
        let mut buf = Vec::new();
        write_edge_list(&k3, &mut buf).unwrap();
        assert_eq!(read_edge_list(buf.as_slice()).unwrap(), k3);

        let empty = Graph::empty(7);
        let mut buf = Vec::new();
        write_edge_list(&empty, &mut buf).unwrap();
        assert_eq!(read_edge_list(buf.as_slice()).unwrap(), empty);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = read("# hello\n\n  0 1  \n# more\n2\t1\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match read("0 0\n") {
            Err(Error::Parse { line: 1, msg }) => assert!(msg.contains("self-loop")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read("0 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read("0 1\n\n1 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read("# nodes: 2\n0 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read("0 1\n# nodes: 2\n0 5\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read("0 4\n# nodes: 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read("0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read("-1 2\n"), Err(Error::Parse { line: 1, .. })));
    }
}
