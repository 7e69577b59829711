use std::path::Path;

use crate::error::{Error, Result};

use super::{DegreeSequence, Graph};

/// Parses whitespace-separated degrees; lines whose first non-blank
/// character is `#` are comments.
pub fn parse_degrees(text: &str) -> Result<DegreeSequence> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let d = tok
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {}: `{tok}` is not a nonnegative integer", lineno + 1)))?;
            out.push(d);
        }
    }
    DegreeSequence::new(out)
}

/// Parses `n <count>` followed by 1-indexed `u v` lines. Blank lines and `#`
/// comments are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let mut h = header.split_whitespace();
    let n = match (h.next(), h.next(), h.next()) {
        (Some("n"), Some(c), None) => c
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("line {hl}: bad vertex count `{c}`")))?,
        _ => return Err(Error::Parse(format!("line {hl}: expected `n <count>`"))),
    };
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("line {ln}: expected `u v`")));
        }
        let mut ends = [0usize; 2];
        for (slot, tok) in ends.iter_mut().zip(&parts) {
            let x = tok
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {ln}: `{tok}` is not a vertex")))?;
            if x == 0 || x > n {
                return Err(Error::Parse(format!("line {ln}: vertex {x} outside 1..={n}")));
            }
            *slot = x - 1;
        }
        edges.push((ends[0], ends[1]));
    }
    Graph::from_edges(n, edges)
}

pub fn format_degrees(d: &DegreeSequence) -> String {
    let parts: Vec<String> = d.degrees().iter().map(|x| x.to_string()).collect();
    parts.join(" ") + "\n"
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_degrees(path: impl AsRef<Path>) -> Result<DegreeSequence> {
    parse_degrees(&read(path.as_ref())?)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&read(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_with_comments() {
        let d = parse_degrees("2 2\n2 2 # trailing text\n").unwrap_err();
        assert!(matches!(d, Error::Parse(_)));
        let d = parse_degrees("# four-cycle\n2 2\n\n  # indented comment\n2 2\n").unwrap();
        assert_eq!(d.degrees(), &[2, 2, 2, 2]);
        assert!(parse_degrees("1 -1").is_err());
        assert!(matches!(parse_degrees("# nothing\n"), Err(Error::EmptySequence)));
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::petersen();
        let back = parse_graph(&format_graph(&g)).unwrap();
        assert_eq!(g, back);
        assert!(parse_graph("n 3\n1 4\n").is_err());
        assert!(parse_graph("n 3\n1 1\n").is_err());
        assert!(parse_graph("3\n1 2\n").is_err());
        assert_eq!(parse_graph("n 2\n").unwrap().edge_count(), 0);
    }
}
