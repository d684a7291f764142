use crate::error::{Error, Result};

use super::{Cost, Graph};

/// Parses the edge-list format: a `nodes N` header followed by one `u v cost`
/// line per undirected edge. Blank lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut node_count = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match (node_count, words.as_slice()) {
            (None, ["nodes", n]) => {
                node_count = Some(
                    n.parse::<usize>()
                        .map_err(|_| Error::parse(no, format!("invalid node count {n:?}")))?,
                );
            }
            (None, _) => return Err(Error::parse(no, "expected `nodes N` header")),
            (Some(n), [u, v, c]) => {
                let field = |s: &str, what: &str| {
                    s.parse::<u64>()
                        .map_err(|_| Error::parse(no, format!("invalid {what} {s:?}")))
                };
                let (u, v, c) = (field(u, "node")?, field(v, "node")?, field(c, "cost")?);
                if u as usize >= n || v as usize >= n {
                    return Err(Error::parse(no, format!("node id out of range 0..{n}")));
                }
                edges.push((no, u as usize, v as usize, Cost(c)));
            }
            (Some(_), _) => return Err(Error::parse(no, "expected `u v cost`")),
        }
    }
    let n = node_count.ok_or_else(|| Error::parse(1, "missing `nodes N` header"))?;
    let mut seen = rustc_hash::FxHashSet::default();
    for &(no, u, v, _) in &edges {
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(no, "self loop or duplicate edge"));
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(_, u, v, c)| (u, v, c)))
}

pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = format!("nodes {}\n", graph.node_count());
    for (u, v, c) in graph.edges() {
        out.push_str(&format!("{u} {v} {}\n", c.value()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_edge_list("# line\nnodes 3\n0 1 1000\n\n1 2 500 # tail\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_cost(2, 1), Some(Cost(500)));
        assert!(g.grid().is_none());
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn reports_bad_lines() {
        let err = parse_edge_list("nodes 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_edge_list("nodes 2\n0 5 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_edge_list("nodes 2\n0 1 1\n1 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(parse_edge_list("0 1 1\n").is_err());
    }
}
