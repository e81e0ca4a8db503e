//! Text formats: DIMACS col and the plain edge-list format with optional
//! weight lines. Both are 1-based on the wire.

use super::{Graph, GraphError, VertexWeights};

/// Parses DIMACS col format: `c` comment lines, one `p edge n m` header,
/// then `e u v` lines.
pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut graph: Option<Graph> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(GraphError::Parse(format!(
                        "line {}: duplicate problem line",
                        lineno + 1
                    )));
                }
                let kind = tok.next().unwrap_or("");
                if kind != "edge" && kind != "col" {
                    return Err(GraphError::Parse(format!(
                        "line {}: expected `p edge n m`, got `{line}`",
                        lineno + 1
                    )));
                }
                let n = parse_field(tok.next(), lineno, "vertex count")?;
                let _m: usize = parse_field(tok.next(), lineno, "edge count")?;
                graph = Some(Graph::empty(n)?);
            }
            Some("e") => {
                let g = graph.as_mut().ok_or_else(|| {
                    GraphError::Parse(format!("line {}: edge before `p` line", lineno + 1))
                })?;
                let u: usize = parse_field(tok.next(), lineno, "endpoint")?;
                let v: usize = parse_field(tok.next(), lineno, "endpoint")?;
                let n = g.n();
                if u < 1 || u > n {
                    return Err(GraphError::VertexOutOfRange(u, n));
                }
                if v < 1 || v > n {
                    return Err(GraphError::VertexOutOfRange(v, n));
                }
                if u == v {
                    return Err(GraphError::SelfLoop(u));
                }
                g.add_edge(u - 1, v - 1);
            }
            Some(other) => {
                return Err(GraphError::Parse(format!(
                    "line {}: unrecognized record `{other}`",
                    lineno + 1
                )));
            }
            None => {}
        }
    }
    graph.ok_or_else(|| GraphError::Parse("missing `p edge n m` line".into()))
}

/// Parses the edge-list format: header `n m`, then `u v` lines, then optional
/// `w i value` lines. Missing weights default to 1.
pub fn parse_edge_list(text: &str) -> Result<(Graph, VertexWeights), GraphError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| GraphError::Parse("empty input".into()))?;
    let mut tok = header.split_whitespace();
    let n: usize = parse_field(tok.next(), lineno, "vertex count")?;
    let _m: usize = parse_field(tok.next(), lineno, "edge count")?;
    let mut g = Graph::empty(n)?;
    let mut w = vec![1.0; n];

    for (lineno, line) in lines {
        let mut tok = line.split_whitespace();
        let first = tok.next().unwrap();
        if first == "w" {
            let i: usize = parse_field(tok.next(), lineno, "vertex")?;
            if i < 1 || i > n {
                return Err(GraphError::VertexOutOfRange(i, n));
            }
            let value: f64 = tok
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("line {}: bad weight", lineno + 1)))?;
            w[i - 1] = value;
        } else {
            let u: usize = first
                .parse()
                .map_err(|_| GraphError::Parse(format!("line {}: bad endpoint", lineno + 1)))?;
            let v: usize = parse_field(tok.next(), lineno, "endpoint")?;
            if u < 1 || u > n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v < 1 || v > n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u - 1, v - 1);
        }
    }
    Ok((g, VertexWeights::new(w)?))
}

/// Detects the format (`p`/`c`/`e` records mean DIMACS) and parses.
pub fn parse_auto(text: &str) -> Result<(Graph, VertexWeights), GraphError> {
    let dimacs = text.lines().map(str::trim).any(|l| {
        l.starts_with("p ") || l.starts_with("e ") || l.starts_with("c ") || l == "c"
    });
    if dimacs {
        let g = parse_dimacs(text)?;
        let n = g.n();
        Ok((g, VertexWeights::uniform(n)))
    } else {
        parse_edge_list(text)
    }
}

/// Renders a graph (and non-unit weights) in the edge-list format.
pub fn format_edge_list(g: &Graph, w: Option<&VertexWeights>) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    if let Some(w) = w {
        for (i, &wi) in w.as_slice().iter().enumerate() {
            if wi != 1.0 {
                out.push_str(&format!("w {} {}\n", i + 1, wi));
            }
        }
    }
    out
}

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    lineno: usize,
    what: &str,
) -> Result<T, GraphError> {
    tok.and_then(|s| s.parse().ok())
        .ok_or_else(|| GraphError::Parse(format!("line {}: missing or bad {what}", lineno + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_path() {
        let g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn dimacs_single_vertex() {
        let g = parse_dimacs("p edge 1 0").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dimacs_missing_header() {
        assert!(matches!(parse_dimacs("e 1 2"), Err(GraphError::Parse(_))));
    }

    #[test]
    fn dimacs_vertex_over_n() {
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1 3"),
            Err(GraphError::VertexOutOfRange(3, 2))
        ));
    }

    #[test]
    fn edge_list_with_weights() {
        let (g, w) = parse_edge_list("3 2\n1 2\n2 3\nw 1 3\nw 3 3.5").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(w.as_slice(), &[3.0, 1.0, 3.5]);
    }

    #[test]
    fn round_trip() {
        let (g, w) = parse_edge_list("4 3\n1 2\n2 3\n3 4\nw 2 2.5").unwrap();
        let text = format_edge_list(&g, Some(&w));
        let (g2, w2) = parse_edge_list(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(w, w2);
    }

    #[test]
    fn auto_detect() {
        assert!(parse_auto("p edge 2 1\ne 1 2").is_ok());
        assert!(parse_auto("2 1\n1 2").is_ok());
    }
}
