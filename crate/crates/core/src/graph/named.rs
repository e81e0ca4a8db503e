//! Standard graph families used throughout the test corpus.

use super::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    /// K_n
    Complete,
    /// P_n
    Path,
    /// C_n
    Cycle,
    /// K_{1,k}: the parameter is the number of leaves.
    Star,
    /// The Petersen graph; the parameter is ignored.
    Petersen,
}

/// Builds the named family member. For `Star` the parameter counts leaves,
/// so the graph has `k + 1` vertices.
pub fn named_graph(family: GraphFamily, param: usize) -> Result<Graph, GraphError> {
    match family {
        GraphFamily::Complete => {
            let mut g = Graph::empty(param)?;
            for u in 0..param {
                for v in u + 1..param {
                    g.add_edge(u, v);
                }
            }
            Ok(g)
        }
        GraphFamily::Path => {
            let mut g = Graph::empty(param)?;
            for u in 1..param {
                g.add_edge(u - 1, u);
            }
            Ok(g)
        }
        GraphFamily::Cycle => {
            if param < 3 {
                return Err(GraphError::Parse(format!("cycle needs n >= 3, got {param}")));
            }
            let mut g = Graph::empty(param)?;
            for u in 0..param {
                g.add_edge(u, (u + 1) % param);
            }
            Ok(g)
        }
        GraphFamily::Star => {
            if param < 1 {
                return Err(GraphError::Parse("star needs at least one leaf".into()));
            }
            let mut g = Graph::empty(param + 1)?;
            for leaf in 1..=param {
                g.add_edge(0, leaf);
            }
            Ok(g)
        }
        GraphFamily::Petersen => {
            // Outer 5-cycle, inner pentagram, spokes.
            let mut g = Graph::empty(10)?;
            for i in 0..5 {
                g.add_edge(i, (i + 1) % 5);
                g.add_edge(5 + i, 5 + (i + 2) % 5);
                g.add_edge(i, 5 + i);
            }
            Ok(g)
        }
    }
}

/// Parses specs like `cycle:8`, `complete:3`, `star:4`, `petersen`.
pub fn parse_named_spec(spec: &str) -> Result<Graph, GraphError> {
    let (name, param) = match spec.split_once(':') {
        Some((name, p)) => {
            let param: usize = p
                .parse()
                .map_err(|_| GraphError::Parse(format!("bad family parameter `{p}`")))?;
            (name, param)
        }
        None => (spec, 0),
    };
    let family = match name {
        "complete" | "k" => GraphFamily::Complete,
        "path" | "p" => GraphFamily::Path,
        "cycle" | "c" => GraphFamily::Cycle,
        "star" => GraphFamily::Star,
        "petersen" => GraphFamily::Petersen,
        other => return Err(GraphError::UnknownFamily(other.to_string())),
    };
    if family != GraphFamily::Petersen && param == 0 {
        return Err(GraphError::Parse(format!("family `{name}` needs `{name}:N`")));
    }
    named_graph(family, param)
}
