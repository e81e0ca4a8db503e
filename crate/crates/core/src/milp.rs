//! Branch and bound over box polytopes with a designated set of binary
//! variables, plus the two users of it: the compact 0-1 program for the
//! independence numbers and the big-M reformulation of an LCP.

use crate::graph::Graph;
use crate::lcp::{LcpError, LcpInstance};
use crate::polytope::{maxis_polytope, frac_polytope, HPolytope, PolytopeKind};
use crate::simplex::{self, LinearProgram, LinearRow, LpStatus, Sense, SimplexError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Branch-and-bound scale limit for the graph ILPs.
pub const ILP_LIMIT: usize = 40;
/// A variable within this distance of an integer counts as integral.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MilpError {
    #[error("graph order {0} exceeds the branch-and-bound limit {ILP_LIMIT}")]
    TooLarge(usize),
    #[error("problem is infeasible")]
    Infeasible,
    #[error("relaxation unbounded; the box bounds are not valid bounds")]
    Unbounded,
    #[error("incumbent failed the exact feasibility re-check")]
    IncumbentRejected,
    #[error("bound vectors must have length {0}")]
    BadBounds(usize),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// Certified branch-and-bound outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IlpResult {
    pub value: f64,
    pub x: Vec<f64>,
    pub node_count: usize,
    /// Enumeration ran to completion, so the bound gap is closed.
    pub proof_gap: f64,
}

struct BnbInstance<'a> {
    poly: &'a HPolytope,
    objective: &'a [f64],
    sense: Sense,
    binary_vars: &'a [usize],
}

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Depth-first branch and bound: LP relaxation bound, branch on the most
/// fractional binary, explore the rounded side first. Deterministic node
/// order keeps node counts reproducible.
fn branch_and_bound(inst: &BnbInstance) -> Result<IlpResult, MilpError> {
    let dim = inst.poly.dim();
    let rows: Vec<LinearRow> = inst
        .poly
        .f
        .iter()
        .zip(&inst.poly.b)
        .map(|(coeffs, &rhs)| LinearRow::ge(coeffs.clone(), rhs))
        .collect();
    let better = |a: f64, b: f64| match inst.sense {
        Sense::Maximize => a > b,
        Sense::Minimize => a < b,
    };

    let mut stack = vec![Node { lower: vec![0.0; dim], upper: inst.poly.u.clone() }];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut node_count = 0usize;

    while let Some(node) = stack.pop() {
        node_count += 1;
        let lp = LinearProgram {
            objective: inst.objective.to_vec(),
            sense: inst.sense,
            rows: rows.clone(),
            lower: node.lower.clone(),
            upper: node.upper.clone(),
        };
        let sol = simplex::solve(&lp)?;
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(MilpError::Unbounded),
            LpStatus::Optimal => {}
        }
        if let Some((incumbent, _)) = &best {
            let slack = 1e-9 * (1.0 + incumbent.abs());
            let prunable = match inst.sense {
                Sense::Maximize => sol.value <= incumbent + slack,
                Sense::Minimize => sol.value >= incumbent - slack,
            };
            if prunable {
                continue;
            }
        }

        // Most fractional binary, ties to the lowest index.
        let mut branch_var: Option<(usize, f64)> = None;
        for &v in inst.binary_vars {
            let frac = (sol.x[v] - sol.x[v].round()).abs();
            if frac > INT_TOL {
                let score = frac.min(1.0 - frac);
                if branch_var.map_or(true, |(_, s)| score > s + 1e-12) {
                    branch_var = Some((v, score));
                }
            }
        }

        match branch_var {
            None => {
                // Integral candidate: fix the binaries and re-solve so the
                // continuous part is exact, then re-check feasibility.
                let mut lower = node.lower.clone();
                let mut upper = node.upper.clone();
                for &v in inst.binary_vars {
                    let bit = sol.x[v].round().clamp(0.0, 1.0);
                    lower[v] = bit;
                    upper[v] = bit;
                }
                let fixed = simplex::solve(&LinearProgram {
                    objective: inst.objective.to_vec(),
                    sense: inst.sense,
                    rows: rows.clone(),
                    lower,
                    upper,
                })?;
                if fixed.status != LpStatus::Optimal {
                    continue;
                }
                if best.as_ref().map_or(true, |(v, _)| better(fixed.value, *v)) {
                    best = Some((fixed.value, fixed.x));
                }
            }
            Some((v, _)) => {
                let nearest = sol.x[v].round().clamp(0.0, 1.0);
                let mut near = Node { lower: node.lower.clone(), upper: node.upper.clone() };
                near.lower[v] = nearest;
                near.upper[v] = nearest;
                let mut far = node;
                far.lower[v] = 1.0 - nearest;
                far.upper[v] = 1.0 - nearest;
                stack.push(far);
                stack.push(near);
            }
        }
    }

    let (value, x) = best.ok_or(MilpError::Infeasible)?;
    Ok(IlpResult { value, x, node_count, proof_gap: 0.0 })
}

/// Exact integer re-check of a binary vector against the polytope rows.
/// All row data of the graph ILPs is integral, so this removes any float
/// doubt from the incumbent.
fn binary_point_feasible_exact(poly: &HPolytope, mask: u64) -> bool {
    for (row, &rhs) in poly.f.iter().zip(&poly.b) {
        let mut lhs = 0i64;
        for (j, &a) in row.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                lhs += a.round() as i64;
            }
        }
        if lhs < rhs.round() as i64 {
            return false;
        }
    }
    true
}

fn graph_ilp(g: &Graph, poly: HPolytope, sense: Sense) -> Result<IlpResult, MilpError> {
    let n = g.n();
    if n > ILP_LIMIT {
        return Err(MilpError::TooLarge(n));
    }
    let objective = vec![1.0; n];
    let binaries: Vec<usize> = (0..n).collect();
    let mut result = branch_and_bound(&BnbInstance {
        poly: &poly,
        objective: &objective,
        sense,
        binary_vars: &binaries,
    })?;
    let mask = crate::vector_to_mask(&result.x, INT_TOL).ok_or(MilpError::IncumbentRejected)?;
    if !binary_point_feasible_exact(&poly, mask) {
        return Err(MilpError::IncumbentRejected);
    }
    result.value = result.value.round();
    result.x = crate::mask_to_vector(mask, n);
    Ok(result)
}

/// alpha(G) by maximizing over the binary lattice of the
/// maximal-independent-set polytope.
pub fn alpha_via_ilp(g: &Graph) -> Result<IlpResult, MilpError> {
    graph_ilp(g, maxis_polytope(g), Sense::Maximize)
}

/// beta(G) by minimizing over the same lattice.
pub fn beta_via_ilp(g: &Graph) -> Result<IlpResult, MilpError> {
    graph_ilp(g, maxis_polytope(g), Sense::Minimize)
}

/// Cross-check mode: alpha(G) through the classical edge formulation.
pub fn alpha_via_edge_ilp(g: &Graph) -> Result<IlpResult, MilpError> {
    graph_ilp(g, frac_polytope(g), Sense::Maximize)
}

/// Mixed binary model equivalent to an LCP with known bounds r, r' on x and
/// Mx+q: `0 <= x <= r z` and `0 <= Mx + q <= r'(e - z)` with z binary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MilpModel {
    /// Polytope over the stacked variable (x, z), dimension 2n.
    pub poly: HPolytope,
    /// LCP dimension.
    pub n: usize,
    pub r: Vec<f64>,
    pub r_prime: Vec<f64>,
}

/// Builds the big-M model. For graph instances pass r = e and r'_i = d_i;
/// those are exact bounds, and tight ones keep the relaxation strong.
pub fn milp_reformulate_lcp(
    inst: &LcpInstance,
    r: &[f64],
    r_prime: &[f64],
) -> Result<MilpModel, MilpError> {
    let n = inst.n();
    if r.len() != n || r_prime.len() != n {
        return Err(MilpError::BadBounds(n));
    }
    let dim = 2 * n;
    let mut f = Vec::with_capacity(3 * n);
    let mut b = Vec::with_capacity(3 * n);
    for i in 0..n {
        // r_i z_i - x_i >= 0
        let mut row = vec![0.0; dim];
        row[i] = -1.0;
        row[n + i] = r[i];
        f.push(row);
        b.push(0.0);
    }
    for i in 0..n {
        // (Mx)_i >= -q_i
        let mut row = vec![0.0; dim];
        row[..n].copy_from_slice(inst.row(i));
        f.push(row);
        b.push(-inst.q()[i]);
    }
    for i in 0..n {
        // -(Mx)_i - r'_i z_i >= q_i - r'_i
        let mut row: Vec<f64> = inst.row(i).iter().map(|v| -v).collect();
        row.resize(dim, 0.0);
        row[n + i] = -r_prime[i];
        f.push(row);
        b.push(inst.q()[i] - r_prime[i]);
    }
    let mut u = r.to_vec();
    u.extend(std::iter::repeat(1.0).take(n));
    Ok(MilpModel {
        poly: HPolytope { f, b, u, kind: PolytopeKind::Raw },
        n,
        r: r.to_vec(),
        r_prime: r_prime.to_vec(),
    })
}

/// Graph convenience: LCP(G) with the exact bounds r = e, r'_i = d_i.
pub fn milp_from_graph(g: &Graph) -> Result<MilpModel, MilpError> {
    let inst = crate::lcp::lcp_from_graph(g);
    let r = vec![1.0; g.n()];
    let r_prime: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
    milp_reformulate_lcp(&inst, &r, &r_prime)
}

/// Optimizes `c.x` over the projection of the model onto x; this equals the
/// optimum over SOL of the reformulated LCP whenever the bounds are valid.
pub fn lcp_optimize_via_milp(
    model: &MilpModel,
    c: &[f64],
    sense: Sense,
) -> Result<IlpResult, MilpError> {
    if c.len() != model.n {
        return Err(MilpError::BadBounds(model.n));
    }
    let mut objective = c.to_vec();
    objective.resize(2 * model.n, 0.0);
    let binaries: Vec<usize> = (model.n..2 * model.n).collect();
    let mut result = branch_and_bound(&BnbInstance {
        poly: &model.poly,
        objective: &objective,
        sense,
        binary_vars: &binaries,
    })?;
    result.x.truncate(model.n);
    Ok(result)
}

impl From<MilpError> for LcpError {
    fn from(e: MilpError) -> Self {
        match e {
            MilpError::Infeasible => LcpError::EmptySolutionSet,
            MilpError::Simplex(s) => LcpError::Simplex(s),
            other => LcpError::Dimension(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, GraphFamily};
    use crate::lcp::{check_solution, lcp_from_graph};
    use approx::assert_abs_diff_eq;

    #[test]
    fn alpha_on_known_graphs() {
        let c8 = named_graph(GraphFamily::Cycle, 8).unwrap();
        assert_eq!(alpha_via_ilp(&c8).unwrap().value, 4.0);

        let pet = named_graph(GraphFamily::Petersen, 0).unwrap();
        assert_eq!(alpha_via_ilp(&pet).unwrap().value, 4.0);

        let k1 = named_graph(GraphFamily::Complete, 1).unwrap();
        assert_eq!(alpha_via_ilp(&k1).unwrap().value, 1.0);
    }

    #[test]
    fn beta_on_known_graphs() {
        let c8 = named_graph(GraphFamily::Cycle, 8).unwrap();
        assert_eq!(beta_via_ilp(&c8).unwrap().value, 3.0);

        let star = named_graph(GraphFamily::Star, 4).unwrap();
        assert_eq!(beta_via_ilp(&star).unwrap().value, 1.0);

        let p4 = named_graph(GraphFamily::Path, 4).unwrap();
        assert_eq!(beta_via_ilp(&p4).unwrap().value, 2.0);
    }

    #[test]
    fn edge_formulation_agrees() {
        for (family, n) in [(GraphFamily::Cycle, 7), (GraphFamily::Path, 6)] {
            let g = named_graph(family, n).unwrap();
            assert_eq!(
                alpha_via_ilp(&g).unwrap().value,
                alpha_via_edge_ilp(&g).unwrap().value
            );
        }
    }

    #[test]
    fn incumbent_is_maximal_independent_set() {
        let c8 = named_graph(GraphFamily::Cycle, 8).unwrap();
        let result = alpha_via_ilp(&c8).unwrap();
        let mask = crate::vector_to_mask(&result.x, 1e-9).unwrap();
        assert!(crate::oracle::is_maximal_independent(&c8, mask));
    }

    #[test]
    fn milp_matches_enumeration() {
        let c8 = named_graph(GraphFamily::Cycle, 8).unwrap();
        let model = milp_from_graph(&c8).unwrap();
        let e8 = vec![1.0; 8];
        let min = lcp_optimize_via_milp(&model, &e8, Sense::Minimize).unwrap();
        assert_abs_diff_eq!(min.value, 8.0 / 3.0, epsilon = 1e-6);

        let p3 = named_graph(GraphFamily::Path, 3).unwrap();
        let model = milp_from_graph(&p3).unwrap();
        let e3 = vec![1.0; 3];
        let max = lcp_optimize_via_milp(&model, &e3, Sense::Maximize).unwrap();
        assert_abs_diff_eq!(max.value, 2.0, epsilon = 1e-6);

        let k3 = named_graph(GraphFamily::Complete, 3).unwrap();
        let model = milp_from_graph(&k3).unwrap();
        let max = lcp_optimize_via_milp(&model, &vec![1.0; 3], Sense::Maximize).unwrap();
        assert_abs_diff_eq!(max.value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn milp_witness_solves_lcp() {
        let c5 = named_graph(GraphFamily::Cycle, 5).unwrap();
        let inst = lcp_from_graph(&c5);
        let model = milp_from_graph(&c5).unwrap();
        let min = lcp_optimize_via_milp(&model, &vec![1.0; 5], Sense::Minimize).unwrap();
        assert!(check_solution(&inst, &min.x, 1e-6).passed());
        assert_abs_diff_eq!(min.value, 5.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn size_limit() {
        let g = crate::graph::Graph::empty(41).unwrap();
        assert!(matches!(alpha_via_ilp(&g), Err(MilpError::TooLarge(41))));
    }
}
