//! Half-space polytopes `{x : Fx >= b, 0 <= x <= u}` and the two stable-set
//! relaxations built from a graph: the maximal-independent-set polytope and
//! the edge relaxation.

use crate::graph::Graph;
use crate::simplex::{self, LinearProgram, LinearRow, LpStatus, Sense, SimplexError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeKind {
    Maxis,
    Frac,
    Raw,
}

/// Constraint rows are `F x >= b`; the box `0 <= x <= u` is kept separate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HPolytope {
    #[serde(rename = "F")]
    pub f: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub u: Vec<f64>,
    pub kind: PolytopeKind,
}

impl HPolytope {
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// Whether `x` satisfies every row and the box within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let box_ok = x
            .iter()
            .zip(&self.u)
            .all(|(&xi, &ui)| xi >= -tol && xi <= ui + tol);
        box_ok
            && self.f.iter().zip(&self.b).all(|(row, &bi)| {
                let lhs: f64 = row.iter().zip(x).map(|(a, x)| a * x).sum();
                lhs >= bi - tol
            })
    }

    /// Binary points of the polytope (exact integer row checks).
    pub fn binary_points(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        assert!(n <= 25, "binary scan limited to n <= 25");
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            let x: Vec<f64> = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            if self.contains(&x, 1e-9) {
                out.push(x);
            }
        }
        out
    }
}

/// The polytope whose binary points are exactly the indicators of maximal
/// independent sets: `0 <= x <= e`, `(A+I)x - e >= 0`, and per vertex
/// `(A+I)x - e <= (D-I)(e-x)`, the latter rewritten as `-(d_i x_i + sum of
/// neighbor entries) >= -d_i`.
pub fn maxis_polytope(g: &Graph) -> HPolytope {
    let n = g.n();
    let mut f = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        for j in 0..n {
            if g.has_edge(i, j) {
                row[j] = 1.0;
            }
        }
        f.push(row);
        b.push(1.0);
    }
    for i in 0..n {
        let d = g.degree(i) as f64;
        let mut row = vec![0.0; n];
        row[i] = -d;
        for j in 0..n {
            if g.has_edge(i, j) {
                row[j] = -1.0;
            }
        }
        f.push(row);
        b.push(-d);
    }
    HPolytope { f, b, u: vec![1.0; n], kind: PolytopeKind::Maxis }
}

/// The edge relaxation of the stable set polytope:
/// `0 <= x <= e`, `x_i + x_j <= 1` per edge.
pub fn frac_polytope(g: &Graph) -> HPolytope {
    let n = g.n();
    let mut f = Vec::new();
    let mut b = Vec::new();
    for (i, j) in g.edges() {
        let mut row = vec![0.0; n];
        row[i] = -1.0;
        row[j] = -1.0;
        f.push(row);
        b.push(-1.0);
    }
    HPolytope { f, b, u: vec![1.0; n], kind: PolytopeKind::Frac }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpResultStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of an LP over a polytope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpResultStatus,
    pub value: f64,
    pub x: Vec<f64>,
    /// Dual objective; present when the primal is optimal.
    pub dual_value: Option<f64>,
}

/// Optimizes `objective` over the polytope, with optional extra equality
/// rows. Infeasible and unbounded are statuses, not failures.
pub fn lp_solve(
    objective: &[f64],
    sense: Sense,
    poly: &HPolytope,
    extra_equalities: &[(Vec<f64>, f64)],
) -> Result<LpResult, SimplexError> {
    let mut rows: Vec<LinearRow> = poly
        .f
        .iter()
        .zip(&poly.b)
        .map(|(coeffs, &rhs)| LinearRow::ge(coeffs.clone(), rhs))
        .collect();
    for (coeffs, rhs) in extra_equalities {
        rows.push(LinearRow::eq(coeffs.clone(), *rhs));
    }
    let lp = LinearProgram {
        objective: objective.to_vec(),
        sense,
        rows,
        lower: vec![0.0; poly.dim()],
        upper: poly.u.clone(),
    };
    let sol = simplex::solve(&lp)?;
    let status = match sol.status {
        LpStatus::Optimal => LpResultStatus::Optimal,
        LpStatus::Infeasible => LpResultStatus::Infeasible,
        LpStatus::Unbounded => LpResultStatus::Unbounded,
    };
    debug_assert!(
        status != LpResultStatus::Optimal || poly.contains(&sol.x, 1e-7),
        "optimal point violates the polytope"
    );
    Ok(LpResult {
        status,
        value: sol.value,
        x: sol.x,
        dual_value: (status == LpResultStatus::Optimal).then_some(sol.dual_value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{labeled_graphs, named_graph, GraphFamily};
    use approx::assert_abs_diff_eq;

    #[test]
    fn maxis_binary_points_p3() {
        let g = named_graph(GraphFamily::Path, 3).unwrap();
        let pts = maxis_polytope(&g).binary_points();
        assert_eq!(pts, vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]);
    }

    #[test]
    fn maxis_binary_points_k3() {
        let g = named_graph(GraphFamily::Complete, 3).unwrap();
        let pts = maxis_polytope(&g).binary_points();
        assert_eq!(pts.len(), 3);
        for p in pts {
            assert_eq!(p.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn all_ones_in_maxis_iff_edgeless() {
        for g in labeled_graphs(3) {
            let ones = vec![1.0; 3];
            let inside = maxis_polytope(&g).contains(&ones, 1e-9);
            assert_eq!(inside, g.edge_count() == 0);
        }
    }

    #[test]
    fn frac_shape() {
        let g = named_graph(GraphFamily::Complete, 2).unwrap();
        let p = frac_polytope(&g);
        assert!(p.contains(&[0.0, 0.0], 1e-12));
        assert!(p.contains(&[1.0, 0.0], 1e-12));
        assert!(p.contains(&[0.5, 0.5], 1e-12));
        assert!(!p.contains(&[0.6, 0.5], 1e-12));

        let c5 = named_graph(GraphFamily::Cycle, 5).unwrap();
        assert!(frac_polytope(&c5).contains(&[0.5; 5], 1e-12));

        let e3 = crate::graph::Graph::empty(3).unwrap();
        assert!(frac_polytope(&e3).contains(&[1.0; 3], 1e-12));
    }

    #[test]
    fn stab_inside_frac() {
        for g in labeled_graphs(4) {
            let p = frac_polytope(&g);
            let full = g.full_mask();
            for s in 0..=full {
                if crate::oracle::is_independent(&g, s) {
                    let x: Vec<f64> = (0..4).map(|i| ((s >> i) & 1) as f64).collect();
                    assert!(p.contains(&x, 1e-12));
                }
                if s == full {
                    break;
                }
            }
        }
    }

    #[test]
    fn lp_duality_on_c8() {
        // Both the packing and covering LPs hit n/(d+1) = 8/3 on the cycle.
        let g = named_graph(GraphFamily::Cycle, 8).unwrap();
        let n = g.n();
        let mut cover_rows = Vec::new();
        let mut pack_rows = Vec::new();
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            for j in 0..n {
                if g.has_edge(i, j) {
                    row[j] = 1.0;
                }
            }
            cover_rows.push(row.clone());
            pack_rows.push(row.iter().map(|v| -v).collect::<Vec<f64>>());
        }
        let cover = HPolytope {
            f: cover_rows,
            b: vec![1.0; n],
            u: vec![10.0; n],
            kind: PolytopeKind::Raw,
        };
        let pack = HPolytope {
            f: pack_rows,
            b: vec![-1.0; n],
            u: vec![10.0; n],
            kind: PolytopeKind::Raw,
        };
        let e = vec![1.0; n];
        let min_cover = lp_solve(&e, Sense::Minimize, &cover, &[]).unwrap();
        let max_pack = lp_solve(&e, Sense::Maximize, &pack, &[]).unwrap();
        assert_abs_diff_eq!(min_cover.value, 8.0 / 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(max_pack.value, 8.0 / 3.0, epsilon = 1e-8);
        for r in [&min_cover, &max_pack] {
            let dual = r.dual_value.unwrap();
            assert!((r.value - dual).abs() <= 1e-7 * (1.0 + r.value.abs()));
        }
    }

    #[test]
    fn polytope_json_round_trip() {
        let g = named_graph(GraphFamily::Cycle, 4).unwrap();
        let p = maxis_polytope(&g);
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"kind\":\"maxis\""));
        let p2: HPolytope = serde_json::from_str(&text).unwrap();
        assert_eq!(p.f, p2.f);
        assert_eq!(p.b, p2.b);
        assert_eq!(p.u, p2.u);
    }
}
