//! Exact exploration of SOL(M, q) by complementary-support enumeration.
//!
//! For each index set S the system `x_i = 0 (i not in S), (Mx+q)_i = 0
//! (i in S), x >= 0, Mx+q >= 0` is a polyhedron whose points all solve the
//! LCP; the union over all 2^n supports is exactly the solution set. Every
//! face is probed with the LP kernel, so optimization over SOL reduces to
//! one small LP per nonempty face.

use super::{check_solution, support_mask, LcpError, LcpInstance};
use crate::graph::Graph;
use crate::simplex::{self, LinearProgram, LinearRow, LpStatus, Sense};
use serde::{Deserialize, Serialize};

/// Default cap on the enumeration dimension (2^n feasibility LPs).
pub const DEFAULT_ENUM_LIMIT: usize = 22;

/// One nonempty complementary face, identified by its support pattern.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFace {
    /// Sorted 1-based indices of the allowed-positive coordinates.
    pub support: Vec<usize>,
    /// A basic feasible point of the face.
    pub witness: Vec<f64>,
}

impl SolutionFace {
    pub fn support_bits(&self) -> u64 {
        self.support.iter().fold(0u64, |acc, &i| acc | 1 << (i - 1))
    }
}

fn bounds_for(inst: &LcpInstance, bounds: Option<&[f64]>) -> Result<Vec<f64>, LcpError> {
    match bounds {
        Some(b) => {
            if b.len() != inst.n() {
                return Err(LcpError::Dimension(format!(
                    "bounds have {} entries, expected {}",
                    b.len(),
                    inst.n()
                )));
            }
            Ok(b.to_vec())
        }
        None => inst.default_bounds().ok_or(LcpError::MissingBounds),
    }
}

fn face_lp(inst: &LcpInstance, support: u64, ub: &[f64], objective: &[f64], sense: Sense) -> LinearProgram {
    let n = inst.n();
    let rows = (0..n)
        .map(|i| {
            let coeffs = inst.row(i).to_vec();
            if (support >> i) & 1 == 1 {
                LinearRow::eq(coeffs, -inst.q()[i])
            } else {
                LinearRow::ge(coeffs, -inst.q()[i])
            }
        })
        .collect();
    let upper = (0..n)
        .map(|i| if (support >> i) & 1 == 1 { ub[i] } else { 0.0 })
        .collect();
    LinearProgram {
        objective: objective.to_vec(),
        sense,
        rows,
        lower: vec![0.0; n],
        upper,
    }
}

/// Probes all 2^n support patterns and returns the nonempty faces, sorted by
/// support bitmask. Supports are visited in increasing cardinality.
pub fn enumerate_solution_faces(
    inst: &LcpInstance,
    bounds: Option<&[f64]>,
) -> Result<Vec<SolutionFace>, LcpError> {
    enumerate_solution_faces_with_limit(inst, bounds, DEFAULT_ENUM_LIMIT)
}

pub fn enumerate_solution_faces_with_limit(
    inst: &LcpInstance,
    bounds: Option<&[f64]>,
    limit: usize,
) -> Result<Vec<SolutionFace>, LcpError> {
    let n = inst.n();
    if n > limit {
        return Err(LcpError::TooLarge(n, limit));
    }
    let ub = bounds_for(inst, bounds)?;
    let zeros = vec![0.0; n];
    let mut masks: Vec<u64> = (0..(1u64 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());

    let mut faces = Vec::new();
    for support in masks {
        let lp = face_lp(inst, support, &ub, &zeros, Sense::Minimize);
        let sol = simplex::solve(&lp)?;
        if sol.status == LpStatus::Optimal {
            faces.push(SolutionFace {
                support: (0..n).filter(|&i| (support >> i) & 1 == 1).map(|i| i + 1).collect(),
                witness: sol.x,
            });
        }
    }
    faces.sort_by_key(|f| f.support_bits());
    Ok(faces)
}

/// Result of optimizing a linear objective over the solution set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimumOverSol {
    pub value: f64,
    pub x: Vec<f64>,
    /// Support pattern of the face attaining the optimum (bitmask).
    pub support: u64,
}

/// Optimizes `c.x` over the union of the given faces by re-solving each
/// face's LP with the real objective. Dominated supports are not skipped:
/// the optimum over a face is not monotone in the support.
pub fn optimize_over_faces(
    inst: &LcpInstance,
    faces: &[SolutionFace],
    c: &[f64],
    sense: Sense,
    bounds: Option<&[f64]>,
) -> Result<OptimumOverSol, LcpError> {
    if c.len() != inst.n() {
        return Err(LcpError::Dimension(format!(
            "objective has {} entries, expected {}",
            c.len(),
            inst.n()
        )));
    }
    let ub = bounds_for(inst, bounds)?;
    let mut best: Option<OptimumOverSol> = None;
    for face in faces {
        let support = face.support_bits();
        let lp = face_lp(inst, support, &ub, c, sense);
        let sol = simplex::solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            // A face found feasible earlier cannot turn infeasible; an
            // unbounded face would mean the caller's box was not a bound.
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => match sense {
                Sense::Maximize => sol.value > b.value,
                Sense::Minimize => sol.value < b.value,
            },
        };
        if better {
            best = Some(OptimumOverSol { value: sol.value, support, x: sol.x });
        }
    }
    let best = best.ok_or(LcpError::EmptySolutionSet)?;
    let report = check_solution(inst, &best.x, 1e-6);
    if !report.passed() {
        return Err(LcpError::NotASolution(format!(
            "witness failed verification: {report:?}"
        )));
    }
    Ok(best)
}

/// Exact optimum of `c.x` over SOL(M, q): enumerate the faces, then optimize
/// per face.
pub fn optimize_over_sol(
    inst: &LcpInstance,
    c: &[f64],
    sense: Sense,
    bounds: Option<&[f64]>,
) -> Result<OptimumOverSol, LcpError> {
    let faces = enumerate_solution_faces(inst, bounds)?;
    optimize_over_faces(inst, &faces, c, sense, bounds)
}

/// Binary vectors (as bitmasks) that solve the LCP, found by an exact 2^n
/// integer scan. Independent of both the face enumeration and the
/// maximal-independent-set oracle, so it can arbitrate between them.
pub fn integer_solutions(inst: &LcpInstance) -> Result<Vec<u64>, LcpError> {
    let n = inst.n();
    if n > 25 {
        return Err(LcpError::TooLarge(n, 25));
    }
    let mut m_int = Vec::with_capacity(n * n);
    let mut q_int = Vec::with_capacity(n);
    for i in 0..n {
        for &v in inst.row(i) {
            let r = v.round();
            if (v - r).abs() > 1e-9 {
                return Err(LcpError::NonIntegralData);
            }
            m_int.push(r as i64);
        }
        let r = inst.q()[i].round();
        if (inst.q()[i] - r).abs() > 1e-9 {
            return Err(LcpError::NonIntegralData);
        }
        q_int.push(r as i64);
    }

    // Fast path for 0/1 matrices: residuals are popcounts of row masks.
    let zero_one = m_int.iter().all(|&v| v == 0 || v == 1);
    let row_masks: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| m_int[i * n + j] != 0).fold(0u64, |acc, j| acc | 1 << j))
        .collect();

    let mut out = Vec::new();
    'mask: for s in 0u64..(1 << n) {
        for i in 0..n {
            let yi = if zero_one {
                (row_masks[i] & s).count_ones() as i64 + q_int[i]
            } else {
                (0..n)
                    .filter(|&j| (s >> j) & 1 == 1)
                    .map(|j| m_int[i * n + j])
                    .sum::<i64>()
                    + q_int[i]
            };
            if yi < 0 {
                continue 'mask;
            }
            if (s >> i) & 1 == 1 && yi != 0 {
                continue 'mask;
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Per-coordinate range of the residual y = Mx + q over the solution set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualRange {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub is_w_unique: bool,
}

/// Computes [min, max] of every residual coordinate over SOL by optimizing
/// the matrix rows as objectives; the instance is w-unique when every range
/// has width at most `tol`.
pub fn w_residual_range(
    inst: &LcpInstance,
    bounds: Option<&[f64]>,
    tol: f64,
) -> Result<ResidualRange, LcpError> {
    let n = inst.n();
    let faces = enumerate_solution_faces(inst, bounds)?;
    if faces.is_empty() {
        return Err(LcpError::EmptySolutionSet);
    }
    let mut min = Vec::with_capacity(n);
    let mut max = Vec::with_capacity(n);
    for i in 0..n {
        let c = inst.row(i).to_vec();
        let lo = optimize_over_faces(inst, &faces, &c, Sense::Minimize, bounds)?;
        let hi = optimize_over_faces(inst, &faces, &c, Sense::Maximize, bounds)?;
        min.push(lo.value + inst.q()[i]);
        max.push(hi.value + inst.q()[i]);
    }
    let is_w_unique = min.iter().zip(&max).all(|(lo, hi)| hi - lo <= tol);
    Ok(ResidualRange { min, max, is_w_unique })
}

/// Decomposition of a solution's support on a forest: isolated vertices
/// carry x_i = 1, matched pairs split x_i + x_j = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestSupport {
    /// 0-based vertices forming single-vertex components of the support.
    pub singletons: Vec<usize>,
    /// 0-based matched pairs.
    pub pairs: Vec<(usize, usize)>,
}

/// Splits the support of a forest-LCP solution into isolated vertices and
/// matched pairs; any other induced component shape is an error because it
/// would falsify the structure the decomposition relies on.
pub fn forest_support_structure(g: &Graph, x: &[f64]) -> Result<ForestSupport, LcpError> {
    if !g.is_forest() {
        return Err(LcpError::NotAForest);
    }
    let inst = super::lcp_from_graph(g);
    let report = check_solution(&inst, x, 1e-6);
    if !report.passed() {
        return Err(LcpError::NotASolution(format!("{report:?}")));
    }
    let support = support_mask(x);
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| (support >> v) & 1 == 1).collect();
    let mut singletons = Vec::new();
    let mut pairs = Vec::new();
    if vertices.is_empty() {
        // Cannot happen for graph LCPs (the zero vector never solves), but
        // the empty decomposition is the honest answer if it did.
        return Ok(ForestSupport { singletons, pairs });
    }
    let sub = g.induced_subgraph(&vertices)?;
    for comp in sub.connected_components() {
        match comp.as_slice() {
            [a] => {
                let v = vertices[*a];
                if (x[v] - 1.0).abs() > 1e-6 {
                    return Err(LcpError::UnexpectedComponent(vec![v]));
                }
                singletons.push(v);
            }
            [a, b] => {
                let (u, v) = (vertices[*a], vertices[*b]);
                if (x[u] + x[v] - 1.0).abs() > 1e-6 {
                    return Err(LcpError::UnexpectedComponent(vec![u, v]));
                }
                pairs.push((u, v));
            }
            other => {
                return Err(LcpError::UnexpectedComponent(
                    other.iter().map(|&i| vertices[i]).collect(),
                ));
            }
        }
    }
    Ok(ForestSupport { singletons, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, Graph, GraphFamily};
    use crate::lcp::{lcp_from_graph, Provenance};
    use approx::assert_abs_diff_eq;

    fn graph(f: GraphFamily, n: usize) -> Graph {
        named_graph(f, n).unwrap()
    }

    #[test]
    fn faces_of_k2() {
        let inst = lcp_from_graph(&graph(GraphFamily::Complete, 2));
        let faces = enumerate_solution_faces(&inst, None).unwrap();
        let supports: Vec<u64> = faces.iter().map(|f| f.support_bits()).collect();
        assert_eq!(supports, vec![0b01, 0b10, 0b11]);
        for f in &faces {
            assert_abs_diff_eq!(f.witness.iter().sum::<f64>(), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn faces_of_k1() {
        let inst = lcp_from_graph(&graph(GraphFamily::Complete, 1));
        let faces = enumerate_solution_faces(&inst, None).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].support, vec![1]);
        assert_abs_diff_eq!(faces[0].witness[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn faces_of_edgeless_pair() {
        let inst = lcp_from_graph(&Graph::empty(2).unwrap());
        let faces = enumerate_solution_faces(&inst, None).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].support, vec![1, 2]);
        assert_eq!(faces[0].witness, vec![1.0, 1.0]);
    }

    #[test]
    fn optimize_matches_known_invariants() {
        let k3 = lcp_from_graph(&graph(GraphFamily::Complete, 3));
        let e3 = vec![1.0; 3];
        let max = optimize_over_sol(&k3, &e3, Sense::Maximize, None).unwrap();
        assert_abs_diff_eq!(max.value, 1.0, epsilon = 1e-8);

        let c8 = lcp_from_graph(&graph(GraphFamily::Cycle, 8));
        let e8 = vec![1.0; 8];
        let min = optimize_over_sol(&c8, &e8, Sense::Minimize, None).unwrap();
        assert_abs_diff_eq!(min.value, 8.0 / 3.0, epsilon = 1e-8);

        let p3 = lcp_from_graph(&graph(GraphFamily::Path, 3));
        let e = vec![1.0; 3];
        let max = optimize_over_sol(&p3, &e, Sense::Maximize, None).unwrap();
        assert_abs_diff_eq!(max.value, 2.0, epsilon = 1e-8);
        let min = optimize_over_sol(&p3, &e, Sense::Minimize, None).unwrap();
        assert_abs_diff_eq!(min.value, 1.0, epsilon = 1e-8);

        let w = vec![3.0, 1.0, 3.0];
        let maxw = optimize_over_sol(&p3, &w, Sense::Maximize, None).unwrap();
        assert_abs_diff_eq!(maxw.value, 6.0, epsilon = 1e-8);
    }

    #[test]
    fn integer_solutions_are_maximal_sets() {
        let p3 = lcp_from_graph(&graph(GraphFamily::Path, 3));
        assert_eq!(integer_solutions(&p3).unwrap(), vec![0b010, 0b101]);

        let k3 = lcp_from_graph(&graph(GraphFamily::Complete, 3));
        assert_eq!(integer_solutions(&k3).unwrap(), vec![0b001, 0b010, 0b100]);

        let c5 = lcp_from_graph(&graph(GraphFamily::Cycle, 5));
        let sols = integer_solutions(&c5).unwrap();
        assert_eq!(sols.len(), 5);
        assert!(sols.iter().all(|s| s.count_ones() == 2));
    }

    #[test]
    fn forest_structure_cases() {
        let p3 = graph(GraphFamily::Path, 3);
        let fs = forest_support_structure(&p3, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(fs, ForestSupport { singletons: vec![1], pairs: vec![] });

        let k2 = graph(GraphFamily::Complete, 2);
        let fs = forest_support_structure(&k2, &[0.4, 0.6]).unwrap();
        assert_eq!(fs, ForestSupport { singletons: vec![], pairs: vec![(0, 1)] });

        let c8 = graph(GraphFamily::Cycle, 8);
        assert!(matches!(
            forest_support_structure(&c8, &[1.0 / 3.0; 8]),
            Err(LcpError::NotAForest)
        ));
    }

    #[test]
    fn residual_ranges() {
        let k3 = lcp_from_graph(&graph(GraphFamily::Complete, 3));
        let rr = w_residual_range(&k3, None, 1e-7).unwrap();
        assert!(rr.is_w_unique);
        for (lo, hi) in rr.min.iter().zip(&rr.max) {
            assert_abs_diff_eq!(*lo, 0.0, epsilon = 1e-7);
            assert_abs_diff_eq!(*hi, 0.0, epsilon = 1e-7);
        }

        let p3 = lcp_from_graph(&graph(GraphFamily::Path, 3));
        let rr = w_residual_range(&p3, None, 1e-7).unwrap();
        assert!(!rr.is_w_unique);
        assert_abs_diff_eq!(rr.min[1], 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(rr.max[1], 1.0, epsilon = 1e-7);

        // C5 is well-covered yet not w-unique: the sufficiency is one-way.
        let c5 = lcp_from_graph(&graph(GraphFamily::Cycle, 5));
        let rr = w_residual_range(&c5, None, 1e-7).unwrap();
        assert!(!rr.is_w_unique);
    }

    #[test]
    fn raw_instance_needs_bounds() {
        let inst = LcpInstance::new(vec![1.0], vec![-1.0], Provenance::Raw).unwrap();
        assert!(matches!(
            enumerate_solution_faces(&inst, None),
            Err(LcpError::MissingBounds)
        ));
        let faces = enumerate_solution_faces(&inst, Some(&[5.0])).unwrap();
        assert_eq!(faces.len(), 1);
    }

    #[test]
    fn enumeration_limit_enforced() {
        let inst = lcp_from_graph(&Graph::empty(23).unwrap());
        assert!(matches!(
            enumerate_solution_faces(&inst, None),
            Err(LcpError::TooLarge(23, DEFAULT_ENUM_LIMIT))
        ));
    }
}
