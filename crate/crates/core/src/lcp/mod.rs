//! Linear complementarity problems LCP(M, q): find x >= 0 with
//! y = Mx + q >= 0 and x.y = 0. The graph specialization LCP(A+I, -e) ties
//! the solution set to the independence structure of the graph.

mod faces;

pub use faces::{
    enumerate_solution_faces, enumerate_solution_faces_with_limit, forest_support_structure,
    integer_solutions, optimize_over_faces, optimize_over_sol, w_residual_range, ForestSupport,
    OptimumOverSol, ResidualRange, SolutionFace, DEFAULT_ENUM_LIMIT,
};

use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LcpError {
    #[error("dimension {0} exceeds the support-enumeration limit {1}")]
    TooLarge(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("solution set is empty")]
    EmptySolutionSet,
    #[error("bimatrix entries must be strictly positive (found {0})")]
    NonPositiveEntry(f64),
    #[error("block of the solution is zero; cannot normalize to the simplex")]
    ZeroBlock,
    #[error("graph is not a forest")]
    NotAForest,
    #[error(
        "support component {0:?} is neither a single vertex nor a matched pair; \
         this would falsify the forest support structure"
    )]
    UnexpectedComponent(Vec<usize>),
    #[error("instance data is not integral; binary scan needs integer entries")]
    NonIntegralData,
    #[error("no bounding box: raw instances need explicit bounds")]
    MissingBounds,
    #[error("vector is not a solution: {0}")]
    NotASolution(String),
    #[error("LP kernel failure: {0}")]
    Simplex(#[from] crate::simplex::SimplexError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Graph,
    Qp,
    Bimatrix,
    Raw,
}

/// LCP data: a square matrix (row-major) and a vector of matching length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LcpInstance {
    #[serde(rename = "M")]
    m: Vec<f64>,
    q: Vec<f64>,
    provenance: Provenance,
}

impl LcpInstance {
    pub fn new(m: Vec<f64>, q: Vec<f64>, provenance: Provenance) -> Result<Self, LcpError> {
        let n = q.len();
        if m.len() != n * n {
            return Err(LcpError::Dimension(format!(
                "matrix has {} entries, expected {}",
                m.len(),
                n * n
            )));
        }
        Ok(Self { m, q, provenance })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.m[i * n..(i + 1) * n]
    }

    /// y = Mx + q.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.q[i])
            .collect()
    }

    /// The box every solution is known to live in: the unit cube for graph
    /// instances (SOL is contained in [0,1]^n), none otherwise.
    pub fn default_bounds(&self) -> Option<Vec<f64>> {
        match self.provenance {
            Provenance::Graph => Some(vec![1.0; self.n()]),
            _ => None,
        }
    }
}

/// LCP(G) = LCP(A+I, -e).
pub fn lcp_from_graph(g: &Graph) -> LcpInstance {
    let n = g.n();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
        for j in 0..n {
            if g.has_edge(i, j) {
                m[i * n + j] = 1.0;
            }
        }
    }
    LcpInstance { m, q: vec![-1.0; n], provenance: Provenance::Graph }
}

/// KKT system of the convex QP `min (1/2)x'Qx + c'x, Ax >= b, x >= 0` as a
/// block LCP in (x, lambda) with matrix [[Q, -A'], [A, 0]] and q = (c, -b).
pub fn lcp_from_qp(
    q_mat: &[Vec<f64>],
    c: &[f64],
    a_mat: &[Vec<f64>],
    b: &[f64],
) -> Result<LcpInstance, LcpError> {
    let n = c.len();
    let m = b.len();
    if q_mat.len() != n || q_mat.iter().any(|r| r.len() != n) {
        return Err(LcpError::Dimension("Q must be n x n".into()));
    }
    if a_mat.len() != m || a_mat.iter().any(|r| r.len() != n) {
        return Err(LcpError::Dimension("A must be m x n".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if (q_mat[i][j] - q_mat[j][i]).abs() > 1e-12 {
                return Err(LcpError::Dimension("Q must be symmetric".into()));
            }
        }
    }
    let dim = n + m;
    let mut mm = vec![0.0; dim * dim];
    for i in 0..n {
        for j in 0..n {
            mm[i * dim + j] = q_mat[i][j];
        }
        for k in 0..m {
            mm[i * dim + n + k] = -a_mat[k][i];
        }
    }
    for k in 0..m {
        for j in 0..n {
            mm[(n + k) * dim + j] = a_mat[k][j];
        }
    }
    let mut qq = Vec::with_capacity(dim);
    qq.extend_from_slice(c);
    qq.extend(b.iter().map(|v| -v));
    Ok(LcpInstance { m: mm, q: qq, provenance: Provenance::Qp })
}

/// Bimatrix-game reduction: M = [[0, A], [B', 0]], q = -e. Both loss
/// matrices must be strictly positive.
pub fn lcp_from_bimatrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<LcpInstance, LcpError> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 || n == 0 {
        return Err(LcpError::Dimension("empty game".into()));
    }
    if b.len() != m || a.iter().any(|r| r.len() != n) || b.iter().any(|r| r.len() != n) {
        return Err(LcpError::Dimension("A and B must both be m x n".into()));
    }
    for row in a.iter().chain(b.iter()) {
        for &v in row {
            if v <= 0.0 {
                return Err(LcpError::NonPositiveEntry(v));
            }
        }
    }
    let dim = m + n;
    let mut mm = vec![0.0; dim * dim];
    for i in 0..m {
        for j in 0..n {
            mm[i * dim + m + j] = a[i][j];
            mm[(m + j) * dim + i] = b[i][j];
        }
    }
    Ok(LcpInstance { m: mm, q: vec![-1.0; dim], provenance: Provenance::Bimatrix })
}

/// Normalizes the two blocks of a bimatrix-LCP solution onto their
/// probability simplices, producing the Nash equilibrium pair.
pub fn nash_from_lcp_solution(
    x: &[f64],
    m: usize,
    n: usize,
) -> Result<(Vec<f64>, Vec<f64>), LcpError> {
    if x.len() != m + n {
        return Err(LcpError::Dimension(format!(
            "solution has {} entries, expected {}",
            x.len(),
            m + n
        )));
    }
    let (first, second) = x.split_at(m);
    let s1: f64 = first.iter().sum();
    let s2: f64 = second.iter().sum();
    if s1 <= 0.0 || s2 <= 0.0 {
        return Err(LcpError::ZeroBlock);
    }
    Ok((
        first.iter().map(|v| v / s1).collect(),
        second.iter().map(|v| v / s2).collect(),
    ))
}

/// Support threshold for classifying entries as strictly positive.
pub const SUPPORT_TOL: f64 = 1e-7;
/// Default complementarity tolerance.
pub const CHECK_TOL: f64 = 1e-8;

/// A certified solution: the point, its residual, and its support.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LcpSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Bitmask of indices with x_i above the support threshold.
    pub support: u64,
}

impl LcpSolution {
    pub fn from_point(inst: &LcpInstance, x: Vec<f64>) -> Self {
        let y = inst.residual(&x);
        let support = support_mask(&x);
        Self { x, y, support }
    }

    pub fn support_indices(&self) -> Vec<usize> {
        (0..64).filter(|&i| (self.support >> i) & 1 == 1).collect()
    }
}

pub fn support_mask(x: &[f64]) -> u64 {
    x.iter()
        .enumerate()
        .filter(|(_, &v)| v > SUPPORT_TOL)
        .fold(0u64, |acc, (i, _)| acc | 1 << i)
}

/// Per-condition verdicts for a candidate point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub nonneg_x: bool,
    pub nonneg_y: bool,
    pub complementarity: bool,
    /// Most negative x entry (0 when none).
    pub worst_x: f64,
    /// Most negative y entry (0 when none).
    pub worst_y: f64,
    /// Largest |x_i y_i| relative to its 1 + |x_i||y_i| scale.
    pub worst_product: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.nonneg_x && self.nonneg_y && self.complementarity
    }
}

/// Checks the three LCP conditions at `x` with tolerance `tol`; the
/// complementarity products are measured relative to a 1 + |x_i||y_i| scale.
pub fn check_solution(inst: &LcpInstance, x: &[f64], tol: f64) -> CheckReport {
    let y = inst.residual(x);
    let worst_x = x.iter().fold(0.0f64, |acc, &v| acc.min(v));
    let worst_y = y.iter().fold(0.0f64, |acc, &v| acc.min(v));
    let worst_product = x
        .iter()
        .zip(&y)
        .map(|(&xi, &yi)| (xi * yi).abs() / (1.0 + (xi * yi).abs()))
        .fold(0.0f64, f64::max);
    CheckReport {
        nonneg_x: worst_x >= -tol,
        nonneg_y: worst_y >= -tol,
        complementarity: worst_product <= tol,
        worst_x,
        worst_y,
        worst_product,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, GraphFamily};
    use approx::assert_abs_diff_eq;

    #[test]
    fn graph_instance_shape() {
        let k2 = named_graph(GraphFamily::Complete, 2).unwrap();
        let inst = lcp_from_graph(&k2);
        assert_eq!(inst.row(0), &[1.0, 1.0]);
        assert_eq!(inst.row(1), &[1.0, 1.0]);
        assert_eq!(inst.q(), &[-1.0, -1.0]);

        let k1 = named_graph(GraphFamily::Complete, 1).unwrap();
        let inst = lcp_from_graph(&k1);
        assert_eq!(inst.row(0), &[1.0]);
        assert!(check_solution(&inst, &[1.0], CHECK_TOL).passed());

        let p3 = named_graph(GraphFamily::Path, 3).unwrap();
        let inst = lcp_from_graph(&p3);
        assert_eq!(inst.row(1), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn check_solution_cases() {
        let c4 = named_graph(GraphFamily::Cycle, 4).unwrap();
        let inst = lcp_from_graph(&c4);
        assert!(check_solution(&inst, &[1.0 / 3.0; 4], CHECK_TOL).passed());

        let p3 = named_graph(GraphFamily::Path, 3).unwrap();
        let inst = lcp_from_graph(&p3);
        assert!(check_solution(&inst, &[0.0, 1.0, 0.0], CHECK_TOL).passed());

        let report = check_solution(&inst, &[0.0, 0.0, 0.0], CHECK_TOL);
        assert!(!report.passed());
        assert!(report.nonneg_x && !report.nonneg_y);
    }

    #[test]
    fn qp_unconstrained() {
        // min x^2 - 2x over x >= 0 has KKT solution x = 1.
        let inst = lcp_from_qp(&[vec![2.0]], &[-2.0], &[], &[]).unwrap();
        assert!(check_solution(&inst, &[1.0], CHECK_TOL).passed());

        // Zero curvature with positive gradient pins x = 0.
        let inst = lcp_from_qp(&[vec![0.0]], &[1.0], &[], &[]).unwrap();
        assert!(check_solution(&inst, &[0.0], CHECK_TOL).passed());
    }

    #[test]
    fn qp_with_constraint() {
        // min x^2 - 4x s.t. x <= 1 (written -x >= -1): x = 1, lambda = 2.
        let inst = lcp_from_qp(&[vec![2.0]], &[-4.0], &[vec![-1.0]], &[-1.0]).unwrap();
        assert!(check_solution(&inst, &[1.0, 2.0], CHECK_TOL).passed());
    }

    #[test]
    fn bimatrix_one_by_one() {
        let inst = lcp_from_bimatrix(&[vec![1.0]], &[vec![1.0]]).unwrap();
        assert!(check_solution(&inst, &[1.0, 1.0], CHECK_TOL).passed());

        let inst = lcp_from_bimatrix(&[vec![2.0]], &[vec![3.0]]).unwrap();
        assert!(check_solution(&inst, &[1.0 / 3.0, 0.5], CHECK_TOL).passed());

        assert!(matches!(
            lcp_from_bimatrix(&[vec![0.0]], &[vec![1.0]]),
            Err(LcpError::NonPositiveEntry(_))
        ));
    }

    #[test]
    fn nash_normalization() {
        let (p, q) = nash_from_lcp_solution(&[1.0, 1.0], 1, 1).unwrap();
        assert_eq!((p, q), (vec![1.0], vec![1.0]));

        let (p, q) = nash_from_lcp_solution(&[1.0 / 3.0, 0.5], 1, 1).unwrap();
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q[0], 1.0, epsilon = 1e-12);

        assert!(matches!(
            nash_from_lcp_solution(&[0.0, 0.0], 1, 1),
            Err(LcpError::ZeroBlock)
        ));
    }

    #[test]
    fn instance_json_round_trip() {
        let g = named_graph(GraphFamily::Path, 3).unwrap();
        let inst = lcp_from_graph(&g);
        let text = serde_json::to_string(&inst).unwrap();
        assert!(text.contains("\"provenance\":\"graph\""));
        let back: LcpInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back.m, inst.m);
        assert_eq!(back.q, inst.q);
    }
}
