//! The four theta bounds: the Lovasz number, its nonnegative variant, and
//! the two lift-and-project strengthenings obtained by maximizing the l1
//! norm over the projected SDP relaxations of the maximal-independent-set
//! and edge polytopes.

use super::lift::{ls_lift, LiftError, LinearizedPolytope};
use super::{sdp_solve, EntryExpr, SdpError, SdpProblem, SdpSettings, SdpStatus};
use crate::graph::Graph;
use crate::polytope::{frac_polytope, maxis_polytope};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest graph order the theta computations accept.
pub const THETA_LIMIT: usize = 30;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("graph order {0} exceeds the theta limit {THETA_LIMIT}")]
    TooLarge(usize),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaVariant {
    Lovasz,
    Prime,
    Star,
    Frac,
}

impl ThetaVariant {
    pub fn name(self) -> &'static str {
        match self {
            ThetaVariant::Lovasz => "lovasz",
            ThetaVariant::Prime => "prime",
            ThetaVariant::Star => "star",
            ThetaVariant::Frac => "frac",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lovasz" | "theta" => Some(ThetaVariant::Lovasz),
            "prime" => Some(ThetaVariant::Prime),
            "star" => Some(ThetaVariant::Star),
            "frac" => Some(ThetaVariant::Frac),
            _ => None,
        }
    }
}

/// Computed bound with solver diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaReport {
    pub variant: ThetaVariant,
    pub value: f64,
    /// Relative duality gap at termination.
    pub gap: f64,
    pub iterations: usize,
    pub n: usize,
    pub constraints: usize,
    /// Projected witness for the lifted variants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_x: Option<Vec<f64>>,
    pub primal_infeas: f64,
    pub dual_infeas: f64,
    /// Lifted-variable block at the optimum; used by the edge-entry checks.
    #[serde(skip)]
    pub witness_w: Option<DMatrix<f64>>,
}

fn guard(g: &Graph) -> Result<(), ThetaError> {
    if g.n() > THETA_LIMIT {
        return Err(ThetaError::TooLarge(g.n()));
    }
    Ok(())
}

/// The Lovasz theta: max <J, X> with tr X = 1, X_ij = 0 on edges, X psd.
pub fn theta_lovasz(g: &Graph) -> Result<ThetaReport, ThetaError> {
    theta_lovasz_impl(g, false)
}

/// The nonnegative variant: the same program with X >= 0 entrywise.
pub fn theta_prime(g: &Graph) -> Result<ThetaReport, ThetaError> {
    theta_lovasz_impl(g, true)
}

fn theta_lovasz_impl(g: &Graph, nonneg: bool) -> Result<ThetaReport, ThetaError> {
    guard(g)?;
    let n = g.n();
    let jmat = DMatrix::from_element(n, n, 1.0);
    let mut equalities = vec![(EntryExpr::new((0..n).map(|i| (i, i, 1.0)).collect()), 1.0)];
    for (i, j) in g.edges() {
        equalities.push((EntryExpr::new(vec![(i, j, 1.0)]), 0.0));
    }
    let mut inequalities = Vec::new();
    if nonneg {
        // Edge entries are already pinned to zero and the diagonal is
        // nonnegative by psd-ness, so only non-adjacent pairs remain.
        for i in 0..n {
            for j in i + 1..n {
                if !g.has_edge(i, j) {
                    inequalities.push((EntryExpr::new(vec![(i, j, 1.0)]), 0.0));
                }
            }
        }
    }
    let prob = SdpProblem {
        block_dim: n,
        objective: EntryExpr::from_symmetric(&jmat),
        equalities,
        inequalities,
    };
    let constraints = prob.equalities.len() + prob.inequalities.len();
    let out = sdp_solve(&prob, &SdpSettings::default())?;
    debug_assert_eq!(out.status, SdpStatus::Converged);
    Ok(ThetaReport {
        variant: if nonneg { ThetaVariant::Prime } else { ThetaVariant::Lovasz },
        value: out.value,
        gap: out.gap,
        iterations: out.iterations,
        n,
        constraints,
        witness_x: None,
        primal_infeas: out.primal_infeas,
        dual_infeas: out.dual_infeas,
        witness_w: None,
    })
}

/// Optimum of the l1 norm over the projection N+(P) of a lifted polytope:
/// the PSD block is [[1, x'], [x, W]] with diag(W) = x linked by equalities
/// and the lifted rows as inequalities.
#[derive(Debug, Clone)]
pub struct LiftedOptimum {
    pub value: f64,
    pub x: Vec<f64>,
    pub w: DMatrix<f64>,
    pub gap: f64,
    pub iterations: usize,
    pub constraints: usize,
    pub primal_infeas: f64,
    pub dual_infeas: f64,
}

pub fn max_l1_over_lifted(lp: &LinearizedPolytope) -> Result<LiftedOptimum, SdpError> {
    let n = lp.n;
    let p = n + 1;
    let mut equalities = vec![(EntryExpr::new(vec![(0, 0, 1.0)]), 1.0)];
    for i in 0..n {
        // Diagonal link w_ii = x_i, i.e. Y_{i+1,i+1} - Y_{0,i+1} = 0.
        equalities.push((
            EntryExpr::new(vec![(i + 1, i + 1, 1.0), (0, i + 1, -1.0)]),
            0.0,
        ));
    }
    let mut inequalities = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        let mut terms = Vec::with_capacity(c.x_coefs.len() + c.w_coefs.len());
        for (i, &coef) in c.x_coefs.iter().enumerate() {
            if coef != 0.0 {
                terms.push((0, i + 1, coef));
            }
        }
        for &(i, j, coef) in &c.w_coefs {
            terms.push((i + 1, j + 1, coef));
        }
        inequalities.push((EntryExpr::new(terms), -c.constant));
    }
    let prob = SdpProblem {
        block_dim: p,
        objective: EntryExpr::new((0..n).map(|i| (0, i + 1, 1.0)).collect()),
        equalities,
        inequalities,
    };
    let constraints = prob.equalities.len() + prob.inequalities.len();
    let out = sdp_solve(&prob, &SdpSettings::default())?;
    let x: Vec<f64> = (0..n).map(|i| out.matrix[(0, i + 1)]).collect();
    let w = out.matrix.view((1, 1), (n, n)).into_owned();
    Ok(LiftedOptimum {
        value: out.value,
        x,
        w,
        gap: out.gap,
        iterations: out.iterations,
        constraints,
        primal_infeas: out.primal_infeas,
        dual_infeas: out.dual_infeas,
    })
}

/// The strengthened bound: max l1 norm over N+ of the
/// maximal-independent-set polytope. The lifted rows are regenerated from
/// the product form rather than transcribed from the displayed families.
pub fn theta_star(g: &Graph) -> Result<ThetaReport, ThetaError> {
    guard(g)?;
    let lp = ls_lift(&maxis_polytope(g))?;
    lifted_report(g, ThetaVariant::Star, &lp)
}

/// Max l1 norm over N+ of the edge relaxation.
pub fn theta_frac(g: &Graph) -> Result<ThetaReport, ThetaError> {
    guard(g)?;
    let lp = ls_lift(&frac_polytope(g))?;
    lifted_report(g, ThetaVariant::Frac, &lp)
}

fn lifted_report(
    g: &Graph,
    variant: ThetaVariant,
    lp: &LinearizedPolytope,
) -> Result<ThetaReport, ThetaError> {
    let opt = max_l1_over_lifted(lp)?;
    Ok(ThetaReport {
        variant,
        value: opt.value,
        gap: opt.gap,
        iterations: opt.iterations,
        n: g.n(),
        constraints: opt.constraints,
        witness_x: Some(opt.x),
        primal_infeas: opt.primal_infeas,
        dual_infeas: opt.dual_infeas,
        witness_w: Some(opt.w),
    })
}

/// Computes the requested variant.
pub fn compute_theta(variant: ThetaVariant, g: &Graph) -> Result<ThetaReport, ThetaError> {
    match variant {
        ThetaVariant::Lovasz => theta_lovasz(g),
        ThetaVariant::Prime => theta_prime(g),
        ThetaVariant::Star => theta_star(g),
        ThetaVariant::Frac => theta_frac(g),
    }
}

/// One row of the comparison table; `None` marks a non-converged cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub alpha: f64,
    pub frac: Option<f64>,
    pub star: Option<f64>,
    pub prime: Option<f64>,
    pub lovasz: Option<f64>,
}

/// Renders rows in the layout of the published comparison: one line per
/// graph, values at four decimals, `n/c` for cells that did not converge.
pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>8} {:>12} {:>12} {:>12} {:>12}\n",
        "(n,p)", "alpha", "theta_FRAC", "theta*", "theta'", "theta"
    ));
    for r in rows {
        let cell = |v: Option<f64>| match v {
            Some(v) => format!("{v:.4}"),
            None => "n/c".to_string(),
        };
        out.push_str(&format!(
            "{:<10} {:>8} {:>12} {:>12} {:>12} {:>12}\n",
            format!("({},{})", r.n, r.p),
            format!("{:.0}", r.alpha),
            cell(r.frac),
            cell(r.star),
            cell(r.prime),
            cell(r.lovasz),
        ));
    }
    out
}
