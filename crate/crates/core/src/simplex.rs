//! Dense two-phase simplex kernel.
//!
//! Solves min/max `c.x` subject to general rows (>=, <=, =) and finite box
//! bounds `lower <= x <= upper`. Pivoting uses Dantzig's rule and switches to
//! Bland's rule permanently after a streak of degenerate pivots, so every
//! solve terminates. Problems here are tiny (tens of variables), so the
//! kernel keeps a full tableau and refreshes the final basis with an LU
//! solve on the original data.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub op: RowOp,
    pub rhs: f64,
}

impl LinearRow {
    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, op: RowOp::Ge, rhs }
    }
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, op: RowOp::Le, rhs }
    }
    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, op: RowOp::Eq, rhs }
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub rows: Vec<LinearRow>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value in the caller's sense; meaningful only when optimal.
    pub value: f64,
    pub x: Vec<f64>,
    /// Dual objective value; equals `value` at optimality up to roundoff.
    pub dual_value: f64,
    /// Multipliers for the caller's rows (box rows excluded).
    pub row_duals: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("iteration limit {0} exceeded")]
    IterationLimit(usize),
    #[error("dimension mismatch: row has {got} coefficients, expected {want}")]
    Dimension { got: usize, want: usize },
    #[error("non-finite bound or coefficient")]
    NonFinite,
}

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;
/// Feasibility threshold on the phase-1 objective.
const FEAS_TOL: f64 = 1e-7;

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, SimplexError> {
    let n = lp.objective.len();
    for row in &lp.rows {
        if row.coeffs.len() != n {
            return Err(SimplexError::Dimension { got: row.coeffs.len(), want: n });
        }
    }
    if lp.lower.len() != n || lp.upper.len() != n {
        return Err(SimplexError::Dimension { got: lp.lower.len(), want: n });
    }
    let finite = lp
        .lower
        .iter()
        .chain(lp.upper.iter())
        .chain(lp.objective.iter())
        .all(|v| v.is_finite())
        && lp.rows.iter().all(|r| r.rhs.is_finite() && r.coeffs.iter().all(|v| v.is_finite()));
    if !finite {
        return Err(SimplexError::NonFinite);
    }
    for i in 0..n {
        if lp.upper[i] < lp.lower[i] - 1e-12 {
            return Ok(infeasible(n, lp.rows.len()));
        }
    }

    // Shift x = lower + x' so all variables are >= 0, and turn upper bounds
    // into explicit rows over x'.
    let min_sense = lp.sense == Sense::Minimize;
    let obj: Vec<f64> = lp
        .objective
        .iter()
        .map(|&c| if min_sense { c } else { -c })
        .collect();
    let obj_shift: f64 = lp
        .objective
        .iter()
        .zip(&lp.lower)
        .map(|(c, l)| c * l)
        .sum();

    let mut std_rows: Vec<(Vec<f64>, RowOp, f64)> = Vec::with_capacity(lp.rows.len() + n);
    for row in &lp.rows {
        let shift: f64 = row.coeffs.iter().zip(&lp.lower).map(|(a, l)| a * l).sum();
        std_rows.push((row.coeffs.clone(), row.op, row.rhs - shift));
    }
    for i in 0..n {
        let u = lp.upper[i] - lp.lower[i];
        let mut coeffs = vec![0.0; n];
        coeffs[i] = 1.0;
        std_rows.push((coeffs, RowOp::Le, u));
    }

    let core = solve_standardized(&obj, &std_rows, n)?;
    let mut out = match core {
        CoreOutcome::Infeasible => infeasible(n, lp.rows.len()),
        CoreOutcome::Unbounded => LpSolution {
            status: LpStatus::Unbounded,
            value: if min_sense { f64::NEG_INFINITY } else { f64::INFINITY },
            x: vec![0.0; n],
            dual_value: 0.0,
            row_duals: vec![0.0; lp.rows.len()],
        },
        CoreOutcome::Optimal { x, dual_obj, row_duals } => {
            let xs: Vec<f64> = x.iter().zip(&lp.lower).map(|(xi, l)| xi + l).collect();
            let value: f64 = lp.objective.iter().zip(&xs).map(|(c, x)| c * x).sum();
            let sense_sign = if min_sense { 1.0 } else { -1.0 };
            let dual_value = sense_sign * dual_obj + obj_shift;
            LpSolution {
                status: LpStatus::Optimal,
                value,
                x: xs,
                dual_value,
                row_duals: row_duals
                    .into_iter()
                    .take(lp.rows.len())
                    .map(|y| sense_sign * y)
                    .collect(),
            }
        }
    };
    if out.status == LpStatus::Optimal {
        // Clamp roundoff outside the box.
        for i in 0..n {
            out.x[i] = out.x[i].clamp(lp.lower[i], lp.upper[i]);
        }
    }
    Ok(out)
}

fn infeasible(n: usize, rows: usize) -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        value: f64::NAN,
        x: vec![0.0; n],
        dual_value: f64::NAN,
        row_duals: vec![0.0; rows],
    }
}

enum CoreOutcome {
    Optimal { x: Vec<f64>, dual_obj: f64, row_duals: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// Solves min obj.x' s.t. the given rows, x' >= 0.
fn solve_standardized(
    obj: &[f64],
    rows: &[(Vec<f64>, RowOp, f64)],
    n: usize,
) -> Result<CoreOutcome, SimplexError> {
    let m = rows.len();
    if m == 0 {
        // No rows and no variables (boxes always add rows otherwise).
        return Ok(CoreOutcome::Optimal { x: vec![0.0; n], dual_obj: 0.0, row_duals: vec![] });
    }
    let n_slack = rows.iter().filter(|(_, op, _)| *op != RowOp::Eq).count();

    // Column layout: structural | slack/surplus | artificial.
    let mut a = DMatrix::<f64>::zeros(m, n + n_slack);
    let mut b = DVector::<f64>::zeros(m);
    let mut slack_col_of_row: Vec<Option<usize>> = vec![None; m];
    let mut negated = vec![false; m];
    {
        let mut next_slack = n;
        for (r, (coeffs, op, rhs)) in rows.iter().enumerate() {
            for (c, &v) in coeffs.iter().enumerate() {
                a[(r, c)] = v;
            }
            b[r] = *rhs;
            match op {
                RowOp::Le => {
                    a[(r, next_slack)] = 1.0;
                    slack_col_of_row[r] = Some(next_slack);
                    next_slack += 1;
                }
                RowOp::Ge => {
                    a[(r, next_slack)] = -1.0;
                    slack_col_of_row[r] = Some(next_slack);
                    next_slack += 1;
                }
                RowOp::Eq => {}
            }
        }
    }
    for r in 0..m {
        if b[r] < 0.0 {
            for c in 0..a.ncols() {
                a[(r, c)] = -a[(r, c)];
            }
            b[r] = -b[r];
            negated[r] = true;
        }
    }

    // Initial basis: a slack column with +1 where available, otherwise an
    // artificial column.
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificial_cols: Vec<usize> = Vec::new();
    let mut cols = a.ncols();
    let mut extra: Vec<(usize, usize)> = Vec::new(); // (row, new artificial col)
    for r in 0..m {
        match slack_col_of_row[r] {
            Some(col) if a[(r, col)] > 0.5 => basis.push(col),
            _ => {
                extra.push((r, cols));
                basis.push(cols);
                artificial_cols.push(cols);
                cols += 1;
            }
        }
    }
    let mut full = DMatrix::<f64>::zeros(m, cols);
    full.view_mut((0, 0), (m, a.ncols())).copy_from(&a);
    for &(r, c) in &extra {
        full[(r, c)] = 1.0;
    }

    // Tableau with rhs appended.
    let mut tab = Tableau::new(&full, &b, basis);

    if !artificial_cols.is_empty() {
        let mut phase1 = vec![0.0; cols];
        for &c in &artificial_cols {
            phase1[c] = 1.0;
        }
        let feas = tab.run(&phase1, n, usize::MAX)?;
        debug_assert!(feas != RunResult::Unbounded, "phase 1 is bounded below by 0");
        let p1_value = tab.objective_value(&phase1);
        if p1_value > FEAS_TOL * (1.0 + b.amax()) {
            return Ok(CoreOutcome::Infeasible);
        }
        // Pivot remaining artificials out of the basis where possible; a row
        // with no eligible pivot is redundant and stays with its artificial
        // basic at zero, banned from re-entering.
        let art_set: std::collections::BTreeSet<usize> = artificial_cols.iter().copied().collect();
        for r in 0..m {
            if art_set.contains(&tab.basis[r]) {
                let col = (0..cols)
                    .find(|c| !art_set.contains(c) && tab.value(r, *c).abs() > 1e-7);
                if let Some(c) = col {
                    tab.pivot(r, c);
                }
            }
        }
        tab.banned = art_set;
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..obj.len()].copy_from_slice(obj);
    match tab.run(&phase2, n, usize::MAX)? {
        RunResult::Unbounded => return Ok(CoreOutcome::Unbounded),
        RunResult::Optimal => {}
    }

    // Refresh the basic values and extract duals from the original data.
    let basis = tab.basis.clone();
    let mut bmat = DMatrix::<f64>::zeros(m, m);
    let mut cb = DVector::<f64>::zeros(m);
    for (i, &col) in basis.iter().enumerate() {
        for r in 0..m {
            bmat[(r, i)] = full[(r, col)];
        }
        cb[i] = phase2[col];
    }
    let lu = bmat.clone().lu();
    let xb = lu.solve(&b).unwrap_or_else(|| {
        // Singular refresh basis: fall back to tableau values.
        DVector::from_iterator(m, (0..m).map(|r| tab.rhs(r)))
    });
    let y = bmat.transpose().lu().solve(&cb).unwrap_or_else(|| DVector::zeros(m));

    let mut x = vec![0.0; n];
    for (i, &col) in basis.iter().enumerate() {
        if col < n {
            x[col] = xb[i].max(0.0);
        }
    }
    let dual_obj = y.dot(&b);
    let row_duals: Vec<f64> = (0..m)
        .map(|r| if negated[r] { -y[r] } else { y[r] })
        .collect();
    Ok(CoreOutcome::Optimal { x, dual_obj, row_duals })
}

#[derive(PartialEq, Eq)]
enum RunResult {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Row-major, width = ncols + 1 (rhs last).
    data: Vec<f64>,
    ncols: usize,
    basis: Vec<usize>,
    banned: std::collections::BTreeSet<usize>,
}

impl Tableau {
    fn new(a: &DMatrix<f64>, b: &DVector<f64>, basis: Vec<usize>) -> Self {
        let m = a.nrows();
        let ncols = a.ncols();
        let width = ncols + 1;
        let mut data = vec![0.0; m * width];
        for r in 0..m {
            for c in 0..ncols {
                data[r * width + c] = a[(r, c)];
            }
            data[r * width + ncols] = b[r];
        }
        let mut t = Self { data, ncols, basis: basis.clone(), banned: Default::default() };
        // Normalize so each basic column is a unit column.
        for (r, &col) in basis.iter().enumerate() {
            t.pivot(r, col);
        }
        t
    }

    fn nrows(&self) -> usize {
        self.basis.len()
    }

    fn value(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.ncols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * (self.ncols + 1) + self.ncols]
    }

    fn objective_value(&self, cost: &[f64]) -> f64 {
        (0..self.nrows()).map(|r| cost[self.basis[r]] * self.rhs(r)).sum()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.ncols + 1;
        let piv = self.data[row * width + col];
        debug_assert!(piv.abs() > 0.0);
        let inv = 1.0 / piv;
        for c in 0..width {
            self.data[row * width + c] *= inv;
        }
        for r in 0..self.nrows() {
            if r == row {
                continue;
            }
            let factor = self.data[r * width + col];
            if factor == 0.0 {
                continue;
            }
            let (head, tail) = self.data.split_at_mut(row.max(r) * width);
            let (src, dst) = if row < r {
                (&head[row * width..row * width + width], &mut tail[..width])
            } else {
                (&tail[..width], &mut head[r * width..r * width + width])
            };
            for (d, s) in dst.iter_mut().zip(src) {
                *d -= factor * s;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for the given cost vector. Dantzig rule with a
    /// permanent switch to Bland after `10 * n_hint` degenerate pivots.
    fn run(&mut self, cost: &[f64], n_hint: usize, max_iter: usize) -> Result<RunResult, SimplexError> {
        let m = self.nrows();
        let width = self.ncols + 1;
        let degen_limit = 10 * n_hint.max(4);
        let iter_cap = if max_iter == usize::MAX {
            2000 + 200 * (self.ncols + m)
        } else {
            max_iter
        };
        let mut degen_streak = 0usize;
        let mut bland = false;

        // Reduced costs maintained incrementally would be faster; at these
        // sizes recomputing per iteration is simpler and cheap enough.
        for iter in 0..iter_cap {
            let mut entering: Option<usize> = None;
            let mut best = -COST_EPS;
            for c in 0..self.ncols {
                if self.banned.contains(&c) || self.basis.contains(&c) {
                    continue;
                }
                let mut red = cost[c];
                for r in 0..m {
                    let coeff = self.data[r * width + c];
                    if coeff != 0.0 {
                        red -= cost[self.basis[r]] * coeff;
                    }
                }
                if red < best {
                    if bland {
                        entering = Some(c);
                        break;
                    }
                    best = red;
                    entering = Some(c);
                }
            }
            let Some(col) = entering else {
                return Ok(RunResult::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let coeff = self.data[r * width + col];
                if coeff > PIVOT_EPS {
                    let ratio = self.rhs(r) / coeff;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - 1e-12
                                || (ratio < lratio + 1e-12 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leave else {
                return Ok(RunResult::Unbounded);
            };
            if ratio.abs() <= 1e-12 {
                degen_streak += 1;
                if degen_streak > degen_limit {
                    bland = true;
                }
            } else {
                degen_streak = 0;
            }
            self.pivot(row, col);
            let _ = iter;
        }
        Err(SimplexError::IterationLimit(iter_cap))
    }
}
