//! Dense primal-dual path-following solver for small semidefinite programs.
//!
//! The problem form is
//!
//! ```text
//!   maximize    c . s
//!   subject to  E s = b,   G s >= h,   mat(s) PSD
//! ```
//!
//! where `s` lists the upper-triangle entries of one symmetric matrix block
//! and inequality slacks are nonnegative scalars (1x1 cone blocks). Because
//! the matrix block is small while the lifted constraint count is large, the
//! Newton system is assembled in the entry space `s` (dimension p(p+1)/2)
//! rather than in the constraint space, and factored densely. Search
//! directions are Mehrotra-style predictor-corrector with the dual-scaled
//! linearization of `Z M = mu I`.

mod lift;
mod theta;

pub use lift::{
    compare_pstar_readings, ls_lift, transcribed_pstar, IndexReading, LinConstraint,
    LinearizedPolytope, PstarComparison,
};
pub use theta::{
    max_l1_over_lifted, table_text, theta_frac, theta_lovasz, theta_prime, theta_star,
    LiftedOptimum, TableRow, ThetaReport, ThetaVariant,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_BLOCK_DIM: usize = 35;
pub const MAX_CONSTRAINTS: usize = 3000;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("PSD block dimension {0} exceeds the limit {MAX_BLOCK_DIM}")]
    BlockTooLarge(usize),
    #[error("{0} constraints exceed the limit {MAX_CONSTRAINTS}")]
    TooManyConstraints(usize),
    #[error("constraint references entry ({0},{1}) outside the block")]
    BadEntry(usize, usize),
    #[error("no convergence after {iterations} iterations (best gap {gap:.3e})")]
    NoConvergence { iterations: usize, gap: f64 },
    #[error("KKT system is numerically singular at iteration {0}")]
    Singular(usize),
}

/// Linear functional over the entries of a symmetric matrix: the value is
/// `sum coef * Y[i][j]` over stored `(i, j, coef)` with `i <= j`, each
/// off-diagonal entry counted once.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EntryExpr {
    pub terms: Vec<(usize, usize, f64)>,
}

impl EntryExpr {
    pub fn new(mut terms: Vec<(usize, usize, f64)>) -> Self {
        for t in &mut terms {
            if t.0 > t.1 {
                std::mem::swap(&mut t.0, &mut t.1);
            }
        }
        // Merge duplicate entries.
        terms.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(terms.len());
        for (i, j, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += c,
                _ => merged.push((i, j, c)),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        Self { terms: merged }
    }

    /// The functional `<A, Y>` for a symmetric matrix A: diagonal entries
    /// keep their coefficient, off-diagonal pairs fold into 2 A_ij.
    pub fn from_symmetric(a: &DMatrix<f64>) -> Self {
        let p = a.nrows();
        let mut terms = Vec::new();
        for i in 0..p {
            for j in i..p {
                let coef = if i == j { a[(i, j)] } else { 2.0 * a[(i, j)] };
                if coef != 0.0 {
                    terms.push((i, j, coef));
                }
            }
        }
        Self { terms }
    }

    pub fn eval(&self, y: &DMatrix<f64>) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * y[(i, j)]).sum()
    }
}

/// One PSD block with equality and inequality constraints on its entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdpProblem {
    pub block_dim: usize,
    /// Maximized.
    pub objective: EntryExpr,
    pub equalities: Vec<(EntryExpr, f64)>,
    pub inequalities: Vec<(EntryExpr, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct SdpSettings {
    /// Gate on the relative duality gap.
    pub tol_gap: f64,
    /// Gate on primal and dual residuals.
    pub tol_feas: f64,
    /// Polish target on complementarity, relative to the objective scale.
    /// Iterations continue past the gap/feasibility gates until either this
    /// is met or progress stalls; the best qualifying iterate is returned.
    /// Small mu matters downstream: active-at-optimum entries of the primal
    /// block shrink with it.
    pub tol_mu: f64,
    pub max_iter: usize,
}

impl Default for SdpSettings {
    fn default() -> Self {
        Self { tol_gap: 1e-7, tol_feas: 1e-7, tol_mu: 1e-12, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdpStatus {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SdpOutcome {
    pub status: SdpStatus,
    /// Primal objective c.s at the final iterate.
    pub value: f64,
    pub dual_value: f64,
    /// Relative duality gap |primal - dual| / (1 + |primal|).
    pub gap: f64,
    pub iterations: usize,
    pub primal_infeas: f64,
    pub dual_infeas: f64,
    /// Average complementarity at the returned iterate.
    pub complementarity: f64,
    /// The matrix block at the final iterate.
    pub matrix: DMatrix<f64>,
}

struct Indexer {
    pairs: Vec<(usize, usize)>,
    of: Vec<Vec<usize>>,
}

impl Indexer {
    fn new(p: usize) -> Self {
        let mut pairs = Vec::with_capacity(p * (p + 1) / 2);
        let mut of = vec![vec![0; p]; p];
        for i in 0..p {
            for j in i..p {
                of[i][j] = pairs.len();
                of[j][i] = pairs.len();
                pairs.push((i, j));
            }
        }
        Self { pairs, of }
    }

    fn len(&self) -> usize {
        self.pairs.len()
    }
}

fn mat_of(s: &DVector<f64>, ix: &Indexer, p: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(p, p);
    for (k, &(i, j)) in ix.pairs.iter().enumerate() {
        m[(i, j)] = s[k];
        m[(j, i)] = s[k];
    }
    m
}

/// Gradient of <Z, mat(s)> with respect to s: diagonal entries once,
/// off-diagonal entries twice.
fn matstar(z: &DMatrix<f64>, ix: &Indexer) -> DVector<f64> {
    DVector::from_iterator(
        ix.len(),
        ix.pairs.iter().map(|&(i, j)| if i == j { z[(i, j)] } else { 2.0 * z[(i, j)] }),
    )
}

/// Largest step in [0, cap] keeping `m + alpha d` positive definite,
/// computed from the generalized eigenvalues of (m, d).
fn psd_max_step(m: &DMatrix<f64>, d: &DMatrix<f64>, cap: f64) -> f64 {
    let chol = match m.clone().cholesky() {
        Some(c) => c,
        None => return 0.0,
    };
    let l_inv = chol.l().try_inverse().expect("triangular inverse");
    let s = &l_inv * d * l_inv.transpose();
    let sym = (&s + s.transpose()) * 0.5;
    let eigs = sym.symmetric_eigenvalues();
    let lam_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if lam_min >= 0.0 {
        cap
    } else {
        cap.min(-1.0 / lam_min)
    }
}

fn vec_max_step(v: &DVector<f64>, d: &DVector<f64>, cap: f64) -> f64 {
    let mut alpha = cap;
    for (vi, di) in v.iter().zip(d.iter()) {
        if *di < 0.0 {
            alpha = alpha.min(-vi / di);
        }
    }
    alpha
}

pub fn sdp_solve(prob: &SdpProblem, settings: &SdpSettings) -> Result<SdpOutcome, SdpError> {
    let p = prob.block_dim;
    if p > MAX_BLOCK_DIM {
        return Err(SdpError::BlockTooLarge(p));
    }
    let m_eq = prob.equalities.len();
    let n_in = prob.inequalities.len();
    if m_eq + n_in > MAX_CONSTRAINTS {
        return Err(SdpError::TooManyConstraints(m_eq + n_in));
    }
    let ix = Indexer::new(p);
    let t = ix.len();
    for (expr, _) in prob.equalities.iter().chain(&prob.inequalities) {
        for &(i, j, _) in &expr.terms {
            if i >= p || j >= p {
                return Err(SdpError::BadEntry(i, j));
            }
        }
    }

    let mut c = DVector::zeros(t);
    for &(i, j, coef) in &prob.objective.terms {
        c[ix.of[i][j]] += coef;
    }
    let mut e_mat = DMatrix::<f64>::zeros(m_eq, t);
    let mut b = DVector::zeros(m_eq);
    for (r, (expr, rhs)) in prob.equalities.iter().enumerate() {
        for &(i, j, coef) in &expr.terms {
            e_mat[(r, ix.of[i][j])] += coef;
        }
        b[r] = *rhs;
    }
    let g_rows: Vec<Vec<(usize, f64)>> = prob
        .inequalities
        .iter()
        .map(|(expr, _)| {
            let mut row: Vec<(usize, f64)> = expr
                .terms
                .iter()
                .map(|&(i, j, coef)| (ix.of[i][j], coef))
                .collect();
            row.sort_by_key(|&(k, _)| k);
            row
        })
        .collect();
    let h = DVector::from_iterator(n_in, prob.inequalities.iter().map(|(_, rhs)| *rhs));

    let g_dot = |s: &DVector<f64>, l: usize| -> f64 {
        g_rows[l].iter().map(|&(k, coef)| coef * s[k]).sum()
    };
    let g_mul = |s: &DVector<f64>| -> DVector<f64> {
        DVector::from_iterator(n_in, (0..n_in).map(|l| g_dot(s, l)))
    };
    let gt_mul = |v: &DVector<f64>| -> DVector<f64> {
        let mut out = DVector::zeros(t);
        for (l, row) in g_rows.iter().enumerate() {
            let vl = v[l];
            if vl != 0.0 {
                for &(k, coef) in row {
                    out[k] += coef * vl;
                }
            }
        }
        out
    };

    // Infeasible start on the identity.
    let mut s = DVector::zeros(t);
    for i in 0..p {
        s[ix.of[i][i]] = 1.0;
    }
    let mut w = DVector::from_element(n_in.max(0), 1.0);
    for l in 0..n_in {
        w[l] = (g_dot(&s, l) - h[l]).max(1.0);
    }
    let mut lam = DVector::from_element(n_in, 1.0);
    let mut y = DVector::zeros(m_eq);
    let mut z = DMatrix::<f64>::identity(p, p);

    let nu = (n_in + p) as f64;
    let obj_scale = 1.0 + c.amax();
    let mut best_gap = f64::INFINITY;
    // Best iterate passing the gap/feasibility gates, kept so that late
    // numerical degradation near the boundary cannot lose a good answer.
    let mut snapshot: Option<SdpOutcome> = None;
    let mut mu_mark = f64::INFINITY;
    let mut stall = 0usize;
    let trace = std::env::var_os("LCPGRAPH_SDP_TRACE").is_some();

    for iter in 0..settings.max_iter {
        let m = mat_of(&s, &ix, p);

        let pobj = c.dot(&s);
        let dobj = b.dot(&y) - h.dot(&lam);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        best_gap = best_gap.min(gap);

        let r_p = &b - &e_mat * &s;
        let r_w = g_mul(&s) - &h - &w;
        let r_d = &c - e_mat.transpose() * &y + gt_mul(&lam) + matstar(&z, &ix);
        let mu = (lam.dot(&w) + (&z * &m).trace()) / nu;

        let pinf = r_p.amax().max(if n_in > 0 { r_w.amax() } else { 0.0 });
        let dinf = r_d.amax() / obj_scale;
        if trace {
            eprintln!(
                "sdp iter {iter:3}: pobj {pobj:+.9e} dobj {dobj:+.9e} gap {gap:.2e} \
                 pinf {pinf:.2e} dinf {dinf:.2e} mu {mu:.2e}"
            );
        }
        let gates_met =
            gap <= settings.tol_gap && pinf <= settings.tol_feas && dinf <= settings.tol_feas;
        if gates_met {
            // Prefer the iterate closest to the boundary, then by gap.
            let better = snapshot
                .as_ref()
                .map_or(true, |old| (mu, gap) < (old.complementarity, old.gap));
            if better {
                snapshot = Some(SdpOutcome {
                    status: SdpStatus::Converged,
                    value: pobj,
                    dual_value: dobj,
                    gap,
                    iterations: iter,
                    primal_infeas: pinf,
                    dual_infeas: dinf,
                    complementarity: mu,
                    matrix: m.clone(),
                });
            }
            if mu <= settings.tol_mu * obj_scale {
                return Ok(snapshot.expect("snapshot set on the converged iterate"));
            }
        }
        // Stop polishing once mu stops making headway.
        if mu < 0.7 * mu_mark {
            mu_mark = mu;
            stall = 0;
        } else {
            stall += 1;
            if stall >= 12 {
                break;
            }
        }
        let m_chol = match m.clone().cholesky() {
            Some(c) => c,
            // The iterate collapsed onto the boundary.
            None => break,
        };
        let m_inv = m_chol.inverse();

        // Newton matrix in entry space: H = G_c' D_c G_c + (Z x Minv) with
        // the symmetric-basis weighting. Only inequality rows with small
        // multiplier-to-slack ratio are condensed into H; rows active at the
        // optimum (ratio blowing up as mu -> 0) stay in an augmented block
        // where their diagonal w/lam is tiny and harmless, which keeps the
        // factorization accurate enough for 1e-8 dual residuals.
        let mut big_h = DMatrix::<f64>::zeros(t, t);
        for k1 in 0..t {
            let (a, bb) = ix.pairs[k1];
            for k2 in k1..t {
                let (cc, d) = ix.pairs[k2];
                let v = if a != bb && cc != d {
                    z[(bb, cc)] * m_inv[(d, a)]
                        + z[(bb, d)] * m_inv[(cc, a)]
                        + z[(a, cc)] * m_inv[(d, bb)]
                        + z[(a, d)] * m_inv[(cc, bb)]
                } else if a == bb && cc != d {
                    z[(a, cc)] * m_inv[(d, a)] + z[(a, d)] * m_inv[(cc, a)]
                } else if a != bb && cc == d {
                    z[(bb, cc)] * m_inv[(cc, a)] + z[(a, cc)] * m_inv[(cc, bb)]
                } else {
                    z[(a, cc)] * m_inv[(cc, a)]
                };
                big_h[(k1, k2)] = v;
                big_h[(k2, k1)] = v;
            }
        }
        let dvec: Vec<f64> = (0..n_in).map(|l| lam[l] / w[l]).collect();
        let aug_rows: Vec<usize> = (0..n_in).filter(|&l| dvec[l] >= 1.0).collect();
        let is_aug: Vec<bool> = {
            let mut v = vec![false; n_in];
            for &l in &aug_rows {
                v[l] = true;
            }
            v
        };
        for (l, row) in g_rows.iter().enumerate() {
            if is_aug[l] {
                continue;
            }
            let dl = dvec[l];
            for &(k1, c1) in row {
                for &(k2, c2) in row {
                    big_h[(k1, k2)] += dl * c1 * c2;
                }
            }
        }
        // Tiny Tikhonov term guards the factorization near the boundary.
        for k in 0..t {
            big_h[(k, k)] += 1e-13;
        }

        let n_aug = aug_rows.len();
        let dim = t + m_eq + n_aug;
        let mut kkt = DMatrix::<f64>::zeros(dim, dim);
        kkt.view_mut((0, 0), (t, t)).copy_from(&big_h);
        if m_eq > 0 {
            kkt.view_mut((0, t), (t, m_eq)).copy_from(&e_mat.transpose());
            kkt.view_mut((t, 0), (m_eq, t)).copy_from(&e_mat);
        }
        for (r, &l) in aug_rows.iter().enumerate() {
            for &(k, coef) in &g_rows[l] {
                kkt[(k, t + m_eq + r)] = -coef;
                kkt[(t + m_eq + r, k)] = coef;
            }
            kkt[(t + m_eq + r, t + m_eq + r)] = w[l] / lam[l];
        }
        let kkt_lu = kkt.clone().lu();

        let solve_kkt = |rhs: &DVector<f64>| -> Option<DVector<f64>> {
            let mut sol = kkt_lu.solve(rhs)?;
            // Two rounds of iterative refinement.
            for _ in 0..2 {
                let resid = rhs - &kkt * &sol;
                match kkt_lu.solve(&resid) {
                    Some(corr) => sol += corr,
                    None => break,
                }
            }
            Some(sol)
        };

        // Builds the reduced RHS and recovers the full direction for a given
        // centering target and corrector terms.
        let direction = |sigma_mu: f64,
                         comp_corr: &DVector<f64>,
                         psd_corr: &DMatrix<f64>|
         -> Option<(DVector<f64>, DVector<f64>, DVector<f64>, DVector<f64>, DMatrix<f64>)> {
            // v1 = sigma*mu/w - lam - cc/w ; v2 = mat*(sigma*mu*Minv - Z - sym(corr*Minv))
            let mut v1 = DVector::zeros(n_in);
            for l in 0..n_in {
                v1[l] = sigma_mu / w[l] - lam[l] - comp_corr[l] / w[l];
            }
            let corr_m = psd_corr * &m_inv;
            let corr_sym = (&corr_m + corr_m.transpose()) * 0.5;
            let z_target = &m_inv * sigma_mu - &z - &corr_sym;
            let v2 = matstar(&z_target, &ix);

            let mut rhs_top = &r_d + v2;
            if n_in > 0 {
                let mut adj = DVector::zeros(n_in);
                for l in 0..n_in {
                    if !is_aug[l] {
                        adj[l] = v1[l] - dvec[l] * r_w[l];
                    }
                }
                rhs_top += gt_mul(&adj);
            }
            let mut rhs = DVector::zeros(dim);
            rhs.rows_mut(0, t).copy_from(&rhs_top);
            if m_eq > 0 {
                rhs.rows_mut(t, m_eq).copy_from(&r_p);
            }
            for (r, &l) in aug_rows.iter().enumerate() {
                rhs[t + m_eq + r] =
                    sigma_mu / lam[l] - w[l] - comp_corr[l] / lam[l] - r_w[l];
            }
            let sol = solve_kkt(&rhs)?;
            let ds = sol.rows(0, t).into_owned();
            let dy = sol.rows(t, m_eq).into_owned();
            let dw = if n_in > 0 { g_mul(&ds) + &r_w } else { DVector::zeros(0) };
            let mut dlam = DVector::zeros(n_in);
            for l in 0..n_in {
                dlam[l] = v1[l] - dvec[l] * dw[l];
            }
            for (r, &l) in aug_rows.iter().enumerate() {
                dlam[l] = sol[t + m_eq + r];
            }
            let dm = mat_of(&ds, &ix, p);
            let zdm = &z * &dm * &m_inv;
            let dz_raw = &m_inv * sigma_mu - &z - &zdm - &corr_sym;
            let dz = (&dz_raw + dz_raw.transpose()) * 0.5;
            Some((ds, dy, dw, dlam, dz))
        };

        let zero_corr_v = DVector::zeros(n_in);
        let zero_corr_m = DMatrix::zeros(p, p);
        let (ds_a, _dy_a, dw_a, dlam_a, dz_a) = direction(0.0, &zero_corr_v, &zero_corr_m)
            .ok_or(SdpError::Singular(iter))?;

        // The affine step length decides the centering weight.
        let dm_a = mat_of(&ds_a, &ix, p);
        let a_aff = vec_max_step(&w, &dw_a, 1.0)
            .min(psd_max_step(&m, &dm_a, 1.0))
            .min(vec_max_step(&lam, &dlam_a, 1.0))
            .min(psd_max_step(&z, &dz_a, 1.0));
        let mu_aff = {
            let wn = &w + &dw_a * (0.99 * a_aff);
            let ln = &lam + &dlam_a * (0.99 * a_aff);
            let mn = &m + &dm_a * (0.99 * a_aff);
            let zn = &z + &dz_a * (0.99 * a_aff);
            (ln.dot(&wn) + (&zn * &mn).trace()).max(0.0) / nu
        };
        let mut sigma = ((mu_aff / mu).powi(3)).clamp(1e-6, 0.9);
        if pinf.max(dinf) > 10.0 * mu {
            // Residuals lag complementarity: hold the center so the
            // feasibility corrections can take full steps.
            sigma = sigma.max(0.5);
        }

        let comp_corr = DVector::from_iterator(n_in, (0..n_in).map(|l| dlam_a[l] * dw_a[l]));
        let psd_corr = &dz_a * &dm_a;
        let (ds, dy, dw, dlam, dz) = direction(sigma * mu, &comp_corr, &psd_corr)
            .ok_or(SdpError::Singular(iter))?;

        let dm = mat_of(&ds, &ix, p);
        let gamma = 0.98;
        // A common primal-dual step keeps the infeasibility residuals and
        // the complementarity shrinking together; separate steps let one
        // side race ahead and strand the other.
        let mut alpha = (gamma
            * vec_max_step(&w, &dw, 1.0 / gamma)
                .min(psd_max_step(&m, &dm, 1.0 / gamma))
                .min(vec_max_step(&lam, &dlam, 1.0 / gamma))
                .min(psd_max_step(&z, &dz, 1.0 / gamma)))
        .min(1.0);
        // The eigenvalue step bound is exact in exact arithmetic; verify the
        // factorizations numerically and back off on rounding failures.
        let mut ok = false;
        for _ in 0..30 {
            if (&m + &dm * alpha).cholesky().is_some()
                && (&z + &dz * alpha).cholesky().is_some()
            {
                ok = true;
                break;
            }
            alpha *= 0.5;
        }
        if !ok {
            break;
        }

        s += &ds * alpha;
        w += &dw * alpha;
        y += &dy * alpha;
        lam += &dlam * alpha;
        z += &dz * alpha;
    }

    match snapshot {
        Some(out) => Ok(out),
        None => Err(SdpError::NoConvergence { iterations: settings.max_iter, gap: best_gap }),
    }
}
