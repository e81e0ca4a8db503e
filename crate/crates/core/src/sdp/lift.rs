//! The lift-and-project step: multiply every row of a box polytope by x_i
//! and (1 - x_i), substitute x_i^2 -> x_i and x_i x_j -> w_ij, and collect
//! the linearized constraints over (x, W).

use crate::graph::Graph;
use crate::polytope::HPolytope;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("polytope box must sit inside the unit cube (u[{0}] = {1})")]
    BoxExceedsUnit(usize, f64),
}

/// One linearized constraint: `x_coefs . x + sum w_coefs * w_ij + constant >= 0`.
/// Diagonal lifted entries are already folded into x (w_ii = x_i), so the
/// pairs are strictly upper-triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct LinConstraint {
    pub x_coefs: Vec<f64>,
    /// (i, j, coef) with i < j.
    pub w_coefs: Vec<(usize, usize, f64)>,
    pub constant: f64,
}

impl LinConstraint {
    fn normalize(&mut self) {
        self.w_coefs.iter_mut().for_each(|t| {
            if t.0 > t.1 {
                std::mem::swap(&mut t.0, &mut t.1);
            }
        });
        self.w_coefs.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(self.w_coefs.len());
        for &(i, j, c) in &self.w_coefs {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += c,
                _ => merged.push((i, j, c)),
            }
        }
        merged.retain(|t| t.2.abs() > 1e-12);
        self.w_coefs = merged;
    }

    fn is_trivial(&self) -> bool {
        self.x_coefs.iter().all(|c| c.abs() <= 1e-12)
            && self.w_coefs.is_empty()
            && self.constant >= -1e-12
    }

    /// Scale-invariant fingerprint for deduplication.
    fn key(&self) -> Vec<(u8, u32, u32, i64)> {
        let mut scale = self.constant.abs();
        for c in &self.x_coefs {
            scale = scale.max(c.abs());
        }
        for &(_, _, c) in &self.w_coefs {
            scale = scale.max(c.abs());
        }
        if scale == 0.0 {
            scale = 1.0;
        }
        let q = |v: f64| (v / scale * 1e9).round() as i64;
        let mut key = Vec::with_capacity(self.x_coefs.len() + self.w_coefs.len() + 1);
        for (i, &c) in self.x_coefs.iter().enumerate() {
            if c.abs() > 1e-12 {
                key.push((0u8, i as u32, 0u32, q(c)));
            }
        }
        for &(i, j, c) in &self.w_coefs {
            key.push((1u8, i as u32, j as u32, q(c)));
        }
        key.push((2u8, 0, 0, q(self.constant)));
        key
    }

    /// Value at a concrete (x, W) pair; W must carry diag(W) = x.
    pub fn eval(&self, x: &[f64], w: &nalgebra::DMatrix<f64>) -> f64 {
        let mut v = self.constant;
        for (i, &c) in self.x_coefs.iter().enumerate() {
            v += c * x[i];
        }
        for &(i, j, c) in &self.w_coefs {
            v += c * w[(i, j)];
        }
        v
    }
}

/// Linearized constraint system over (x, W) with the diagonal link
/// diag(W) = x implied.
#[derive(Debug, Clone)]
pub struct LinearizedPolytope {
    pub n: usize,
    pub constraints: Vec<LinConstraint>,
}

/// Multiplies each polytope row (box rows included) by x_i and (1 - x_i)
/// for every i and linearizes. Constraints that reduce to `0 >= 0` are
/// dropped; duplicates are removed by coefficient hashing, first occurrence
/// kept, so the output order is deterministic.
pub fn ls_lift(p: &HPolytope) -> Result<LinearizedPolytope, LiftError> {
    let n = p.dim();
    for (i, &u) in p.u.iter().enumerate() {
        if u > 1.0 + 1e-12 {
            return Err(LiftError::BoxExceedsUnit(i, u));
        }
    }
    // Rows as (f, b) meaning f.x >= b, with the box rows appended.
    let mut rows: Vec<(Vec<f64>, f64)> = p
        .f
        .iter()
        .zip(&p.b)
        .map(|(f, &b)| (f.clone(), b))
        .collect();
    for k in 0..n {
        let mut f = vec![0.0; n];
        f[k] = 1.0;
        rows.push((f, 0.0)); // x_k >= 0
        let mut f = vec![0.0; n];
        f[k] = -1.0;
        rows.push((f, -p.u[k])); // u_k - x_k >= 0
    }

    let mut out: Vec<LinConstraint> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |mut c: LinConstraint| {
        c.normalize();
        if c.is_trivial() {
            return;
        }
        if seen.insert(c.key()) {
            out.push(c);
        }
    };

    for i in 0..n {
        for (f, b) in &rows {
            // x_i (f.x - b) >= 0
            let mut lifted = LinConstraint {
                x_coefs: vec![0.0; n],
                w_coefs: Vec::new(),
                constant: 0.0,
            };
            lifted.x_coefs[i] = f[i] - b;
            for (j, &fj) in f.iter().enumerate() {
                if j != i && fj != 0.0 {
                    lifted.w_coefs.push((i.min(j), i.max(j), fj));
                }
            }
            push(lifted);

            // (1 - x_i)(f.x - b) >= 0
            let mut lifted = LinConstraint {
                x_coefs: vec![0.0; n],
                w_coefs: Vec::new(),
                constant: -b,
            };
            for (j, &fj) in f.iter().enumerate() {
                if j != i {
                    lifted.x_coefs[j] = fj;
                }
            }
            lifted.x_coefs[i] += b;
            for (j, &fj) in f.iter().enumerate() {
                if j != i && fj != 0.0 {
                    lifted.w_coefs.push((i.min(j), i.max(j), -fj));
                }
            }
            push(lifted);
        }
    }
    Ok(LinearizedPolytope { n, constraints: out })
}

/// Which index convention to use when transcribing the two degree-row
/// families: the printed displays sum `a_ik` terms, while direct expansion
/// of the quoted products yields `a_jk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexReading {
    AsPrinted,
    Expanded,
}

/// Hand transcription of the seven displayed constraint families over all
/// ordered pairs (i, j). Diagonal lifted variables are folded via
/// w_ii = x_i, like everywhere else.
pub fn transcribed_pstar(g: &Graph, reading: IndexReading) -> LinearizedPolytope {
    let n = g.n();
    let mut out: Vec<LinConstraint> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |mut c: LinConstraint, out: &mut Vec<LinConstraint>| {
        c.normalize();
        if c.is_trivial() {
            return;
        }
        if seen.insert(c.key()) {
            out.push(c);
        }
    };
    // Adds coef * w_uv to a builder, folding diagonals into x.
    fn add_w(c: &mut LinConstraint, u: usize, v: usize, coef: f64) {
        if u == v {
            c.x_coefs[u] += coef;
        } else {
            c.w_coefs.push((u.min(v), u.max(v), coef));
        }
    }
    let blank = |n: usize| LinConstraint {
        x_coefs: vec![0.0; n],
        w_coefs: Vec::new(),
        constant: 0.0,
    };

    for i in 0..n {
        for j in 0..n {
            let dj = g.degree(j) as f64;
            // w_ij >= 0
            let mut c = blank(n);
            add_w(&mut c, i, j, 1.0);
            push(c, &mut out);
            // x_i - w_ij >= 0
            let mut c = blank(n);
            c.x_coefs[i] += 1.0;
            add_w(&mut c, i, j, -1.0);
            push(c, &mut out);
            // w_ij + 1 - x_i - x_j >= 0
            let mut c = blank(n);
            c.constant = 1.0;
            c.x_coefs[i] -= 1.0;
            c.x_coefs[j] -= 1.0;
            add_w(&mut c, i, j, 1.0);
            push(c, &mut out);
            // w_ij - x_i + sum_k a_jk w_ik >= 0
            let mut c = blank(n);
            c.x_coefs[i] -= 1.0;
            add_w(&mut c, i, j, 1.0);
            for k in 0..n {
                if g.has_edge(j, k) {
                    add_w(&mut c, i, k, 1.0);
                }
            }
            push(c, &mut out);
            // x_j + x_i - w_ij - 1 + sum_k a_jk (x_k - w_ik) >= 0
            let mut c = blank(n);
            c.constant = -1.0;
            c.x_coefs[i] += 1.0;
            c.x_coefs[j] += 1.0;
            add_w(&mut c, i, j, -1.0);
            for k in 0..n {
                if g.has_edge(j, k) {
                    c.x_coefs[k] += 1.0;
                    add_w(&mut c, i, k, -1.0);
                }
            }
            push(c, &mut out);
            // (d_j+1)(x_i - w_ij) - sum_k a_.k w_ik >= 0
            let deg_row = match reading {
                IndexReading::AsPrinted => i,
                IndexReading::Expanded => j,
            };
            let mut c = blank(n);
            c.x_coefs[i] += dj + 1.0;
            add_w(&mut c, i, j, -(dj + 1.0));
            for k in 0..n {
                if g.has_edge(deg_row, k) {
                    add_w(&mut c, i, k, -1.0);
                }
            }
            push(c, &mut out);
            // (d_j+1)(1 + w_ij - x_j - x_i) + sum_k a_.k (w_ik - x_k) >= 0
            let mut c = blank(n);
            c.constant = dj + 1.0;
            c.x_coefs[i] -= dj + 1.0;
            c.x_coefs[j] -= dj + 1.0;
            add_w(&mut c, i, j, dj + 1.0);
            for k in 0..n {
                if g.has_edge(deg_row, k) {
                    c.x_coefs[k] -= 1.0;
                    add_w(&mut c, i, k, 1.0);
                }
            }
            push(c, &mut out);
        }
    }
    LinearizedPolytope { n, constraints: out }
}

/// Set comparison between the product-form lift of the
/// maximal-independent-set polytope and a transcription of the displayed
/// families. The difference is reported, not resolved.
#[derive(Debug, Clone)]
pub struct PstarComparison {
    pub shared: usize,
    pub only_generated: Vec<LinConstraint>,
    pub only_transcribed: Vec<LinConstraint>,
}

pub fn compare_pstar_readings(g: &Graph, reading: IndexReading) -> PstarComparison {
    let generated = ls_lift(&crate::polytope::maxis_polytope(g)).expect("maxis box is unit");
    let transcribed = transcribed_pstar(g, reading);
    let gen_keys: std::collections::HashSet<_> =
        generated.constraints.iter().map(|c| c.key()).collect();
    let tr_keys: std::collections::HashSet<_> =
        transcribed.constraints.iter().map(|c| c.key()).collect();
    let shared = gen_keys.intersection(&tr_keys).count();
    PstarComparison {
        shared,
        only_generated: generated
            .constraints
            .into_iter()
            .filter(|c| !tr_keys.contains(&c.key()))
            .collect(),
        only_transcribed: transcribed
            .constraints
            .into_iter()
            .filter(|c| !gen_keys.contains(&c.key()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, GraphFamily};
    use crate::polytope::{frac_polytope, maxis_polytope, HPolytope, PolytopeKind};
    use nalgebra::DMatrix;

    fn unit_box(n: usize) -> HPolytope {
        HPolytope { f: vec![], b: vec![], u: vec![1.0; n], kind: PolytopeKind::Raw }
    }

    fn has_constraint(lp: &LinearizedPolytope, c: &LinConstraint) -> bool {
        let mut c = c.clone();
        c.normalize();
        lp.constraints.iter().any(|d| d.key() == c.key())
    }

    #[test]
    fn box_lift_families() {
        let lp = ls_lift(&unit_box(2)).unwrap();
        // w12 >= 0
        assert!(has_constraint(&lp, &LinConstraint {
            x_coefs: vec![0.0, 0.0],
            w_coefs: vec![(0, 1, 1.0)],
            constant: 0.0,
        }));
        // x1 >= w12 and x2 >= w12
        assert!(has_constraint(&lp, &LinConstraint {
            x_coefs: vec![1.0, 0.0],
            w_coefs: vec![(0, 1, -1.0)],
            constant: 0.0,
        }));
        assert!(has_constraint(&lp, &LinConstraint {
            x_coefs: vec![0.0, 1.0],
            w_coefs: vec![(0, 1, -1.0)],
            constant: 0.0,
        }));
        // w12 + 1 >= x1 + x2
        assert!(has_constraint(&lp, &LinConstraint {
            x_coefs: vec![-1.0, -1.0],
            w_coefs: vec![(0, 1, 1.0)],
            constant: 1.0,
        }));
    }

    #[test]
    fn frac_k2_forces_zero_product() {
        // x1 + x2 <= 1 times x1 linearizes to -w12 >= 0.
        let g = named_graph(GraphFamily::Complete, 2).unwrap();
        let lp = ls_lift(&frac_polytope(&g)).unwrap();
        assert!(has_constraint(&lp, &LinConstraint {
            x_coefs: vec![0.0, 0.0],
            w_coefs: vec![(0, 1, -1.0)],
            constant: 0.0,
        }));
    }

    #[test]
    fn binary_points_with_rank_one_w_satisfy_lift() {
        // Every indicator of a maximal independent set, paired with W = xx',
        // must satisfy every lifted constraint.
        for (family, n) in [(GraphFamily::Path, 4), (GraphFamily::Cycle, 5)] {
            let g = named_graph(family, n).unwrap();
            let lp = ls_lift(&maxis_polytope(&g)).unwrap();
            let family_sets = crate::oracle::enumerate_maximal_independent_sets(&g).unwrap();
            for s in family_sets.sets {
                let x = crate::mask_to_vector(s, n);
                let w = DMatrix::from_fn(n, n, |i, j| x[i] * x[j]);
                for c in &lp.constraints {
                    assert!(
                        c.eval(&x, &w) >= -1e-9,
                        "constraint violated at binary point {s:b}: {c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn reject_box_above_unit() {
        let p = HPolytope { f: vec![], b: vec![], u: vec![2.0], kind: PolytopeKind::Raw };
        assert!(matches!(ls_lift(&p), Err(LiftError::BoxExceedsUnit(0, _))));
    }

    #[test]
    fn pstar_readings_differ_only_in_degree_rows() {
        // The first five families coincide with the product-form lift; the
        // two degree-row families differ from the printed displays by an
        // added multiple of the x_i >= w_ij / box-product rows, under either
        // index reading. The comparison reports this; nothing is silently
        // dropped.
        let g = named_graph(GraphFamily::Path, 3).unwrap();
        let cmp = compare_pstar_readings(&g, IndexReading::Expanded);
        assert!(cmp.shared > 0);
        // Generated-only rows must all be degree-row products: they carry
        // the d_j coefficient pattern.
        assert!(!cmp.only_generated.is_empty());
        assert!(!cmp.only_transcribed.is_empty());

        // Transcribed (19) = generated (19') + (x_i - w_ij): verify on one
        // concrete instance (i=0, j=1 of the path, d_1 = 2).
        let gen = ls_lift(&maxis_polytope(&g)).unwrap();
        let mut expected = LinConstraint {
            // (d_1+1)(x_0 - w_01) - sum_k a_1k w_0k with the j-indexed sum:
            // 3(x_0 - w_01) - (w_00 + w_02) = 2 x_0 - 3 w_01 - w_02.
            x_coefs: vec![2.0, 0.0, 0.0],
            w_coefs: vec![(0, 1, -3.0), (0, 2, -1.0)],
            constant: 0.0,
        };
        expected.normalize();
        let tr = transcribed_pstar(&g, IndexReading::Expanded);
        assert!(has_constraint(&tr, &expected));
        // The generated counterpart has d_j instead of d_j + 1.
        let mut gen_row = LinConstraint {
            x_coefs: vec![1.0, 0.0, 0.0],
            w_coefs: vec![(0, 1, -2.0), (0, 2, -1.0)],
            constant: 0.0,
        };
        gen_row.normalize();
        assert!(has_constraint(&gen, &gen_row));
        assert!(!has_constraint(&tr, &gen_row));
    }

    #[test]
    fn dedup_is_deterministic() {
        let g = named_graph(GraphFamily::Cycle, 5).unwrap();
        let a = ls_lift(&maxis_polytope(&g)).unwrap();
        let b = ls_lift(&maxis_polytope(&g)).unwrap();
        assert_eq!(a.constraints, b.constraints);
    }
}
