//! Independence invariants of graphs through the solution set of the linear
//! complementarity problem LCP(A+I, -e), with exhaustive combinatorial
//! oracles, an exact LP/ILP layer, and Lovasz theta variants computed by
//! lift-and-project semidefinite relaxations.

pub mod graph;
pub mod lcp;
pub mod milp;
pub mod oracle;
pub mod polytope;
pub mod sdp;
pub mod simplex;

/// Expands a vertex bitmask into a 0/1 vector of length `n`.
pub fn mask_to_vector(mask: u64, n: usize) -> Vec<f64> {
    (0..n).map(|i| ((mask >> i) & 1) as f64).collect()
}

/// Collapses a (near-)binary vector into a bitmask; entries must be within
/// `tol` of 0 or 1.
pub fn vector_to_mask(x: &[f64], tol: f64) -> Option<u64> {
    let mut mask = 0u64;
    for (i, &v) in x.iter().enumerate() {
        if (v - 1.0).abs() <= tol {
            mask |= 1 << i;
        } else if v.abs() > tol {
            return None;
        }
    }
    Some(mask)
}
