//! Exhaustive ground truth for independence invariants. Everything here is
//! definition-level brute force; the rest of the crate is checked against it.

use crate::graph::Graph;
use thiserror::Error;

/// Largest order the exhaustive routines accept.
pub const ORACLE_LIMIT: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph order {0} exceeds the brute-force limit {ORACLE_LIMIT}")]
    TooLarge(usize),
}

/// Vertex subsets are bitmasks over 0-based vertices.
pub fn is_independent(g: &Graph, s: u64) -> bool {
    let mut bits = s;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        if g.neighbors(v) & s != 0 {
            return false;
        }
        bits &= bits - 1;
    }
    true
}

/// Independent and not extendable by any single vertex.
pub fn is_maximal_independent(g: &Graph, s: u64) -> bool {
    if !is_independent(g, s) {
        return false;
    }
    let mut outside = g.full_mask() & !s;
    while outside != 0 {
        let v = outside.trailing_zeros() as usize;
        if g.neighbors(v) & s == 0 {
            return false;
        }
        outside &= outside - 1;
    }
    true
}

/// Every vertex outside `s` has a neighbor inside `s`.
pub fn is_dominating(g: &Graph, s: u64) -> bool {
    let mut outside = g.full_mask() & !s;
    while outside != 0 {
        let v = outside.trailing_zeros() as usize;
        if g.neighbors(v) & s == 0 {
            return false;
        }
        outside &= outside - 1;
    }
    true
}

/// The family of all maximal independent sets with per-set flags.
#[derive(Debug, Clone)]
pub struct IndependentSetFamily {
    /// Sorted bitmasks of the maximal independent sets.
    pub sets: Vec<u64>,
    /// Cardinality of the largest member.
    pub alpha: usize,
    /// Cardinality of the smallest member.
    pub beta: usize,
}

impl IndependentSetFamily {
    pub fn maximum_sets(&self) -> impl Iterator<Item = u64> + '_ {
        let alpha = self.alpha;
        self.sets.iter().copied().filter(move |s| s.count_ones() as usize == alpha)
    }
}

/// All maximal independent sets, found as maximal cliques of the complement
/// via pivoting recursion.
pub fn enumerate_maximal_independent_sets(g: &Graph) -> Result<IndependentSetFamily, OracleError> {
    if g.n() > ORACLE_LIMIT {
        return Err(OracleError::TooLarge(g.n()));
    }
    let comp = g.complement();
    let mut sets = Vec::new();
    bron_kerbosch(&comp, 0, comp.full_mask(), 0, &mut sets);
    sets.sort_unstable();
    let alpha = sets.iter().map(|s| s.count_ones() as usize).max().unwrap_or(0);
    let beta = sets.iter().map(|s| s.count_ones() as usize).min().unwrap_or(0);
    Ok(IndependentSetFamily { sets, alpha, beta })
}

fn bron_kerbosch(g: &Graph, r: u64, p: u64, x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // Pivot on the candidate or excluded vertex covering most of P.
    let pivot = {
        let mut best = usize::MAX;
        let mut best_cover = 0u32;
        let mut bits = p | x;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            let cover = (g.neighbors(v) & p).count_ones();
            if best == usize::MAX || cover > best_cover {
                best = v;
                best_cover = cover;
            }
            bits &= bits - 1;
        }
        best
    };
    let mut candidates = p & !g.neighbors(pivot);
    let mut p = p;
    let mut x = x;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u64 << v;
        candidates &= candidates - 1;
        bron_kerbosch(g, r | bit, p & g.neighbors(v), x & g.neighbors(v), out);
        p &= !bit;
        x |= bit;
    }
}

/// The oracle's oracle: a plain 2^n subset filter. Kept independent of the
/// pivoting enumeration so the two can cross-check each other.
pub fn maximal_independent_sets_naive(g: &Graph) -> Result<Vec<u64>, OracleError> {
    if g.n() > 22 {
        return Err(OracleError::TooLarge(g.n()));
    }
    let full = g.full_mask();
    let mut sets = Vec::new();
    for s in 0..=full {
        if is_maximal_independent(g, s) {
            sets.push(s);
        }
        if s == full {
            break;
        }
    }
    Ok(sets)
}

/// Independence number.
pub fn alpha_brute(g: &Graph) -> Result<usize, OracleError> {
    Ok(enumerate_maximal_independent_sets(g)?.alpha)
}

/// Maximum weight of an independent set. With non-negative weights the
/// maximum is attained at a maximal set, so the family suffices.
pub fn alpha_weighted_brute(g: &Graph, w: &[f64]) -> Result<f64, OracleError> {
    debug_assert_eq!(w.len(), g.n());
    debug_assert!(w.iter().all(|&wi| wi >= 0.0));
    let family = enumerate_maximal_independent_sets(g)?;
    Ok(family
        .sets
        .iter()
        .map(|&s| mask_weight(s, w))
        .fold(0.0, f64::max))
}

/// Independent domination number: smallest maximal independent set.
pub fn beta_brute(g: &Graph) -> Result<usize, OracleError> {
    Ok(enumerate_maximal_independent_sets(g)?.beta)
}

/// All maximal independent sets share one cardinality.
pub fn is_well_covered(g: &Graph) -> Result<bool, OracleError> {
    let family = enumerate_maximal_independent_sets(g)?;
    Ok(family.alpha == family.beta)
}

/// Well-covered with the common cardinality equal to half the order.
pub fn is_very_well_covered(g: &Graph) -> Result<bool, OracleError> {
    let family = enumerate_maximal_independent_sets(g)?;
    Ok(family.alpha == family.beta && 2 * family.alpha == g.n())
}

fn mask_weight(mask: u64, w: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        s += w[v];
        bits &= bits - 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{labeled_graphs, named_graph, GraphFamily};

    fn path(n: usize) -> Graph {
        named_graph(GraphFamily::Path, n).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        named_graph(GraphFamily::Cycle, n).unwrap()
    }

    #[test]
    fn p3_subset_flags() {
        let g = path(3);
        let s13 = 0b101;
        assert!(is_independent(&g, s13));
        assert!(is_maximal_independent(&g, s13));
        assert!(is_dominating(&g, s13));

        let s1 = 0b001;
        assert!(is_independent(&g, s1));
        assert!(!is_maximal_independent(&g, s1));
        assert!(!is_dominating(&g, s1));
    }

    #[test]
    fn c5_maximal_pairs() {
        let g = cycle(5);
        assert!(is_maximal_independent(&g, 0b00101));
        let family = enumerate_maximal_independent_sets(&g).unwrap();
        assert!(family.sets.iter().all(|s| s.count_ones() == 2));
        assert_eq!(family.sets.len(), 5);
    }

    #[test]
    fn p3_family() {
        let family = enumerate_maximal_independent_sets(&path(3)).unwrap();
        assert_eq!(family.sets, vec![0b010, 0b101]);
    }

    #[test]
    fn c8_family_has_size_3_and_4() {
        let family = enumerate_maximal_independent_sets(&cycle(8)).unwrap();
        assert_eq!(family.alpha, 4);
        assert_eq!(family.beta, 3);
        // The {1} u {3i} pattern from the C_{6k+2} construction, 0-based.
        assert!(family.sets.contains(&(1 | 1 << 2 | 1 << 5)));
    }

    #[test]
    fn k4_singletons() {
        let family =
            enumerate_maximal_independent_sets(&named_graph(GraphFamily::Complete, 4).unwrap())
                .unwrap();
        assert_eq!(family.sets, vec![0b0001, 0b0010, 0b0100, 0b1000]);
    }

    #[test]
    fn petersen_alpha_beta() {
        let g = named_graph(GraphFamily::Petersen, 0).unwrap();
        assert_eq!(alpha_brute(&g).unwrap(), 4);
        assert_eq!(beta_brute(&g).unwrap(), 3);
    }

    #[test]
    fn weighted_path() {
        let g = path(3);
        assert_eq!(alpha_weighted_brute(&g, &[3.0, 1.0, 3.0]).unwrap(), 6.0);
    }

    #[test]
    fn well_covered_cases() {
        assert!(is_well_covered(&cycle(5)).unwrap());
        assert!(!is_well_covered(&path(3)).unwrap());
        assert!(is_well_covered(&path(4)).unwrap());
        assert!(is_very_well_covered(&path(4)).unwrap());
        assert!(!is_very_well_covered(&cycle(5)).unwrap());
    }

    #[test]
    fn enumeration_matches_naive_filter() {
        for n in 1..=5 {
            for g in labeled_graphs(n) {
                let fast = enumerate_maximal_independent_sets(&g).unwrap().sets;
                let naive = maximal_independent_sets_naive(&g).unwrap();
                assert_eq!(fast, naive, "mismatch on n={n}");
            }
        }
    }

    #[test]
    fn maximal_sets_dominate() {
        for g in labeled_graphs(5) {
            for s in enumerate_maximal_independent_sets(&g).unwrap().sets {
                assert!(is_dominating(&g, s));
            }
        }
    }

    #[test]
    fn alpha_at_least_beta() {
        for g in labeled_graphs(4) {
            let family = enumerate_maximal_independent_sets(&g).unwrap();
            assert!(family.alpha >= family.beta);
            assert_eq!(family.alpha == family.beta, is_well_covered(&g).unwrap());
        }
    }

    #[test]
    fn regular_beta_bound() {
        for (g, d) in [(cycle(4), 2), (cycle(5), 2), (cycle(8), 2)] {
            let beta = beta_brute(&g).unwrap();
            assert!(beta as f64 >= g.n() as f64 / (d as f64 + 1.0));
        }
        let pet = named_graph(GraphFamily::Petersen, 0).unwrap();
        assert!(beta_brute(&pet).unwrap() as f64 >= 10.0 / 4.0);
    }
}
