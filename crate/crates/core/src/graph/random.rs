//! Seeded random graph models. All generators run on ChaCha8 streams so a
//! fixed 64-bit seed reproduces the same graph on every run.

use super::{Graph, GraphError, VertexWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// G(n, p): each unordered pair is an edge independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    erdos_renyi_with(n, p, &mut rng)
}

/// G(n, p) drawing from a caller-owned stream.
pub fn erdos_renyi_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// A random graph with order drawn from `n_range` and density from `p_range`.
pub fn random_graph<R: Rng>(
    n_range: std::ops::RangeInclusive<usize>,
    p_range: std::ops::RangeInclusive<f64>,
    rng: &mut R,
) -> Graph {
    let n = rng.gen_range(n_range);
    let p = rng.gen_range(p_range);
    erdos_renyi_with(n, p, rng).expect("range endpoints are valid")
}

/// Uniform random labeled tree on `k` vertices, decoded from a uniform
/// random sequence in `{0..k-1}^{k-2}` (each sequence decodes to a distinct
/// tree, so trees come out equiprobable).
pub fn random_tree<R: Rng>(k: usize, rng: &mut R) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(k)?;
    if k <= 1 {
        return Ok(g);
    }
    if k == 2 {
        g.add_edge(0, 1);
        return Ok(g);
    }
    let seq: Vec<usize> = (0..k - 2).map(|_| rng.gen_range(0..k)).collect();
    let mut degree = vec![1usize; k];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut leaf_heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..k)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &v in &seq {
        let std::cmp::Reverse(leaf) = leaf_heap.pop().expect("decode invariant");
        g.add_edge(leaf, v);
        degree[leaf] -= 1;
        degree[v] -= 1;
        if degree[v] == 1 {
            leaf_heap.push(std::cmp::Reverse(v));
        }
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    debug_assert_eq!(rest.len(), 2);
    g.add_edge(rest[0], rest[1]);
    Ok(g)
}

/// Random forest on exactly `n` vertices: component sizes are drawn by
/// repeatedly taking a uniform cut of the remainder, then each component is a
/// uniform random tree.
pub fn random_forest<R: Rng>(n: usize, rng: &mut R) -> Result<Graph, GraphError> {
    let mut forest: Option<Graph> = None;
    let mut remaining = n;
    while remaining > 0 {
        let size = rng.gen_range(1..=remaining);
        let tree = random_tree(size, rng)?;
        forest = Some(match forest {
            None => tree,
            Some(f) => f.disjoint_union(&tree)?,
        });
        remaining -= size;
    }
    forest.ok_or(GraphError::Empty)
}

/// Random bipartite graph: a random balanced-ish bipartition, then each cross
/// pair is an edge with probability `p`.
pub fn random_bipartite<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n)?;
    let left: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if left[u] != left[v] && rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Random weight vector with entries from {0, 0.5, 1, 2, 3.5}; zeros exercise
/// the non-negativity boundary.
pub fn random_weights<R: Rng>(n: usize, rng: &mut R) -> VertexWeights {
    const POOL: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.5];
    VertexWeights::new((0..n).map(|_| POOL[rng.gen_range(0..POOL.len())]).collect())
        .expect("pool entries are non-negative")
}

/// All 2^(n choose 2) labeled graphs on `n` vertices, in edge-mask order.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let count: u64 = 1 << pairs.len();
    (0..count).map(move |mask| {
        let mut g = Graph::empty(n).expect("n validated by caller");
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if (mask >> bit) & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn er_extremes() {
        let g = gen_erdos_renyi(15, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = gen_erdos_renyi(15, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 15 * 14 / 2);
    }

    #[test]
    fn er_deterministic() {
        let a = gen_erdos_renyi(20, 0.4, 7).unwrap();
        let b = gen_erdos_renyi(20, 0.4, 7).unwrap();
        assert_eq!(a, b);
        // Binomial(190, 0.4) has mean 76 and sd ~6.75; [40, 115] is a
        // +-5 sigma window, so any seed landing outside signals a broken
        // generator rather than bad luck.
        let m = a.edge_count();
        assert!((40..=115).contains(&m), "edge count {m} outside [40,115]");
    }

    #[test]
    fn er_rejects_bad_p() {
        assert!(gen_erdos_renyi(5, 1.5, 0).is_err());
    }

    #[test]
    fn trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=12 {
            for _ in 0..20 {
                let t = random_tree(k, &mut rng).unwrap();
                assert!(t.is_forest());
                assert_eq!(t.connected_components().len(), 1);
                assert_eq!(t.edge_count(), k - 1);
            }
        }
    }

    #[test]
    fn forests_are_forests() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let f = random_forest(12, &mut rng).unwrap();
            assert_eq!(f.n(), 12);
            assert!(f.is_forest());
        }
    }

    #[test]
    fn bipartite_has_no_odd_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_bipartite(10, 0.5, &mut rng).unwrap();
            // 2-color greedily per component; bipartite graphs must succeed.
            let mut color = vec![None::<bool>; g.n()];
            for comp in g.connected_components() {
                color[comp[0]] = Some(true);
                let mut queue = vec![comp[0]];
                while let Some(u) = queue.pop() {
                    let cu = color[u].unwrap();
                    for v in 0..g.n() {
                        if g.has_edge(u, v) {
                            match color[v] {
                                None => {
                                    color[v] = Some(!cu);
                                    queue.push(v);
                                }
                                Some(cv) => assert_ne!(cu, cv),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn labeled_graph_count() {
        assert_eq!(labeled_graphs(3).count(), 8);
        assert_eq!(labeled_graphs(4).count(), 64);
    }
}
