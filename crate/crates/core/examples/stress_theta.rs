use lcpgraph::graph::gen_erdos_renyi;
use lcpgraph::oracle::alpha_brute;
use lcpgraph::sdp::{theta_frac, theta_lovasz, theta_prime, theta_star};
use std::time::Instant;

fn main() {
    for (n, p, seed) in [(10, 0.4, 1u64), (15, 0.4, 1), (15, 0.8, 2), (15, 0.2, 3)] {
        let g = gen_erdos_renyi(n, p, seed).unwrap();
        let alpha = alpha_brute(&g).unwrap() as f64;
        let t0 = Instant::now();
        let star = theta_star(&g).unwrap();
        let t_star = t0.elapsed();
        let t0 = Instant::now();
        let frac = theta_frac(&g).unwrap();
        let t_frac = t0.elapsed();
        let prime = theta_prime(&g).unwrap();
        let lovasz = theta_lovasz(&g).unwrap();
        let w = star.witness_w.as_ref().unwrap();
        let mut worst_edge = 0.0f64;
        for (i, j) in g.edges() {
            worst_edge = worst_edge.max(w[(i, j)].abs());
        }
        println!(
            "n={n} p={p} seed={seed}: alpha={alpha} star={:.6} (gap {:.1e}, {} it, {} cons, {:?}) frac={:.6} ({:?}) prime={:.6} lovasz={:.6} | worst edge w = {:.2e} | chain ok: {}",
            star.value, star.gap, star.iterations, star.constraints, t_star,
            frac.value, t_frac, prime.value, lovasz.value, worst_edge,
            alpha - 1e-4 <= star.value && star.value <= prime.value + 1e-4 && prime.value <= lovasz.value + 1e-4,
        );
    }
}
