//! Reference priority orders: random, degree-sorted and greedy
//! spectral-radius reduction.

use rand::seq::SliceRandom;

use super::LinearArrangement;
use crate::error::{Error, Result};
use crate::graph::spectral::{principal_eigenpair, WeightedAdjacency, DEFAULT_POWER_ITERATIONS};
use crate::graph::Graph;
use crate::rng::RngSeed;

/// Uniform random permutation (seeded Fisher–Yates).
pub fn order_random(graph: &Graph, seed: RngSeed) -> LinearArrangement {
    let mut order: Vec<usize> = (0..graph.n_nodes()).collect();
    order.shuffle(&mut seed.rng());
    LinearArrangement::from_order(order).expect("permutation")
}

/// Highest degree first, ties by ascending id.
pub fn order_most_neighbors(graph: &Graph) -> LinearArrangement {
    let mut order: Vec<usize> = (0..graph.n_nodes()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    LinearArrangement::from_order(order).expect("permutation")
}

/// Lowest degree first, ties by ascending id.
pub fn order_least_neighbors(graph: &Graph) -> LinearArrangement {
    let mut order: Vec<usize> = (0..graph.n_nodes()).collect();
    order.sort_by_key(|&v| (graph.degree(v), v));
    LinearArrangement::from_order(order).expect("permutation")
}

/// Recompute interval used when none is given: every removal up to 2000
/// nodes, otherwise every `⌈N/100⌉` removals.
pub fn default_recompute_every(n: usize) -> usize {
    if n <= 2000 {
        1
    } else {
        n.div_ceil(100)
    }
}

const LRSR_TOL: f64 = 1e-9;

/// Greedy spectral-radius reduction: repeatedly take the remaining node with
/// the largest squared principal-eigenvector entry of the residual graph,
/// refreshing the eigenvector every `recompute_every` removals.
pub fn order_lrsr(graph: &Graph, recompute_every: usize) -> Result<LinearArrangement> {
    let n = graph.n_nodes();
    if n == 0 {
        return Err(Error::param("graph", "empty graph"));
    }
    if recompute_every == 0 {
        return Err(Error::param("recompute_every", "must be at least 1"));
    }
    let adj = WeightedAdjacency::from_graph(graph);
    let mut active = vec![true; n];
    let mut remaining_edges = graph.n_edges();
    let mut order = Vec::with_capacity(n);
    let mut start = vec![1.0; n];
    let mut scores = vec![0.0f64; n];
    let mut since_refresh = recompute_every;
    while order.len() < n {
        if remaining_edges == 0 {
            // Residual graph is edgeless; every score is zero.
            order.extend((0..n).filter(|&v| active[v]));
            break;
        }
        if since_refresh >= recompute_every {
            // Warm start from the previous eigenvector, kept strictly positive.
            for v in 0..n {
                start[v] = if active[v] { scores[v].sqrt() + 1e-3 } else { 0.0 };
            }
            let eig = principal_eigenpair(&adj, Some(&active), &start, LRSR_TOL, DEFAULT_POWER_ITERATIONS)?;
            for v in 0..n {
                scores[v] = eig.vector[v] * eig.vector[v];
            }
            since_refresh = 0;
        }
        // Scores equal within roundoff count as ties.
        let best = (0..n)
            .filter(|&v| active[v])
            .fold(None::<(usize, f64)>, |acc, v| match acc {
                Some((_, s)) if scores[v] <= s * (1.0 + 1e-9) + 1e-15 => acc,
                _ => Some((v, scores[v])),
            })
            .map(|(v, _)| v)
            .expect("some node remains");
        active[best] = false;
        scores[best] = 0.0;
        remaining_edges -= graph
            .neighbors(best)
            .iter()
            .filter(|&&w| active[w as usize])
            .count();
        order.push(best);
        since_refresh += 1;
    }
    LinearArrangement::from_order(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn random_order_cases() {
        assert_eq!(order_random(&Graph::empty(1), RngSeed(5)), LinearArrangement::identity(1));
        let g = Graph::empty(30);
        assert_eq!(order_random(&g, RngSeed(7)), order_random(&g, RngSeed(7)));
        assert_ne!(order_random(&g, RngSeed(7)), order_random(&g, RngSeed(8)));
    }

    #[test]
    fn random_order_first_position_is_uniform() {
        // Binomial(10^4, 0.2): sd = 40, so ±0.02 is 5 sd.
        let g = Graph::empty(5);
        let mut first = [0usize; 5];
        for s in 0..10_000 {
            first[order_random(&g, RngSeed(s)).node_at(1)] += 1;
        }
        for c in first {
            assert!((c as f64 / 1e4 - 0.2).abs() <= 0.02, "{first:?}");
        }
    }

    #[test]
    fn degree_orders() {
        let star = fixtures::star(4);
        assert_eq!(order_most_neighbors(&star).node_at(1), 0);
        let c = fixtures::cycle(6);
        assert_eq!(order_most_neighbors(&c), LinearArrangement::identity(6));
        assert_eq!(order_least_neighbors(&c), LinearArrangement::identity(6));
        let p3 = fixtures::path(3);
        assert_eq!(order_most_neighbors(&p3).order(), &[1, 0, 2]);
        assert_eq!(order_least_neighbors(&p3).order(), &[0, 2, 1]);
    }

    #[test]
    fn lrsr_small_cases() {
        assert_eq!(order_lrsr(&fixtures::star(4), 1).unwrap().node_at(1), 0);
        assert_eq!(order_lrsr(&fixtures::complete(4), 1).unwrap(), LinearArrangement::identity(4));
        assert!(order_lrsr(&Graph::empty(0), 1).is_err());
        assert!(order_lrsr(&fixtures::star(3), 0).is_err());
        let la = order_lrsr(&Graph::empty(3), 1).unwrap();
        assert_eq!(la, LinearArrangement::identity(3));
    }

    #[test]
    fn lrsr_first_pick_maximizes_radius_drop() {
        let g = fixtures::barbell(4);
        let la = order_lrsr(&g, 1).unwrap();
        // Oracle: remove each node in turn and recompute the radius exactly.
        let residual: Vec<f64> = (0..8)
            .map(|v| {
                let keep: Vec<usize> = (0..8).filter(|&w| w != v).collect();
                let rest = g.induced_subgraph(&keep);
                let mut m = nalgebra::DMatrix::<f64>::zeros(7, 7);
                for &(a, b) in rest.edges() {
                    m[(a as usize, b as usize)] = 1.0;
                    m[(b as usize, a as usize)] = 1.0;
                }
                m.symmetric_eigen().eigenvalues.max()
            })
            .collect();
        let best = residual.iter().cloned().fold(f64::MAX, f64::min);
        let first = la.node_at(1);
        assert!((residual[first] - best).abs() < 1e-9, "{first} {residual:?}");
        // Bridge endpoints 3 and 4; the second pick lands in the other clique.
        assert!(first == 3 || first == 4);
        let second = la.node_at(2);
        assert_ne!(first < 4, second < 4);
    }

    #[test]
    fn lrsr_stale_scores_still_permutation() {
        let g = crate::graph::gen_erdos_renyi(80, 0.08, RngSeed(2)).unwrap();
        for every in [1, 5, 100] {
            order_lrsr(&g, every).unwrap().validate().unwrap();
        }
        assert_eq!(default_recompute_every(100), 1);
        assert_eq!(default_recompute_every(81_306), 814);
    }
}
