//! Spectral sequencing (Fiedler-vector order) and spectral clustering.

use rand::Rng as _;

use super::LinearArrangement;
use crate::error::{Error, Result};
use crate::graph::spectral::{fiedler_vector, laplacian_low_subspace, WeightedAdjacency};
use crate::graph::Graph;
use crate::rng::{Rng, RngSeed};

const KMEANS_MAX_ITER: usize = 100;
const SUBSPACE_MAX_ITER: usize = 300;

/// Orders nodes by their Fiedler-vector entry, component by component.
pub fn spectral_sequencing(graph: &Graph) -> Result<LinearArrangement> {
    let order = spectral_sequencing_weighted(&WeightedAdjacency::from_graph(graph))?;
    LinearArrangement::from_order(order)
}

/// Node order for a weighted graph. Components are sequenced separately and
/// concatenated by ascending smallest node id. Within a component, entries
/// equal up to roundoff tie by ascending id, and of the two sign-symmetric
/// orders the one starting with the smaller id wins.
pub fn spectral_sequencing_weighted(adj: &WeightedAdjacency) -> Result<Vec<usize>> {
    let mut order = Vec::with_capacity(adj.n());
    for comp in adj.components() {
        if comp.len() <= 2 {
            order.extend_from_slice(&comp);
            continue;
        }
        let f = fiedler_vector(&adj.induced(&comp))?;
        let scale = f.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-300);
        let key: Vec<i64> = f.iter().map(|x| (x / scale * 1e9).round() as i64).collect();
        let mut fwd: Vec<usize> = (0..comp.len()).collect();
        fwd.sort_by_key(|&i| (key[i], i));
        let mut bwd: Vec<usize> = (0..comp.len()).collect();
        bwd.sort_by_key(|&i| (-key[i], i));
        let pick = if fwd[0] <= bwd[0] { fwd } else { bwd };
        order.extend(pick.into_iter().map(|i| comp[i]));
    }
    Ok(order)
}

/// Cluster labels in `0..k` from a spectral embedding plus seeded k-means.
///
/// Nodes are embedded with the `k-1` lowest Laplacian eigenvectors
/// orthogonal to the constant vector (the constant one carries no
/// information). Labels are renumbered in order of first appearance by node
/// id, and every cluster is nonempty.
pub fn spectral_clustering(graph: &Graph, k: usize, seed: RngSeed) -> Result<Vec<usize>> {
    spectral_clustering_weighted(&WeightedAdjacency::from_graph(graph), k, seed)
}

pub(crate) fn spectral_clustering_weighted(
    adj: &WeightedAdjacency,
    k: usize,
    seed: RngSeed,
) -> Result<Vec<usize>> {
    let n = adj.n();
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if k > n {
        return Err(Error::param("k", format!("{k} clusters for {n} nodes")));
    }
    if k == 1 {
        return Ok(vec![0; n]);
    }
    if k == n {
        return Ok((0..n).collect());
    }
    let dims = (k - 1).min(n - 1);
    let mut rng = seed.rng();
    let start: Vec<Vec<f64>> = (0..dims)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    let (basis, _) = laplacian_low_subspace(adj, start, seed.derive("subspace"), SUBSPACE_MAX_ITER)?;
    let points: Vec<Vec<f64>> = (0..n).map(|v| basis.iter().map(|b| b[v]).collect()).collect();
    let labels = kmeans(&points, k, &mut rng);
    Ok(canonical_labels(&labels))
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm with k-means++ seeding. Empty clusters are refilled
/// with the point of the largest cluster farthest from its centroid.
fn kmeans(points: &[Vec<f64>], k: usize, rng: &mut Rng) -> Vec<usize> {
    let n = points.len();
    let dim = points[0].len();
    let mut centers: Vec<Vec<f64>> = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total <= 0.0 {
            rng.random_range(0..n)
        } else {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    pick = i;
                    break;
                }
                target -= d;
            }
            pick
        };
        centers.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, centers.last().unwrap()));
        }
    }
    let mut labels = vec![usize::MAX; n];
    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let best = (0..k)
                .min_by(|&a, &b| sq_dist(p, &centers[a]).total_cmp(&sq_dist(p, &centers[b])))
                .unwrap();
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        repair_empty(points, &mut labels, &centers, k);
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            sums[l].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        for c in 0..k {
            centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
        }
        if !changed {
            break;
        }
    }
    labels
}

fn repair_empty(points: &[Vec<f64>], labels: &mut [usize], centers: &[Vec<f64>], k: usize) {
    loop {
        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&l| counts[l] += 1);
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let largest = (0..k).max_by_key(|&c| (counts[c], std::cmp::Reverse(c))).unwrap();
        let far = (0..points.len())
            .filter(|&i| labels[i] == largest)
            .max_by(|&a, &b| {
                sq_dist(&points[a], &centers[largest])
                    .total_cmp(&sq_dist(&points[b], &centers[largest]))
                    .then(b.cmp(&a))
            })
            .unwrap();
        labels[far] = empty;
    }
}

fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::cutwidth_profile;
    use crate::graph::{fixtures, gen_erdos_renyi};

    #[test]
    fn path_is_sequenced_end_to_end() {
        let g = fixtures::path(5);
        let la = spectral_sequencing(&g).unwrap();
        assert_eq!(la.order(), &[0, 1, 2, 3, 4]);
        assert_eq!(cutwidth_profile(&g, &la).unwrap().max_cut, 1);
        // Shuffled labels: the order still walks the path.
        let h = Graph::from_edges(5, [(3, 0), (0, 4), (4, 1), (1, 2)]).unwrap();
        let la = spectral_sequencing(&h).unwrap();
        assert_eq!(la.order(), &[2, 1, 4, 0, 3]);
    }

    #[test]
    fn degenerate_and_disconnected() {
        spectral_sequencing(&fixtures::complete(4)).unwrap().validate().unwrap();
        let g = Graph::from_edges(7, [(0, 4), (4, 2), (1, 3), (3, 5), (5, 6)]).unwrap();
        let la = spectral_sequencing(&g).unwrap();
        // Components {0,2,4} then {1,3,5,6}, each walked as a path.
        assert_eq!(la.order(), &[0, 4, 2, 1, 3, 5, 6]);
        assert_eq!(spectral_sequencing(&Graph::empty(3)).unwrap(), LinearArrangement::identity(3));
    }

    #[test]
    fn weighted_sequencing_follows_heavy_chain() {
        // Heavy path 0-2-1-3 with light shortcuts.
        let adj = WeightedAdjacency::from_weighted_edges(
            4,
            &[(0, 2, 10.0), (2, 1, 10.0), (1, 3, 10.0), (0, 3, 0.1)],
        );
        let order = spectral_sequencing_weighted(&adj).unwrap();
        assert!(order == vec![0, 2, 1, 3] || order == vec![3, 1, 2, 0]);
        assert_eq!(order[0], 0);
    }

    #[test]
    fn clustering_cases() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(spectral_clustering(&two, 2, RngSeed(1)).unwrap(), vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(spectral_clustering(&two, 1, RngSeed(1)).unwrap(), vec![0; 6]);
        assert!(spectral_clustering(&two, 7, RngSeed(1)).is_err());
        assert!(spectral_clustering(&two, 0, RngSeed(1)).is_err());
    }

    #[test]
    fn clustering_cuts_barbell_bridge() {
        let g = fixtures::barbell(10);
        for s in 0..5 {
            let labels = spectral_clustering(&g, 2, RngSeed(s)).unwrap();
            let crossing = g
                .edges()
                .iter()
                .filter(|&&(u, v)| labels[u as usize] != labels[v as usize])
                .count();
            assert_eq!(crossing, 1, "seed {s}: {labels:?}");
        }
    }

    #[test]
    fn clustering_is_deterministic_and_nonempty() {
        let g = gen_erdos_renyi(120, 0.05, RngSeed(4)).unwrap();
        for k in [2, 5, 11] {
            let a = spectral_clustering(&g, k, RngSeed(9)).unwrap();
            assert_eq!(a, spectral_clustering(&g, k, RngSeed(9)).unwrap());
            let mut seen = vec![false; k];
            a.iter().for_each(|&l| seen[l] = true);
            assert!(seen.iter().all(|&s| s), "k={k}");
        }
    }
}
