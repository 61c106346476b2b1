//! Hierarchical maximum-cutwidth-minimization ordering.

use super::anneal::{local_search_swaps, OrderingConfig};
use super::sequencing::{spectral_clustering, spectral_sequencing, spectral_sequencing_weighted};
use super::{cutwidth_profile, CutwidthProfile, LinearArrangement};
use crate::error::{Error, Result};
use crate::graph::spectral::WeightedAdjacency;
use crate::graph::Graph;

/// `⌈√N / 2⌉`, at least 1.
pub fn auto_cluster_count(n: usize) -> usize {
    ((n as f64).sqrt() / 2.0).ceil().max(1.0) as usize
}

#[derive(Debug, Clone)]
pub struct MCMOrdering {
    pub arrangement: LinearArrangement,
    /// `None` for graphs with fewer than two nodes.
    pub profile: Option<CutwidthProfile>,
    pub cluster_labels: Vec<usize>,
}

impl MCMOrdering {
    pub fn max_cut(&self) -> u32 {
        self.profile.as_ref().map_or(0, |p| p.max_cut)
    }
}

/// Clusters the graph spectrally, sequences the cluster quotient graph,
/// orders each cluster by spectral sequencing refined with swap annealing,
/// then anneals the concatenation as a whole.
pub fn order_mcm(graph: &Graph, config: &OrderingConfig) -> Result<MCMOrdering> {
    config.validate()?;
    let n = graph.n_nodes();
    if n == 0 {
        return Err(Error::param("graph", "empty graph"));
    }
    let k = config.n_clusters.unwrap_or_else(|| auto_cluster_count(n)).min(n);
    let labels = spectral_clustering(graph, k, config.seed.derive("clusters"))?;

    // Quotient graph: one node per cluster, weights count crossing edges.
    let mut crossing: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for &(u, v) in graph.edges() {
        let (a, b) = (labels[u as usize], labels[v as usize]);
        if a != b {
            *crossing.entry((a.min(b), a.max(b))).or_default() += 1.0;
        }
    }
    let quotient_edges: Vec<(usize, usize, f64)> =
        crossing.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    let cluster_order = spectral_sequencing_weighted(&WeightedAdjacency::from_weighted_edges(k, &quotient_edges))?;

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, &l) in labels.iter().enumerate() {
        members[l].push(v);
    }
    let mut order = Vec::with_capacity(n);
    for &c in &cluster_order {
        let nodes = &members[c];
        let sub = graph.induced_subgraph(nodes);
        let seq = spectral_sequencing(&sub)?;
        let local_cfg = OrderingConfig {
            seed: config.seed.derive(&format!("cluster-{c}")),
            ..*config
        };
        let refined = local_search_swaps(&sub, &seq, &local_cfg)?;
        order.extend(refined.order().iter().map(|&i| nodes[i as usize]));
    }
    let joined = LinearArrangement::from_order(order)?;
    let global_cfg = OrderingConfig {
        seed: config.seed.derive("global"),
        ..*config
    };
    let arrangement = local_search_swaps(graph, &joined, &global_cfg)?;
    let profile = if n >= 2 {
        Some(cutwidth_profile(graph, &arrangement)?)
    } else {
        None
    };
    Ok(MCMOrdering {
        arrangement,
        profile,
        cluster_labels: labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::order_random;
    use crate::graph::{fixtures, gen_grid};
    use crate::rng::RngSeed;

    #[test]
    fn cluster_count_rule() {
        assert_eq!(auto_cluster_count(1), 1);
        assert_eq!(auto_cluster_count(4), 1);
        assert_eq!(auto_cluster_count(5), 2);
        assert_eq!(auto_cluster_count(100), 5);
        assert_eq!(auto_cluster_count(500), 12);
    }

    #[test]
    fn path_reaches_unit_cutwidth() {
        let g = fixtures::path(20);
        let out = order_mcm(&g, &OrderingConfig::with_seed(RngSeed(1))).unwrap();
        assert_eq!(out.max_cut(), 1);
    }

    #[test]
    fn grid_within_known_bound() {
        let g = gen_grid(4, 4).unwrap();
        let out = order_mcm(&g, &OrderingConfig::with_seed(RngSeed(1))).unwrap();
        assert!(out.max_cut() <= 5, "{}", out.max_cut());
    }

    #[test]
    fn deterministic_and_valid() {
        let g = crate::graph::gen_erdos_renyi(60, 0.1, RngSeed(3)).unwrap();
        let cfg = OrderingConfig::with_seed(RngSeed(5));
        let a = order_mcm(&g, &cfg).unwrap();
        let b = order_mcm(&g, &cfg).unwrap();
        a.arrangement.validate().unwrap();
        assert_eq!(a.arrangement, b.arrangement);
        assert!(a.max_cut() <= cutwidth_profile(&g, &order_random(&g, RngSeed(5))).unwrap().max_cut);
    }

    #[test]
    fn trivial_graphs() {
        let one = order_mcm(&Graph::empty(1), &OrderingConfig::default()).unwrap();
        assert_eq!(one.arrangement, LinearArrangement::identity(1));
        assert!(one.profile.is_none());
        assert!(order_mcm(&Graph::empty(0), &OrderingConfig::default()).is_err());
        let iso = order_mcm(&Graph::empty(9), &OrderingConfig::default()).unwrap();
        assert_eq!(iso.max_cut(), 0);
    }
}
