//! Linear arrangements of graph nodes, their cost functionals, and the
//! orderings used as priority plans.

mod anneal;
mod baselines;
mod exact;
mod mcm;
mod sequencing;

pub use anneal::{local_search_swaps, AnnealSchedule, Objective, OrderingConfig};
pub use baselines::{
    order_least_neighbors, order_lrsr, order_most_neighbors, order_random, default_recompute_every,
};
pub use exact::{order_exact_min_cutwidth, EXACT_MAX_NODES};
pub use mcm::{auto_cluster_count, order_mcm, MCMOrdering};
pub use sequencing::{spectral_clustering, spectral_sequencing, spectral_sequencing_weighted};

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Bijection between nodes and positions `1..=N`.
///
/// Stored as both directions: `order[i]` is the node in 0-based slot `i`,
/// `slot[v]` is its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearArrangement {
    order: Vec<u32>,
    slot: Vec<u32>,
}

impl LinearArrangement {
    pub fn identity(n: usize) -> Self {
        let order: Vec<u32> = (0..n as u32).collect();
        LinearArrangement {
            slot: order.clone(),
            order,
        }
    }

    /// From the node list in priority order (first element = position 1).
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut slot = vec![u32::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidArrangement(format!("node {v} out of range 0..{n}")));
            }
            if slot[v] != u32::MAX {
                return Err(Error::InvalidArrangement(format!("node {v} appears twice")));
            }
            slot[v] = i as u32;
        }
        Ok(LinearArrangement {
            order: order.into_iter().map(|v| v as u32).collect(),
            slot,
        })
    }

    /// From 1-based positions: `positions[v]` is ℓ(v).
    pub fn from_positions(positions: &[usize]) -> Result<Self> {
        let n = positions.len();
        let mut order = vec![usize::MAX; n];
        for (v, &p) in positions.iter().enumerate() {
            if p == 0 || p > n {
                return Err(Error::InvalidArrangement(format!("position {p} out of range 1..={n}")));
            }
            if order[p - 1] != usize::MAX {
                return Err(Error::InvalidArrangement(format!("position {p} used twice")));
            }
            order[p - 1] = v;
        }
        Self::from_order(order)
    }

    pub(crate) fn from_slots_unchecked(slot: Vec<u32>) -> Self {
        let mut order = vec![0u32; slot.len()];
        for (v, &s) in slot.iter().enumerate() {
            order[s as usize] = v as u32;
        }
        LinearArrangement { order, slot }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// ℓ(v), 1-based.
    pub fn position(&self, v: usize) -> usize {
        self.slot[v] as usize + 1
    }

    /// 0-based slot of `v`.
    pub fn slot(&self, v: usize) -> usize {
        self.slot[v] as usize
    }

    /// Node at 1-based position `p`.
    pub fn node_at(&self, p: usize) -> usize {
        self.order[p - 1] as usize
    }

    /// Nodes in priority order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn slots(&self) -> &[u32] {
        &self.slot
    }

    /// 1-based positions indexed by node.
    pub fn positions(&self) -> Vec<usize> {
        self.slot.iter().map(|&s| s as usize + 1).collect()
    }

    pub fn reversed(&self) -> Self {
        let n = self.len() as u32;
        Self::from_slots_unchecked(self.slot.iter().map(|&s| n - 1 - s).collect())
    }

    pub(crate) fn swap_nodes(&mut self, u: usize, v: usize) {
        let (su, sv) = (self.slot[u], self.slot[v]);
        self.slot[u] = sv;
        self.slot[v] = su;
        self.order[sv as usize] = u as u32;
        self.order[su as usize] = v as u32;
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.slot.len() != n {
            return Err(Error::InvalidArrangement("inverse has wrong length".into()));
        }
        for (i, &v) in self.order.iter().enumerate() {
            if v as usize >= n || self.slot[v as usize] as usize != i {
                return Err(Error::InvalidArrangement(format!("slot {i} is inconsistent")));
            }
        }
        Ok(())
    }

    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        if self.len() != graph.n_nodes() {
            return Err(Error::SizeMismatch {
                expected: graph.n_nodes(),
                got: self.len(),
            });
        }
        Ok(())
    }

    /// One node id per line, line `i` holding the node at position `i`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(8 * self.len());
        for &v in &self.order {
            writeln!(s, "{v}").unwrap();
        }
        s
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut order = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            order.push(t.parse::<usize>().map_err(|_| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                content: t.to_string(),
            })?);
        }
        Self::from_order(order)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Cut values at the `N-1` locations between consecutive positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutwidthProfile {
    /// `cuts[c-1]` counts edges with one endpoint at position `<= c` and the
    /// other at position `> c`.
    pub cuts: Vec<u32>,
    pub max_cut: u32,
    /// Smallest location `c` (1-based) attaining `max_cut`.
    pub argmax_location: usize,
}

impl CutwidthProfile {
    /// `location,cut` CSV with header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("location,cut\n");
        for (i, c) in self.cuts.iter().enumerate() {
            writeln!(s, "{},{}", i + 1, c).unwrap();
        }
        s
    }
}

/// p-sum cost `(Σ_{edges} |ℓ(u) − ℓ(v)|^p)^{1/p}`, each undirected edge
/// counted once.
pub fn p_sum_cost(graph: &Graph, la: &LinearArrangement, p: u32) -> Result<f64> {
    if p < 1 {
        return Err(Error::param("p", "must be at least 1"));
    }
    la.check_graph(graph)?;
    let sum: f64 = graph
        .edges()
        .iter()
        .map(|&(u, v)| (la.slot(u as usize).abs_diff(la.slot(v as usize)) as f64).powi(p as i32))
        .sum();
    Ok(if p == 1 { sum } else { sum.powf(1.0 / p as f64) })
}

/// Cut profile by a difference array: an edge spanning slots `a < b`
/// crosses locations `a+1..=b`.
pub fn cutwidth_profile(graph: &Graph, la: &LinearArrangement) -> Result<CutwidthProfile> {
    la.check_graph(graph)?;
    let n = graph.n_nodes();
    if n < 2 {
        return Err(Error::param("graph", "cutwidth needs at least 2 nodes"));
    }
    let mut diff = vec![0i64; n];
    for &(u, v) in graph.edges() {
        let (a, b) = minmax(la.slot(u as usize), la.slot(v as usize));
        diff[a] += 1;
        diff[b] -= 1;
    }
    let mut cuts = Vec::with_capacity(n - 1);
    let mut run = 0i64;
    for d in &diff[..n - 1] {
        run += d;
        cuts.push(run as u32);
    }
    Ok(profile_from_cuts(cuts))
}

pub(crate) fn profile_from_cuts(cuts: Vec<u32>) -> CutwidthProfile {
    let (mut argmax, mut max_cut) = (0, 0);
    for (i, &c) in cuts.iter().enumerate() {
        if c > max_cut || i == 0 {
            max_cut = c;
            argmax = i;
        }
    }
    CutwidthProfile {
        cuts,
        max_cut,
        argmax_location: argmax + 1,
    }
}

/// Maximum cutwidth; 0 for graphs with fewer than two nodes.
pub fn max_cutwidth(graph: &Graph, la: &LinearArrangement) -> Result<u32> {
    if graph.n_nodes() < 2 {
        la.check_graph(graph)?;
        return Ok(0);
    }
    Ok(cutwidth_profile(graph, la)?.max_cut)
}

fn minmax(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, gen_erdos_renyi};
    use crate::rng::RngSeed;
    use proptest::prelude::*;

    fn naive_cuts(g: &Graph, la: &LinearArrangement) -> Vec<u32> {
        (1..g.n_nodes())
            .map(|c| {
                g.edges()
                    .iter()
                    .filter(|&&(u, v)| {
                        let (a, b) = (la.position(u as usize), la.position(v as usize));
                        a.min(b) <= c && c < a.max(b)
                    })
                    .count() as u32
            })
            .collect()
    }

    fn la_prime() -> LinearArrangement {
        LinearArrangement::from_positions(&[1, 3, 4, 2, 5]).unwrap()
    }

    #[test]
    fn figure_costs() {
        let g = fixtures::figure_path();
        let id = LinearArrangement::identity(5);
        assert_eq!(p_sum_cost(&g, &id, 1).unwrap(), 8.0);
        assert_eq!(p_sum_cost(&g, &la_prime(), 1).unwrap(), 4.0);
        let prof = cutwidth_profile(&g, &id).unwrap();
        assert_eq!(prof.cuts, vec![1, 3, 3, 1]);
        assert_eq!((prof.max_cut, prof.argmax_location), (3, 2));
        assert_eq!(cutwidth_profile(&g, &la_prime()).unwrap().max_cut, 1);
    }

    #[test]
    fn path_and_complete() {
        let p = fixtures::path(9);
        assert_eq!(p_sum_cost(&p, &LinearArrangement::identity(9), 1).unwrap(), 8.0);
        let n = 7;
        let k = fixtures::complete(n);
        let la = LinearArrangement::from_order(vec![3, 1, 6, 0, 2, 5, 4]).unwrap();
        let prof = cutwidth_profile(&k, &la).unwrap();
        for c in 1..n {
            assert_eq!(prof.cuts[c - 1] as usize, c * (n - c));
        }
        assert_eq!(prof.max_cut as usize, (n / 2) * n.div_ceil(2));
    }

    #[test]
    fn p_sum_higher_powers() {
        let g = fixtures::figure_path();
        // Edge lengths under identity: 3, 2, 1, 2.
        let c2 = p_sum_cost(&g, &LinearArrangement::identity(5), 2).unwrap();
        assert!((c2 - 18f64.sqrt()).abs() < 1e-12);
        assert!(p_sum_cost(&g, &LinearArrangement::identity(5), 0).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LinearArrangement::from_order(vec![0, 0]).is_err());
        assert!(LinearArrangement::from_order(vec![0, 2]).is_err());
        assert!(LinearArrangement::from_positions(&[0, 1]).is_err());
        assert!(cutwidth_profile(&Graph::empty(1), &LinearArrangement::identity(1)).is_err());
        let g = fixtures::path(4);
        assert!(matches!(
            cutwidth_profile(&g, &LinearArrangement::identity(3)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn text_format() {
        let la = la_prime();
        assert_eq!(la.to_text(), "0\n3\n1\n2\n4\n");
        let back = LinearArrangement::parse(&la.to_text(), Path::new("x")).unwrap();
        assert_eq!(back, la);
        assert!(LinearArrangement::parse("0\nfoo\n", Path::new("x")).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = (Graph, LinearArrangement)> {
        (2usize..50, any::<u64>(), 0.05f64..0.6).prop_flat_map(|(n, seed, p)| {
            let g = gen_erdos_renyi(n, p, RngSeed(seed)).unwrap();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
                .prop_map(|(g, o)| (g, LinearArrangement::from_order(o).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn difference_array_matches_naive((g, la) in arb_instance()) {
            let prof = cutwidth_profile(&g, &la).unwrap();
            prop_assert_eq!(&prof.cuts, &naive_cuts(&g, &la));
            prop_assert_eq!(prof.max_cut, *prof.cuts.iter().max().unwrap());
            prop_assert!(prof.cuts[0] as usize <= g.degree(la.node_at(1)));
            prop_assert!(prof.cuts.iter().all(|&c| c as usize <= g.n_edges()));
        }

        #[test]
        fn reversal_symmetry((g, la) in arb_instance()) {
            let rev = la.reversed();
            prop_assert!(rev.validate().is_ok());
            let a = cutwidth_profile(&g, &la).unwrap();
            let b = cutwidth_profile(&g, &rev).unwrap();
            let mut flipped = b.cuts.clone();
            flipped.reverse();
            prop_assert_eq!(a.cuts, flipped);
            prop_assert_eq!(a.max_cut, b.max_cut);
            prop_assert_eq!(p_sum_cost(&g, &la, 1).unwrap(), p_sum_cost(&g, &rev, 1).unwrap());
        }

        #[test]
        fn arrangement_text_round_trip(o in Just((0..40usize).collect::<Vec<_>>()).prop_shuffle()) {
            let la = LinearArrangement::from_order(o).unwrap();
            prop_assert_eq!(LinearArrangement::parse(&la.to_text(), Path::new("x")).unwrap(), la);
        }
    }
}
