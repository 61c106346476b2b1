//! Exhaustive minimum-cutwidth search for small graphs.

use super::LinearArrangement;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EXACT_MAX_NODES: usize = 10;

/// Minimum maximum cutwidth over all arrangements, with the minimizer whose
/// node sequence is lexicographically smallest.
///
/// Depth-first over prefixes in lexicographic order; the cut after a prefix
/// `S` grows by `deg(v) − 2|N(v) ∩ S|` when `v` is appended, and branches
/// whose running maximum already reaches the incumbent are pruned.
pub fn order_exact_min_cutwidth(graph: &Graph) -> Result<(LinearArrangement, u32)> {
    let n = graph.n_nodes();
    if n > EXACT_MAX_NODES {
        return Err(Error::param(
            "graph",
            format!("exact search limited to {EXACT_MAX_NODES} nodes, got {n}"),
        ));
    }
    if n < 2 {
        return Ok((LinearArrangement::identity(n), 0));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut search = Search {
        masks,
        n,
        prefix: Vec::with_capacity(n),
        best: None,
        best_width: u32::MAX,
    };
    search.descend(0, 0, 0);
    let order = search.best.expect("some arrangement exists");
    Ok((LinearArrangement::from_order(order)?, search.best_width))
}

struct Search {
    masks: Vec<u32>,
    n: usize,
    prefix: Vec<usize>,
    best: Option<Vec<usize>>,
    best_width: u32,
}

impl Search {
    fn descend(&mut self, used: u32, cut: u32, width: u32) {
        if self.prefix.len() == self.n {
            if width < self.best_width {
                self.best_width = width;
                self.best = Some(self.prefix.clone());
            }
            return;
        }
        for v in 0..self.n {
            if used & (1 << v) != 0 {
                continue;
            }
            let deg = self.masks[v].count_ones();
            let inside = (self.masks[v] & used).count_ones();
            let next_cut = cut + deg - 2 * inside;
            // The cut after the last node is always zero and not a location.
            let next_width = if self.prefix.len() + 1 < self.n {
                width.max(next_cut)
            } else {
                width
            };
            if next_width >= self.best_width {
                continue;
            }
            self.prefix.push(v);
            self.descend(used | (1 << v), next_cut, next_width);
            self.prefix.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::cutwidth_profile;
    use crate::graph::{fixtures, gen_erdos_renyi};
    use crate::rng::RngSeed;

    #[test]
    fn known_minima() {
        let (la, w) = order_exact_min_cutwidth(&fixtures::figure_path()).unwrap();
        assert_eq!(w, 1);
        assert_eq!(cutwidth_profile(&fixtures::figure_path(), &la).unwrap().max_cut, 1);
        assert_eq!(order_exact_min_cutwidth(&fixtures::complete(4)).unwrap().1, 4);
        assert_eq!(order_exact_min_cutwidth(&fixtures::cycle(6)).unwrap().1, 2);
        assert!(order_exact_min_cutwidth(&fixtures::path(11)).is_err());
    }

    #[test]
    fn lexicographically_first_minimizer() {
        // Path 0-3-1-2-4: the walk starting at the smallest end node is
        // 0,3,1,2,4 and no sequence starting 0,1.. or 0,2.. reaches width 1.
        let (la, _) = order_exact_min_cutwidth(&fixtures::figure_path()).unwrap();
        assert_eq!(la.order(), &[0, 3, 1, 2, 4]);
    }

    #[test]
    fn agrees_with_brute_force() {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            perms(n - 1)
                .into_iter()
                .flat_map(|p| {
                    (0..=p.len()).map(move |i| {
                        let mut q = p.clone();
                        q.insert(i, n - 1);
                        q
                    })
                })
                .collect()
        }
        for s in 0..20 {
            let g = gen_erdos_renyi(7, 0.45, RngSeed(s)).unwrap();
            let brute = perms(7)
                .into_iter()
                .map(|o| cutwidth_profile(&g, &LinearArrangement::from_order(o).unwrap()).unwrap().max_cut)
                .min()
                .unwrap();
            assert_eq!(order_exact_min_cutwidth(&g).unwrap().1, brute, "seed {s}");
        }
    }
}
