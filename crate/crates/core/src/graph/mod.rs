//! Undirected simple graphs, random generators, edge-list I/O and the
//! spectral helpers the orderings are built on.

mod generators;
mod io;
pub mod spectral;

pub use generators::{
    gen_erdos_renyi, gen_geometric, gen_grid, gen_preferential_attachment, gen_small_world,
};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list, LoadReport};
pub use spectral::{spectral_radius, SpectralRadius};

use crate::error::{Error, Result};

/// Immutable undirected simple graph on nodes `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Adjacency is a
/// CSR layout with sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from arbitrary pairs. Self-loops and duplicates
    /// (in either orientation) are discarded.
    pub fn from_edges<I>(n_nodes: usize, pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::param(
                    "edges",
                    format!("edge ({u}, {v}) out of range for {n_nodes} nodes"),
                ));
            }
            if u == v {
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            edges.push((a as u32, b as u32));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_canonical(n_nodes, edges))
    }

    /// `edges` must be sorted, deduplicated, with `u < v < n_nodes`.
    pub(crate) fn from_canonical(n_nodes: usize, edges: Vec<(u32, u32)>) -> Graph {
        let mut degree = vec![0usize; n_nodes];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n_nodes + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n_nodes].to_vec();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        // Edges are sorted by (u, v): writing v into u's list and u into v's
        // list in this order leaves every list sorted.
        for &(u, v) in &edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
        }
        for &(u, v) in &edges {
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..n_nodes {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Graph {
            n_nodes,
            edges,
            offsets,
            neighbors,
        }
    }

    pub fn empty(n_nodes: usize) -> Graph {
        Self::from_canonical(n_nodes, Vec::new())
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_nodes == 0
    }

    /// Canonical edge list: `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n_nodes).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.n_nodes == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.n_nodes as f64
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Subgraph induced by `nodes`; node `nodes[i]` becomes node `i`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![u32::MAX; self.n_nodes];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = local[w as usize];
                if j != u32::MAX && (i as u32) < j {
                    edges.push((i as u32, j));
                }
            }
        }
        edges.sort_unstable();
        Self::from_canonical(nodes.len(), edges)
    }

    /// Checks every structural invariant. Used by tests and after loading.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::param("graph", msg));
        if self.offsets.len() != self.n_nodes + 1 {
            return bad("offset table has wrong length".into());
        }
        for w in self.edges.windows(2) {
            if w[0] >= w[1] {
                return bad(format!("edges not strictly sorted at {:?}", w[1]));
            }
        }
        for &(u, v) in &self.edges {
            if u >= v || v as usize >= self.n_nodes {
                return bad(format!("non-canonical edge ({u}, {v})"));
            }
        }
        let mut total = 0;
        for v in 0..self.n_nodes {
            let adj = self.neighbors(v);
            total += adj.len();
            for w in adj.windows(2) {
                if w[0] >= w[1] {
                    return bad(format!("neighbor list of {v} not strictly sorted"));
                }
            }
            for &w in adj {
                if w as usize == v {
                    return bad(format!("self-loop at {v}"));
                }
                if !self.has_edge(w as usize, v) {
                    return bad(format!("asymmetric adjacency {v} -> {w}"));
                }
            }
        }
        if total != 2 * self.edges.len() {
            return bad("adjacency size disagrees with edge count".into());
        }
        Ok(())
    }
}

/// Partition of the nodes into connected components. Components are listed
/// by their smallest node id; members within a component ascend.
pub fn connected_components(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.n_nodes();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in graph.neighbors(v) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    /// Two cliques of size `k` joined by the edge `(k-1, k)`.
    pub fn barbell(k: usize) -> Graph {
        let mut e = Vec::new();
        for off in [0, k] {
            for i in 0..k {
                for j in i + 1..k {
                    e.push((off + i, off + j));
                }
            }
        }
        e.push((k - 1, k));
        Graph::from_edges(2 * k, e).unwrap()
    }

    /// The 5-node path v1–v4–v2–v3–v5, in 0-based ids.
    pub fn figure_path() -> Graph {
        Graph::from_edges(5, [(0, 3), (3, 1), (1, 2), (2, 4)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn from_edges_canonicalizes() {
        let g = Graph::from_edges(3, [(1, 0), (0, 1), (2, 2), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.max_degree(), 2);
        g.validate().unwrap();
    }

    #[test]
    fn out_of_range_edge_is_rejected() {
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&complete(4)), vec![vec![0, 1, 2, 3]]);
        assert_eq!(
            connected_components(&Graph::empty(3)),
            vec![vec![0], vec![1], vec![2]]
        );
        let two = Graph::from_edges(6, [(0, 4), (4, 2), (2, 0), (1, 3), (3, 5), (5, 1)]).unwrap();
        assert_eq!(connected_components(&two), vec![vec![0, 2, 4], vec![1, 3, 5]]);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = barbell(3);
        let sub = g.induced_subgraph(&[2, 3, 4]);
        assert_eq!(sub.edges(), &[(0, 1), (1, 2)]);
    }
}
