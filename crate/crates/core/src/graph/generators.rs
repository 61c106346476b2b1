use std::collections::HashSet;

use rand::Rng as _;
use rand_distr::{Distribution, Geometric};

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::RngSeed;

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{p} is not a probability")))
    }
}

/// G(n, p): every pair present independently with probability `p`.
///
/// Pairs are visited in lexicographic order and skipped over with geometric
/// jumps, so the cost is proportional to the number of edges produced.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: RngSeed) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    check_probability("p", p)?;
    let mut edges = Vec::new();
    if p == 1.0 {
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                edges.push((i, j));
            }
        }
    } else if p > 0.0 {
        let mut rng = seed.rng();
        let skip = Geometric::new(p).map_err(|e| Error::param("p", e.to_string()))?;
        // (i, j) is the next candidate pair; row i holds pairs (i, i+1..n).
        let (mut i, mut j) = (0u64, 0u64);
        let n = n as u64;
        loop {
            let mut jump = skip.sample(&mut rng) + 1;
            loop {
                let left_in_row = n - 1 - j.max(i);
                if jump <= left_in_row {
                    j = j.max(i) + jump;
                    break;
                }
                jump -= left_in_row;
                i += 1;
                j = i;
                if i + 1 >= n {
                    break;
                }
            }
            if i + 1 >= n {
                break;
            }
            edges.push((i as u32, j as u32));
        }
    }
    Ok(Graph::from_canonical(n, edges))
}

/// Barabási–Albert growth from an `(m+1)`-clique; each new node attaches to
/// `m` distinct existing nodes chosen with probability proportional to degree.
pub fn gen_preferential_attachment(n: usize, m: usize, seed: RngSeed) -> Result<Graph> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if n <= m {
        return Err(Error::param("n", format!("must exceed m = {m}")));
    }
    let mut rng = seed.rng();
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + (n - m - 1) * m);
    // Every edge endpoint once: sampling uniformly from it is degree-proportional.
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..=m as u32 {
        for j in i + 1..=m as u32 {
            edges.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut targets: Vec<u32> = Vec::with_capacity(m);
    for v in (m + 1) as u32..n as u32 {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_canonical(n, edges))
}

/// Watts–Strogatz: ring lattice where each node links to its `k` nearest
/// ring neighbors, then each lattice edge `(u, u+j)` is rewired to a uniform
/// new endpoint with probability `beta_rewire`. Rewiring never creates a
/// self-loop or duplicate, so the edge count stays `n*k/2`.
pub fn gen_small_world(n: usize, k: usize, beta_rewire: f64, seed: RngSeed) -> Result<Graph> {
    if !k.is_multiple_of(2) {
        return Err(Error::param("k", format!("{k} is odd")));
    }
    if k >= n {
        return Err(Error::param("k", format!("must be below n = {n}")));
    }
    check_probability("beta", beta_rewire)?;
    let key = |a: usize, b: usize| if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) };
    let mut present: HashSet<(u32, u32)> = HashSet::with_capacity(n * k / 2);
    let mut degree = vec![k; n];
    for j in 1..=k / 2 {
        for u in 0..n {
            present.insert(key(u, (u + j) % n));
        }
    }
    let mut rng = seed.rng();
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.random::<f64>() >= beta_rewire || degree[u] >= n - 1 {
                continue;
            }
            let mut w = rng.random_range(0..n);
            while w == u || present.contains(&key(u, w)) {
                w = rng.random_range(0..n);
            }
            present.remove(&key(u, v));
            present.insert(key(u, w));
            degree[v] -= 1;
            degree[w] += 1;
        }
    }
    let mut edges: Vec<(u32, u32)> = present.into_iter().collect();
    edges.sort_unstable();
    Ok(Graph::from_canonical(n, edges))
}

/// Random geometric graph in the unit square: an edge joins every pair of
/// points at Euclidean distance `<= radius`.
pub fn gen_geometric(n: usize, radius: f64, seed: RngSeed) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(radius >= 0.0) {
        return Err(Error::param("radius", format!("{radius} is negative")));
    }
    let points = geometric_points(n, seed);
    let mut edges = Vec::new();
    if radius > 0.0 {
        // Bucket points into square cells of side >= radius; only the 3x3
        // neighborhood of a cell can hold partners.
        let cells = ((1.0 / radius).floor() as usize).clamp(1, 1024);
        let cell_of = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); cells * cells];
        for (i, &(x, y)) in points.iter().enumerate() {
            buckets[cell_of(y) * cells + cell_of(x)].push(i as u32);
        }
        let r2 = radius * radius;
        for (i, &(x, y)) in points.iter().enumerate() {
            let (cx, cy) = (cell_of(x), cell_of(y));
            for ny in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
                for nx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                    for &j in &buckets[ny * cells + nx] {
                        if (j as usize) <= i {
                            continue;
                        }
                        let (px, py) = points[j as usize];
                        if (px - x).powi(2) + (py - y).powi(2) <= r2 {
                            edges.push((i as u32, j));
                        }
                    }
                }
            }
        }
        edges.sort_unstable();
    }
    Ok(Graph::from_canonical(n, edges))
}

/// The point set `gen_geometric` draws for `(n, seed)`.
pub(crate) fn geometric_points(n: usize, seed: RngSeed) -> Vec<(f64, f64)> {
    let mut rng = seed.rng();
    (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect()
}

/// `rows x cols` lattice with 4-neighborhood; node `(r, c)` has id `r*cols + c`.
pub fn gen_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::param("rows/cols", "must be at least 1"));
    }
    let id = |r: usize, c: usize| (r * cols + c) as u32;
    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_canonical(rows * cols, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use proptest::prelude::*;

    #[test]
    fn erdos_renyi_extremes() {
        let k4 = gen_erdos_renyi(4, 1.0, RngSeed(3)).unwrap();
        assert_eq!(k4, fixtures::complete(4));
        assert_eq!(gen_erdos_renyi(100, 0.0, RngSeed(3)).unwrap().n_edges(), 0);
        assert!(gen_erdos_renyi(10, 1.5, RngSeed(0)).is_err());
        assert!(gen_erdos_renyi(10, -0.1, RngSeed(0)).is_err());
    }

    #[test]
    fn erdos_renyi_edge_count_is_binomial() {
        // C(1000,2)*0.01 = 4995, sd = sqrt(4995*0.99) ~ 70.3, 4 sd ~ 282.
        let mean = 499_500.0 * 0.01;
        let sd = (mean * 0.99f64).sqrt();
        for s in 0..5 {
            let m = gen_erdos_renyi(1000, 0.01, RngSeed(s)).unwrap().n_edges() as f64;
            assert!((m - mean).abs() <= 4.0 * sd, "seed {s}: {m}");
        }
    }

    #[test]
    fn erdos_renyi_covers_every_pair() {
        // With p close to 1 the skipping walk must still reach the last pair.
        let g = gen_erdos_renyi(30, 0.999_999, RngSeed(5)).unwrap();
        assert!(g.n_edges() >= 430);
        assert!(g.edges().iter().all(|&(u, v)| u < v && v < 30));
    }

    #[test]
    fn preferential_attachment_counts() {
        let tri = gen_preferential_attachment(3, 2, RngSeed(1)).unwrap();
        assert_eq!(tri, fixtures::complete(3));
        let g = gen_preferential_attachment(500, 2, RngSeed(8)).unwrap();
        assert_eq!(g.n_edges(), 997);
        assert_eq!(g, gen_preferential_attachment(500, 2, RngSeed(8)).unwrap());
        assert!(gen_preferential_attachment(2, 2, RngSeed(1)).is_err());
    }

    #[test]
    fn small_world_cases() {
        assert_eq!(gen_small_world(10, 2, 0.0, RngSeed(0)).unwrap(), fixtures::cycle(10));
        assert_eq!(gen_small_world(5, 4, 0.0, RngSeed(0)).unwrap(), fixtures::complete(5));
        assert_eq!(gen_small_world(100, 4, 0.1, RngSeed(2)).unwrap().n_edges(), 200);
        assert!(gen_small_world(10, 3, 0.1, RngSeed(0)).is_err());
        assert!(gen_small_world(4, 4, 0.1, RngSeed(0)).is_err());
    }

    #[test]
    fn geometric_cases() {
        assert_eq!(gen_geometric(2, 2f64.sqrt(), RngSeed(4)).unwrap().n_edges(), 1);
        assert_eq!(gen_geometric(50, 0.0, RngSeed(4)).unwrap().n_edges(), 0);
    }

    #[test]
    fn geometric_matches_pairwise_check() {
        for s in 0..4 {
            let seed = RngSeed(100 + s);
            let g = gen_geometric(100, 0.2, seed).unwrap();
            let pts = geometric_points(100, seed);
            let mut expect = Vec::new();
            for i in 0..100 {
                for j in i + 1..100 {
                    let d = ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt();
                    if d <= 0.2 {
                        expect.push((i as u32, j as u32));
                    }
                }
            }
            assert_eq!(g.edges(), expect.as_slice());
        }
    }

    #[test]
    fn grid_counts() {
        assert_eq!(gen_grid(1, 5).unwrap(), fixtures::path(5));
        assert_eq!(gen_grid(3, 3).unwrap().n_edges(), 12);
        assert_eq!(gen_grid(2, 2).unwrap(), Graph::from_edges(4, [(0, 1), (1, 3), (3, 2), (2, 0)]).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn generators_produce_valid_graphs(n in 6usize..80, seed in any::<u64>(), p in 0.0f64..1.0) {
            let seed = RngSeed(seed);
            let graphs = [
                gen_erdos_renyi(n, p * 0.3, seed).unwrap(),
                gen_preferential_attachment(n, 1 + n % 3, seed).unwrap(),
                gen_small_world(n, 4, p, seed).unwrap(),
                gen_geometric(n, 0.05 + p * 0.3, seed).unwrap(),
                gen_grid(1 + n % 7, 1 + n / 7).unwrap(),
            ];
            for g in &graphs {
                prop_assert!(g.validate().is_ok());
            }
            prop_assert_eq!(&graphs[0], &gen_erdos_renyi(n, p * 0.3, seed).unwrap());
            prop_assert_eq!(&graphs[2], &gen_small_world(n, 4, p, seed).unwrap());
            prop_assert_eq!(graphs[2].n_edges(), 2 * n);
        }
    }
}
