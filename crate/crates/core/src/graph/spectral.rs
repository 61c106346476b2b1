//! Eigen-iterations on adjacency and Laplacian operators.
//!
//! Everything here is matrix-free over a CSR layout: power iteration for the
//! adjacency spectral radius, and shifted inverse (subspace) iteration with
//! a conjugate-gradient inner solve for the low Laplacian spectrum.

use rand::Rng as _;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Symmetric nonnegative weighted adjacency in CSR form.
#[derive(Debug, Clone)]
pub struct WeightedAdjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    degree: Vec<f64>,
}

impl WeightedAdjacency {
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n_nodes();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.n_edges());
        offsets.push(0);
        for v in 0..n {
            targets.extend_from_slice(g.neighbors(v));
            offsets.push(targets.len());
        }
        let degree = (0..n).map(|v| g.degree(v) as f64).collect();
        WeightedAdjacency {
            offsets,
            weights: vec![1.0; targets.len()],
            targets,
            degree,
        }
    }

    /// From undirected weighted edges `(u, v, w)`; parallel entries add up,
    /// self-loops are ignored.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut lists: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u != v {
                lists[u].push((v as u32, w));
                lists[v].push((u as u32, w));
            }
        }
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut degree = Vec::with_capacity(n);
        for mut l in lists {
            l.sort_by_key(|&(t, _)| t);
            let mut d = 0.0;
            let mut i = 0;
            while i < l.len() {
                let t = l[i].0;
                let mut w = 0.0;
                while i < l.len() && l[i].0 == t {
                    w += l[i].1;
                    i += 1;
                }
                targets.push(t);
                weights.push(w);
                d += w;
            }
            degree.push(d);
            offsets.push(targets.len());
        }
        WeightedAdjacency {
            offsets,
            targets,
            weights,
            degree,
        }
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    fn row(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&t, &w)| (t as usize, w))
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.degree[v]
    }

    /// Connected components, each ascending, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for (t, _) in self.row(v) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Sub-adjacency induced by `nodes`; `nodes[i]` becomes node `i`.
    pub fn induced(&self, nodes: &[usize]) -> WeightedAdjacency {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            for (t, w) in self.row(v) {
                let j = local[t];
                if j != usize::MAX && i < j {
                    edges.push((i, j, w));
                }
            }
        }
        WeightedAdjacency::from_weighted_edges(nodes.len(), &edges)
    }

    /// `y = A x`, restricted to `active` nodes when a mask is given.
    fn adjacency_apply(&self, x: &[f64], active: Option<&[bool]>, y: &mut [f64]) {
        for v in 0..self.n() {
            if active.is_some_and(|a| !a[v]) {
                y[v] = 0.0;
                continue;
            }
            let mut s = 0.0;
            for (t, w) in self.row(v) {
                if active.is_none_or(|a| a[t]) {
                    s += w * x[t];
                }
            }
            y[v] = s;
        }
    }

    /// `y = (L + shift I) x` with `L = D - A`.
    fn laplacian_apply(&self, x: &[f64], shift: f64, y: &mut [f64]) {
        for v in 0..self.n() {
            let mut s = (self.degree[v] + shift) * x[v];
            for (t, w) in self.row(v) {
                s -= w * x[t];
            }
            y[v] = s;
        }
    }
}

/// Largest adjacency eigenvalue with its principal eigenvector.
#[derive(Debug, Clone)]
pub struct SpectralRadius {
    pub value: f64,
    /// Nonnegative, unit 2-norm.
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// Whether the `+1` diagonal shift was needed to stop oscillation.
    pub shifted: bool,
}

pub const DEFAULT_POWER_ITERATIONS: usize = 20_000;

// Oscillation shows up quickly; slow-but-steady cases lose little by shifting.
const PLAIN_ATTEMPT: usize = 1_000;

/// Spectral radius by power iteration from `(1, …, 1)/√N`.
pub fn spectral_radius(graph: &Graph, tol: f64) -> Result<SpectralRadius> {
    if graph.is_empty() {
        return Err(Error::param("graph", "spectral radius of an empty graph"));
    }
    let adj = WeightedAdjacency::from_graph(graph);
    let start = vec![1.0; graph.n_nodes()];
    principal_eigenpair(&adj, None, &start, tol, DEFAULT_POWER_ITERATIONS)
}

/// Power iteration on the masked adjacency. `start` must be positive on the
/// active nodes. Tries the plain operator first and retries with `A + I` if
/// the iterate keeps oscillating (bipartite-like spectra). The shift keeps
/// eigenvectors and moves every eigenvalue by exactly 1.
pub(crate) fn principal_eigenpair(
    adj: &WeightedAdjacency,
    active: Option<&[bool]>,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<SpectralRadius> {
    match power_iteration(adj, active, start, tol, max_iter.min(PLAIN_ATTEMPT), 0.0) {
        Ok(r) => Ok(r),
        Err(Error::NoConvergence { .. }) => {
            let mut r = power_iteration(adj, active, start, tol, max_iter, 1.0)?;
            r.shifted = true;
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

fn power_iteration(
    adj: &WeightedAdjacency,
    active: Option<&[bool]>,
    start: &[f64],
    tol: f64,
    max_iter: usize,
    shift: f64,
) -> Result<SpectralRadius> {
    let n = adj.n();
    let is_active = |v: usize| active.is_none_or(|a| a[v]);
    let mut x: Vec<f64> = (0..n).map(|v| if is_active(v) { start[v] } else { 0.0 }).collect();
    let norm = l2(&x);
    if norm == 0.0 {
        return Ok(SpectralRadius {
            value: 0.0,
            vector: x,
            iterations: 0,
            shifted: false,
        });
    }
    x.iter_mut().for_each(|v| *v /= norm);
    let vec_tol = tol.sqrt().max(1e-12);
    let mut y = vec![0.0; n];
    let mut lambda = f64::NAN;
    for it in 1..=max_iter {
        adj.adjacency_apply(&x, active, &mut y);
        for v in 0..n {
            if is_active(v) {
                y[v] += shift * x[v];
            }
        }
        let norm = l2(&y);
        if norm == 0.0 {
            // No active edges: A restricted is zero.
            return Ok(SpectralRadius {
                value: 0.0,
                vector: x,
                iterations: it,
                shifted: false,
            });
        }
        y.iter_mut().for_each(|v| *v /= norm);
        let delta = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let converged = (norm - lambda).abs() <= tol * norm && delta <= vec_tol;
        lambda = norm;
        std::mem::swap(&mut x, &mut y);
        if converged {
            return Ok(SpectralRadius {
                value: (lambda - shift).max(0.0),
                vector: x,
                iterations: it,
                shifted: false,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
    })
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

fn remove_mean(x: &mut [f64]) {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= m);
}

/// Conjugate gradients for `(L + shift I) y = b`, warm-started from `y`.
fn cg_solve(adj: &WeightedAdjacency, shift: f64, b: &[f64], y: &mut [f64]) {
    let n = b.len();
    let max_iter = 10 * n + 100;
    let mut ay = vec![0.0; n];
    adj.laplacian_apply(y, shift, &mut ay);
    let mut r: Vec<f64> = b.iter().zip(&ay).map(|(b, a)| b - a).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let stop = 1e-24 * dot(b, b).max(1e-300);
    let mut ap = vec![0.0; n];
    for _ in 0..max_iter {
        if rr <= stop {
            break;
        }
        adj.laplacian_apply(&p, shift, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        axpy(alpha, &p, y);
        axpy(-alpha, &ap, &mut r);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        p.iter_mut().zip(&r).for_each(|(p, r)| *p = r + beta * *p);
    }
}

/// Orthonormalizes `basis` in place against the constant vector and each
/// other (modified Gram–Schmidt). Vectors that collapse are re-seeded.
fn orthonormalize(basis: &mut [Vec<f64>], rng: &mut crate::rng::Rng) {
    for i in 0..basis.len() {
        for attempt in 0..8 {
            let (done, rest) = basis.split_at_mut(i);
            let v = &mut rest[0];
            remove_mean(v);
            for u in done.iter() {
                let c = dot(u, v);
                axpy(-c, u, v);
            }
            remove_mean(v);
            let norm = l2(v);
            if norm > 1e-10 || attempt == 7 {
                v.iter_mut().for_each(|x| *x /= norm.max(1e-300));
                break;
            }
            v.iter_mut().for_each(|x| *x = rng.random::<f64>() - 0.5);
        }
    }
}

/// Orthonormal basis for the `k` smallest Laplacian eigenvectors orthogonal
/// to the constant vector, by shifted inverse subspace iteration.
///
/// Returns the basis and the Rayleigh quotients of its vectors.
pub(crate) fn laplacian_low_subspace(
    adj: &WeightedAdjacency,
    mut basis: Vec<Vec<f64>>,
    seed: RngSeed,
    max_iter: usize,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let n = adj.n();
    let k = basis.len();
    if k == 0 || n < 2 {
        return Ok((basis, Vec::new()));
    }
    let mean_deg = adj.degree.iter().sum::<f64>() / n as f64;
    // Keeps the operator definite when the graph is disconnected.
    let shift = 1e-8 * mean_deg.max(1.0);
    let mut rng = seed.rng();
    orthonormalize(&mut basis, &mut rng);
    let mut lx = vec![0.0; n];
    let rayleigh = |b: &[Vec<f64>], lx: &mut [f64]| -> Vec<f64> {
        b.iter()
            .map(|v| {
                adj.laplacian_apply(v, 0.0, lx);
                dot(v, lx)
            })
            .collect()
    };
    let mut prev = rayleigh(&basis, &mut lx);
    for it in 1..=max_iter {
        let mut next = Vec::with_capacity(k);
        for v in &basis {
            let mut y = v.clone();
            cg_solve(adj, shift, v, &mut y);
            next.push(y);
        }
        orthonormalize(&mut next, &mut rng);
        let q = rayleigh(&next, &mut lx);
        let scale = q.iter().fold(mean_deg.max(1e-12), |a, &b| a.max(b.abs()));
        let change = q
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        basis = next;
        prev = q;
        if it >= 3 && change <= 1e-13 * scale {
            return Ok((basis, prev));
        }
    }
    // Near-degenerate spectra converge slowly in the vectors but the
    // eigenvalues should have settled; anything else is a failure.
    let q = rayleigh(&basis, &mut lx);
    let change = q.iter().zip(&prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if change <= 1e-8 * mean_deg.max(1.0) {
        Ok((basis, q))
    } else {
        Err(Error::NoConvergence {
            iterations: max_iter,
        })
    }
}

/// Fiedler vector of a connected weighted graph.
pub(crate) fn fiedler_vector(adj: &WeightedAdjacency) -> Result<Vec<f64>> {
    let n = adj.n();
    if n <= 1 {
        return Ok(vec![0.0; n]);
    }
    let c = (n as f64 - 1.0) / 2.0;
    // Linear ramp plus an irregular perturbation so the start is never
    // orthogonal to the target eigenvector.
    let start: Vec<f64> = (0..n)
        .map(|i| (i as f64 - c) / n as f64 + 0.05 * (1.7 * i as f64 + 0.3).sin())
        .collect();
    let (mut basis, _) = laplacian_low_subspace(adj, vec![start], RngSeed(0x5eed), 2000)?;
    Ok(basis.pop().unwrap())
}
