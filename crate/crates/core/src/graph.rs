//! Graph construction and Laplacian assembly.
//!
//! Graphs are stored as undirected edge lists with nonnegative weights;
//! the combinatorial Laplacian is materialized dense, which is adequate at
//! the few-thousand-vertex scale this crate targets. Any user-supplied
//! symmetric positive semi-definite matrix can stand in for the Laplacian
//! through [`OperatorMatrix`].

use ndarray::{Array2, ArrayView2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;

/// One undirected edge. Canonical form keeps `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// A weighted undirected graph, optionally carrying vertex coordinates.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    coords: Option<Array2<f64>>,
}

impl Graph {
    /// Build a graph from an edge list, canonicalizing edge orientation.
    ///
    /// Rejects self-loops, negative or non-finite weights, out-of-range
    /// endpoints, and duplicate edges with conflicting weights. Exact
    /// duplicates (including the reversed orientation) collapse to one
    /// edge.
    pub fn new(n: usize, edges: Vec<Edge>, coords: Option<Array2<f64>>) -> Result<Self> {
        if let Some(c) = &coords {
            if c.nrows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} coordinate rows for {} vertices",
                    c.nrows(),
                    n
                )));
            }
        }
        let mut canonical: Vec<Edge> = Vec::with_capacity(edges.len());
        for e in edges {
            if e.i == e.j {
                return Err(Error::InvalidArgument(format!(
                    "self-loop at vertex {}",
                    e.i
                )));
            }
            if e.i >= n || e.j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range for {} vertices",
                    e.i, e.j, n
                )));
            }
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) has invalid weight {}",
                    e.i, e.j, e.weight
                )));
            }
            let (i, j) = if e.i < e.j { (e.i, e.j) } else { (e.j, e.i) };
            canonical.push(Edge {
                i,
                j,
                weight: e.weight,
            });
        }
        canonical.sort_by_key(|e| (e.i, e.j));
        let mut deduped: Vec<Edge> = Vec::with_capacity(canonical.len());
        for e in canonical {
            match deduped.last() {
                Some(last) if last.i == e.i && last.j == e.j => {
                    if last.weight != e.weight {
                        return Err(Error::InvalidArgument(format!(
                            "conflicting weights for edge ({}, {}): {} vs {}",
                            e.i, e.j, last.weight, e.weight
                        )));
                    }
                }
                _ => deduped.push(e),
            }
        }
        Ok(Graph {
            n,
            edges: deduped,
            coords,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn coords(&self) -> Option<&Array2<f64>> {
        self.coords.as_ref()
    }

    /// Average degree counting each undirected edge at both endpoints.
    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    /// Dense symmetric weighted adjacency matrix.
    pub fn adjacency(&self) -> Array2<f64> {
        let mut w = Array2::<f64>::zeros((self.n, self.n));
        for e in &self.edges {
            w[[e.i, e.j]] = e.weight;
            w[[e.j, e.i]] = e.weight;
        }
        w
    }
}

/// A dense symmetric positive semi-definite operator, e.g. a graph
/// Laplacian. Symmetry is validated on construction; the PSD property is
/// checked when the operator is eigendecomposed.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: Array2<f64>,
}

impl OperatorMatrix {
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                n,
                matrix.ncols()
            )));
        }
        if let Some(bad) = matrix.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("operator entry {bad}")));
        }
        let scale = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in i + 1..n {
                if (matrix[[i, j]] - matrix[[j, i]]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "operator not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(OperatorMatrix { matrix })
    }

    pub fn identity(n: usize) -> Self {
        OperatorMatrix {
            matrix: Array2::eye(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.matrix.view()
    }
}

/// Combinatorial Laplacian `L = D - W` with `D` the diagonal degree matrix.
pub fn laplacian(g: &Graph) -> OperatorMatrix {
    let n = g.vertex_count();
    let mut l = Array2::<f64>::zeros((n, n));
    for e in g.edges() {
        l[[e.i, e.j]] -= e.weight;
        l[[e.j, e.i]] -= e.weight;
        l[[e.i, e.i]] += e.weight;
        l[[e.j, e.j]] += e.weight;
    }
    OperatorMatrix { matrix: l }
}

fn squared_distance(coords: &ArrayView2<f64>, a: usize, b: usize) -> f64 {
    let mut d2 = 0.0;
    for k in 0..coords.ncols() {
        let diff = coords[[a, k]] - coords[[b, k]];
        d2 += diff * diff;
    }
    d2
}

/// k-nearest-neighbour graph with Gaussian edge weights.
///
/// Each vertex selects its `k` nearest Euclidean neighbours (distance ties
/// broken by lowest index) and the union of the selections is kept.
/// Weights are `exp(-d^2 / sigma^2)` with `sigma` the mean selected
/// nearest-neighbour distance. Duplicate coordinates are rejected.
pub fn knn_graph(coords: &Array2<f64>, k: usize) -> Result<Graph> {
    let n = coords.nrows();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if n < k + 1 {
        return Err(Error::InsufficientData(format!(
            "insufficient points: need at least {} for k = {k}, got {n}",
            k + 1
        )));
    }
    if let Some(bad) = coords.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("coordinate {bad}")));
    }
    let view = coords.view();
    for a in 0..n {
        for b in a + 1..n {
            if squared_distance(&view, a, b) == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "duplicate coordinates at vertices {a} and {b}"
                )));
            }
        }
    }

    // Per-vertex selection pass; sigma averages all n*k selected distances.
    let mut selected: Vec<(usize, usize, f64)> = Vec::with_capacity(n * k);
    let mut sigma_acc = 0.0;
    for a in 0..n {
        let mut dists: Vec<(f64, usize)> = (0..n)
            .filter(|&b| b != a)
            .map(|b| (squared_distance(&view, a, b).sqrt(), b))
            .collect();
        dists.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(d, b) in dists.iter().take(k) {
            selected.push((a, b, d));
            sigma_acc += d;
        }
    }
    let sigma = sigma_acc / (n * k) as f64;

    let edges: Vec<Edge> = selected
        .into_iter()
        .map(|(a, b, d)| Edge {
            i: a,
            j: b,
            weight: (-d * d / (sigma * sigma)).exp(),
        })
        .collect();
    Graph::new(n, edges, Some(coords.clone()))
}

/// Random geometric graph on the unit square with a connection radius
/// tuned by bisection to hit `target_avg_degree +- 0.5`. Deterministic in
/// `seed`; weights are Gaussian in the edge length with `sigma` the mean
/// included edge length.
pub fn random_geometric_graph(n: usize, target_avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    if !(target_avg_degree > 0.0 && target_avg_degree < n as f64) {
        return Err(Error::InvalidArgument(format!(
            "target average degree {target_avg_degree} out of range (0, {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = Array2::from_shape_fn((n, 2), |_| rng.random_range(0.0..1.0));
    let view = coords.view();

    let degree_at = |radius: f64| -> f64 {
        let r2 = radius * radius;
        let mut pairs = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                if squared_distance(&view, a, b) <= r2 {
                    pairs += 1;
                }
            }
        }
        2.0 * pairs as f64 / n as f64
    };

    let mut lo = 0.0f64;
    let mut hi = 2.0f64.sqrt() + 1e-9;
    let mut radius = hi;
    let mut realized = degree_at(radius);
    let mut found = (realized - target_avg_degree).abs() <= 0.5;
    if !found {
        for _ in 0..64 {
            radius = 0.5 * (lo + hi);
            realized = degree_at(radius);
            if (realized - target_avg_degree).abs() <= 0.5 {
                found = true;
                break;
            }
            if realized < target_avg_degree {
                lo = radius;
            } else {
                hi = radius;
            }
        }
    }
    if !found {
        return Err(Error::Convergence(format!(
            "radius bisection failed after 64 iterations; realized average degree {realized:.3} \
             for target {target_avg_degree}"
        )));
    }

    let r2 = radius * radius;
    let mut lengths: Vec<(usize, usize, f64)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let d2 = squared_distance(&view, a, b);
            if d2 <= r2 {
                lengths.push((a, b, d2.sqrt()));
            }
        }
    }
    let sigma = if lengths.is_empty() {
        1.0
    } else {
        lengths.iter().map(|&(_, _, d)| d).sum::<f64>() / lengths.len() as f64
    };
    let edges: Vec<Edge> = lengths
        .into_iter()
        .map(|(a, b, d)| Edge {
            i: a,
            j: b,
            weight: (-d * d / (sigma * sigma)).exp(),
        })
        .collect();
    Graph::new(n, edges, Some(coords))
}

/// True when every vertex is reachable from vertex 0.
pub fn is_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.i].push(e.j);
        adj[e.j].push(e.i);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n
}

/// Validate that `op` behaves like a PSD quadratic form on random probes.
/// Used by tests; a full check happens at eigendecomposition.
pub fn psd_probe(op: &OperatorMatrix, probes: usize, seed: u64) -> bool {
    let n = op.dim();
    let norm = linalg::frobenius(&op.view());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut quad = 0.0;
        let mut norm_x2 = 0.0;
        for i in 0..n {
            norm_x2 += x[i] * x[i];
            for j in 0..n {
                quad += x[i] * op.as_array()[[i, j]] * x[j];
            }
        }
        if quad < -1e-9 * norm * norm_x2 {
            return false;
        }
    }
    true
}
