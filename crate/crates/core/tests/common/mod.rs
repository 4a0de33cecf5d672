//! Shared generators for the integration suites: Prüfer-coded trees
//! (exhaustive and random), random graphs, and the low-rank complete
//! bipartite evaluation.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use skewmatch::spectral::SkewMatrix;
use skewmatch::{Graph, Rational};

/// Decodes a Prüfer sequence over `1..=n` into tree edges (appended to
/// `edges`). Linear-time pointer walk.
pub fn prufer_decode(seq: &[usize], n: usize, edges: &mut Vec<(usize, usize)>) {
    debug_assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v] += 1;
    }
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n));
}

/// Visits every labeled tree on `n` vertices exactly once (all `n^(n-2)`
/// Prüfer sequences).
pub fn for_each_tree(n: usize, mut f: impl FnMut(&Graph)) {
    if n == 1 {
        f(&Graph::new(1, []).unwrap());
        return;
    }
    if n == 2 {
        f(&Graph::new(2, [(1, 2)]).unwrap());
        return;
    }
    let len = n - 2;
    let mut seq = vec![1usize; len];
    let mut edges = Vec::with_capacity(n - 1);
    loop {
        edges.clear();
        prufer_decode(&seq, n, &mut edges);
        let g = Graph::new(n, edges.iter().copied()).unwrap();
        f(&g);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            seq[i] += 1;
            if seq[i] <= n {
                break;
            }
            seq[i] = 1;
            i += 1;
        }
    }
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    if n == 1 {
        return Graph::new(1, []).unwrap();
    }
    if n == 2 {
        return Graph::new(2, [(1, 2)]).unwrap();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    let mut edges = Vec::with_capacity(n - 1);
    prufer_decode(&seq, n, &mut edges);
    Graph::new(n, edges).unwrap()
}

/// Erdős–Rényi graph: each pair is an edge with probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    loop {
        let g = random_graph(n, p, rng);
        if g.is_connected() {
            return g;
        }
    }
}

/// Random skew matrix supported on the edges of `g`, magnitudes in `[1, 2)`
/// with random signs.
pub fn random_skew_on_graph(g: &Graph, rng: &mut impl Rng) -> SkewMatrix<f64> {
    let mut a = SkewMatrix::zeros(g.vertex_count());
    for (u, v) in g.edges() {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        a.set(u, v, sign * rng.random_range(1.0..2.0));
    }
    a
}

/// The rank-deficient skew evaluation of K_{p,p}: with x all ones and y
/// equal to one on the first part and two on the second, `xyᵀ - yxᵀ` has
/// exactly one nonzero conjugate pair (`±pi`).
pub fn bipartite_lowrank_rational(p: usize) -> SkewMatrix<Rational> {
    let n = 2 * p;
    let x = vec![1i64; n];
    let y: Vec<i64> = (0..n).map(|i| if i < p { 1 } else { 2 }).collect();
    let mut a = SkewMatrix::zeros(n);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let v = x[i - 1] * y[j - 1] - y[i - 1] * x[j - 1];
            if v != 0 {
                a.set(i, j, Rational::from_integer(BigInt::from(v)));
            }
        }
    }
    a
}

/// K_{p,p} as a graph (parts `1..=p` and `p+1..=2p`).
pub fn complete_bipartite(p: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=p {
        for v in (p + 1)..=(2 * p) {
            edges.push((u, v));
        }
    }
    Graph::new(2 * p, edges).unwrap()
}

/// Strictly decreasing targets drawn uniformly from `[lo, hi]` with all
/// consecutive gaps at least `min_gap`.
pub fn distinct_targets(k: usize, lo: f64, hi: f64, min_gap: f64, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let mut mu: Vec<f64> = (0..k).map(|_| rng.random_range(lo..hi)).collect();
        mu.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if mu.windows(2).all(|w| w[0] - w[1] >= min_gap) {
            return mu;
        }
    }
}
