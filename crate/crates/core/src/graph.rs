//! Simple undirected graphs on vertices `1..=n` and their matchings.
//!
//! The matching search is an augmenting-path search with blossom
//! contraction, so it is exact on general (non-bipartite) graphs. A
//! brute-force matching counter and a Tutte certificate are provided as
//! independent oracles for it at desk scale.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

/// Vertex budget for the exhaustive Tutte subset scan.
pub const TUTTE_LIMIT: usize = 20;

const NONE: usize = usize::MAX;

/// Errors from graph construction, parsing, and the combinatorial operations.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("invalid edge {{{u}, {v}}}: {msg}")]
    InvalidEdge { u: usize, v: usize, msg: String },
    #[error("graph is not connected")]
    Disconnected,
    #[error("not a matching of the graph: {0}")]
    NotAMatching(String),
    #[error("order {n} exceeds the exhaustive-check limit {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Simple undirected graph on vertices `1..=n`.
///
/// Isolated vertices are significant: two graphs are equal exactly when
/// both the order and the edge set agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing every pair to `(min, max)` and
    /// collapsing duplicates. Self-loops and out-of-range endpoints are
    /// rejected.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::InvalidEdge {
                    u: a,
                    v: b,
                    msg: "self-loop".into(),
                });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if u == 0 {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v > n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            set.insert((u, v));
        }
        Ok(Self { n, edges: set })
    }

    /// Parses edge-list text: one `u v` pair per line, `#` starts a
    /// comment, and an optional `n <count>` header may raise the vertex
    /// count above the largest endpoint seen.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut n = 0usize;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            let first = tokens.next().expect("nonempty line has a token");
            if first == "n" {
                let count = tokens
                    .next()
                    .ok_or_else(|| GraphError::Parse {
                        line,
                        msg: "header needs a count: expected `n <count>`".into(),
                    })?
                    .parse::<usize>()
                    .map_err(|e| GraphError::Parse {
                        line,
                        msg: format!("bad vertex count: {e}"),
                    })?;
                if tokens.next().is_some() {
                    return Err(GraphError::Parse {
                        line,
                        msg: "trailing tokens after `n <count>`".into(),
                    });
                }
                n = n.max(count);
                continue;
            }
            let parse_vertex = |tok: &str| -> Result<usize, GraphError> {
                let v = tok.parse::<usize>().map_err(|e| GraphError::Parse {
                    line,
                    msg: format!("bad vertex `{tok}`: {e}"),
                })?;
                if v == 0 {
                    return Err(GraphError::Parse {
                        line,
                        msg: "vertices are 1-based".into(),
                    });
                }
                Ok(v)
            };
            let u = parse_vertex(first)?;
            let v = parse_vertex(tokens.next().ok_or_else(|| GraphError::Parse {
                line,
                msg: "expected `u v`".into(),
            })?)?;
            if tokens.next().is_some() {
                return Err(GraphError::Parse {
                    line,
                    msg: "trailing tokens after `u v`".into(),
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, v });
            }
            n = n.max(u).max(v);
            edges.push((u, v));
        }
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    /// Neighbor lists indexed by vertex (slot 0 unused), each ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() == self.n - 1 && self.is_connected()
    }

    /// Copy of the graph with one edge removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let key = if u < v { (u, v) } else { (v, u) };
        let mut edges = self.edges.clone();
        edges.remove(&key);
        Self { n: self.n, edges }
    }
}

/// A set of vertex-disjoint edges of some graph, kept as sorted `(u, v)`
/// pairs with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    /// Validates the edges against `parent` (membership and disjointness)
    /// and normalizes them.
    pub fn new(
        parent: &Graph,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut sorted: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        sorted.sort_unstable();
        sorted.dedup();
        let m = Self { edges: sorted };
        m.validate_for(parent)?;
        Ok(m)
    }

    pub(crate) fn from_sorted_pairs(edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self { edges }
    }

    /// Checks that every edge belongs to `g` and no vertex is covered twice.
    pub fn validate_for(&self, g: &Graph) -> Result<(), GraphError> {
        let mut covered = vec![false; g.vertex_count() + 1];
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(GraphError::NotAMatching(format!(
                    "edge {{{u}, {v}}} is not an edge of the graph"
                )));
            }
            for w in [u, v] {
                if covered[w] {
                    return Err(GraphError::NotAMatching(format!(
                        "vertex {w} is covered twice"
                    )));
                }
                covered[w] = true;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn covers(&self, v: usize) -> bool {
        self.edges.iter().any(|&(a, b)| a == v || b == v)
    }
}

/// Permutation of `1..=n` that sends the `j`-th matching edge to
/// `{2j-1, 2j}`, together with the matching in relabeled coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRelabeling {
    to_new: Vec<usize>,
    to_old: Vec<usize>,
    image_matching: Matching,
}

impl VertexRelabeling {
    /// New label of an original vertex.
    pub fn apply(&self, v: usize) -> usize {
        self.to_new[v]
    }

    /// Original label of a relabeled vertex.
    pub fn invert(&self, v: usize) -> usize {
        self.to_old[v]
    }

    /// Old-to-new map indexed by original vertex; slot 0 is unused.
    pub fn perm(&self) -> &[usize] {
        &self.to_new
    }

    /// New-to-old map indexed by relabeled vertex; slot 0 is unused.
    pub fn inverse_perm(&self) -> &[usize] {
        &self.to_old
    }

    pub fn image_matching(&self) -> &Matching {
        &self.image_matching
    }

    pub fn is_identity(&self) -> bool {
        self.to_new.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The graph in relabeled coordinates.
    pub fn apply_graph(&self, g: &Graph) -> Graph {
        Graph::new(
            g.vertex_count(),
            g.edges().map(|(u, v)| (self.to_new[u], self.to_new[v])),
        )
        .expect("permutation preserves validity")
    }
}

/// Verdict of the exhaustive Tutte condition scan. When the condition
/// fails, `witness` is a vertex set whose deletion leaves more odd
/// components than the set's size.
#[derive(Debug, Clone, Serialize)]
pub struct TutteCertificate {
    pub has_perfect_matching: bool,
    pub witness: Option<Vec<usize>>,
}

/// Parses edge-list text; see [`Graph::parse`].
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    Graph::parse(text)
}

/// Connected components as sorted vertex sets, ordered by least vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = vec![start];
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Number of odd-order components of `G - S`.
pub fn odd_components_after_deletion(g: &Graph, deleted: &[usize]) -> Result<usize, GraphError> {
    let n = g.vertex_count();
    let mut gone = vec![false; n + 1];
    for &v in deleted {
        if v == 0 || v > n {
            return Err(GraphError::VertexOutOfRange { v, n });
        }
        gone[v] = true;
    }
    let adj = g.adjacency();
    Ok(count_odd_components(&adj, &gone, n))
}

fn count_odd_components(adj: &[Vec<usize>], gone: &[bool], n: usize) -> usize {
    let mut seen = vec![false; n + 1];
    let mut stack = Vec::new();
    let mut odd = 0;
    for start in 1..=n {
        if gone[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0usize;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in &adj[v] {
                if !gone[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        odd += size % 2;
    }
    odd
}

/// Exhaustive Tutte-condition check: the graph has a perfect matching if
/// and only if no vertex subset `S` leaves more than `|S|` odd components.
///
/// Scans all `2^n` subsets, so it is gated at `n <= 20`; this is a
/// certificate for desk-scale cross-checks, not a production path.
pub fn tutte_has_perfect_matching(g: &Graph) -> Result<TutteCertificate, GraphError> {
    let n = g.vertex_count();
    if n > TUTTE_LIMIT {
        return Err(GraphError::TooLarge {
            n,
            limit: TUTTE_LIMIT,
        });
    }
    let adj = g.adjacency();
    let mut gone = vec![false; n + 1];
    for mask in 0u32..(1u32 << n) {
        for (v, flag) in gone.iter_mut().enumerate().skip(1) {
            *flag = mask >> (v - 1) & 1 == 1;
        }
        let odd = count_odd_components(&adj, &gone, n);
        if odd > mask.count_ones() as usize {
            let witness = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            return Ok(TutteCertificate {
                has_perfect_matching: false,
                witness: Some(witness),
            });
        }
    }
    Ok(TutteCertificate {
        has_perfect_matching: true,
        witness: None,
    })
}

/// Maximum matching by augmenting-path search with blossom contraction.
///
/// Free vertices are scanned in ascending order and neighbor lists are
/// sorted, so the result is canonical for a given graph.
pub fn maximum_matching(g: &Graph) -> Matching {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u - 1].push(v - 1);
        adj[v - 1].push(u - 1);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut mate = vec![NONE; n];
    for start in 0..n {
        if mate[start] != NONE {
            continue;
        }
        if let Some((finish, parent)) = augmenting_path(&adj, &mate, start) {
            let mut v = finish;
            while v != NONE {
                let pv = parent[v];
                let next = if pv == NONE { NONE } else { mate[pv] };
                mate[v] = pv;
                if pv != NONE {
                    mate[pv] = v;
                }
                v = next;
            }
        }
    }

    let edges: Vec<(usize, usize)> = (0..n)
        .filter(|&v| mate[v] != NONE && v < mate[v])
        .map(|v| (v + 1, mate[v] + 1))
        .collect();
    Matching::from_sorted_pairs(edges)
}

/// BFS for an augmenting path from `start`, contracting blossoms on the
/// fly. Returns the free endpoint and the parent links to walk back.
fn augmenting_path(
    adj: &[Vec<usize>],
    mate: &[usize],
    start: usize,
) -> Option<(usize, Vec<usize>)> {
    let n = adj.len();
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut queue = VecDeque::new();
    used[start] = true;
    queue.push_back(start);

    while let Some(v) = queue.pop_front() {
        for &to in &adj[v] {
            if base[v] == base[to] || mate[v] == to {
                continue;
            }
            if to == start || (mate[to] != NONE && parent[mate[to]] != NONE) {
                // odd cycle through the root of the alternating tree
                let cb = common_base(v, to, &parent, &base, mate);
                let mut in_blossom = vec![false; n];
                mark_blossom(v, cb, to, &mut parent, &base, mate, &mut in_blossom);
                mark_blossom(to, cb, v, &mut parent, &base, mate, &mut in_blossom);
                for i in 0..n {
                    if in_blossom[base[i]] {
                        base[i] = cb;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to] == NONE {
                parent[to] = v;
                if mate[to] == NONE {
                    return Some((to, parent));
                }
                used[mate[to]] = true;
                queue.push_back(mate[to]);
            }
        }
    }
    None
}

fn common_base(
    mut v: usize,
    mut w: usize,
    parent: &[usize],
    base: &[usize],
    mate: &[usize],
) -> usize {
    let mut on_path = vec![false; parent.len()];
    loop {
        v = base[v];
        on_path[v] = true;
        if mate[v] == NONE {
            break;
        }
        v = parent[mate[v]];
    }
    loop {
        w = base[w];
        if on_path[w] {
            return w;
        }
        w = parent[mate[w]];
    }
}

fn mark_blossom(
    mut v: usize,
    b: usize,
    mut child: usize,
    parent: &mut [usize],
    base: &[usize],
    mate: &[usize],
    in_blossom: &mut [bool],
) {
    while base[v] != b {
        in_blossom[base[v]] = true;
        in_blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}

/// Exact matching number by exhaustive branch-and-bound over the lowest
/// uncovered vertex. Exponential; intended for `n` up to the mid-teens
/// where it serves as the oracle for [`maximum_matching`].
pub fn brute_force_matching_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 32, "brute-force oracle is limited to n <= 32");
    let mut adj_mask = vec![0u32; n];
    for (u, v) in g.edges() {
        adj_mask[u - 1] |= 1 << (v - 1);
        adj_mask[v - 1] |= 1 << (u - 1);
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    brute_force_rec(&adj_mask, all)
}

fn brute_force_rec(adj: &[u32], free: u32) -> usize {
    if free == 0 {
        return 0;
    }
    let cap = (free.count_ones() / 2) as usize;
    if cap == 0 {
        return 0;
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1 << v);
    // leave v unmatched
    let mut best = brute_force_rec(adj, rest);
    if best == cap {
        return best;
    }
    let mut nbrs = adj[v] & rest;
    while nbrs != 0 {
        let u = nbrs.trailing_zeros();
        nbrs &= nbrs - 1;
        let cand = 1 + brute_force_rec(adj, rest & !(1 << u));
        if cand > best {
            best = cand;
            if best == cap {
                break;
            }
        }
    }
    best
}

/// Spanning tree of a connected graph that contains every edge of `m`.
///
/// While a cycle remains, the lexicographically smallest non-matching edge
/// on the first cycle found (DFS from vertex 1, ascending neighbors) is
/// deleted. Every cycle has such an edge because two matching edges never
/// share a vertex.
pub fn spanning_tree_containing(g: &Graph, m: &Matching) -> Result<Graph, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    m.validate_for(g)?;
    let matched: BTreeSet<(usize, usize)> = m.edges().iter().copied().collect();
    let mut current = g.clone();
    while let Some(cycle) = find_cycle(&current) {
        let (u, v) = cycle
            .into_iter()
            .filter(|e| !matched.contains(e))
            .min()
            .expect("a cycle contains a non-matching edge");
        current = current.without_edge(u, v);
    }
    debug_assert_eq!(current.edge_count(), current.vertex_count() - 1);
    Ok(current)
}

/// First cycle in DFS order, as normalized edges, or `None` if acyclic.
fn find_cycle(g: &Graph) -> Option<Vec<(usize, usize)>> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut parent = vec![0usize; n + 1];
    let mut visited = vec![false; n + 1];
    for root in 1..=n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx == adj[v].len() {
                stack.pop();
                continue;
            }
            let w = adj[v][*idx];
            *idx += 1;
            if w == parent[v] {
                continue;
            }
            if visited[w] {
                // w is an ancestor of v; walk the tree path back to it
                let mut cycle = vec![sorted_pair(v, w)];
                let mut cur = v;
                while cur != w {
                    cycle.push(sorted_pair(cur, parent[cur]));
                    cur = parent[cur];
                }
                return Some(cycle);
            }
            visited[w] = true;
            parent[w] = v;
            stack.push((w, 0));
        }
    }
    None
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Permutation sending the `j`-th matching edge (ordered by least
/// endpoint) to `{2j-1, 2j}` and the remaining vertices to `2k+1..=n` in
/// ascending original order.
pub fn relabel_for_matching(g: &Graph, m: &Matching) -> Result<VertexRelabeling, GraphError> {
    m.validate_for(g)?;
    let n = g.vertex_count();
    let k = m.len();
    let mut to_new = vec![0usize; n + 1];
    for (j, &(a, b)) in m.edges().iter().enumerate() {
        to_new[a] = 2 * j + 1;
        to_new[b] = 2 * j + 2;
    }
    let mut next = 2 * k + 1;
    for slot in to_new.iter_mut().skip(1) {
        if *slot == 0 {
            *slot = next;
            next += 1;
        }
    }
    let mut to_old = vec![0usize; n + 1];
    for v in 1..=n {
        to_old[to_new[v]] = v;
    }
    let image = Matching::from_sorted_pairs((1..=k).map(|j| (2 * j - 1, 2 * j)).collect());
    Ok(VertexRelabeling {
        to_new,
        to_old,
        image_matching: image,
    })
}
