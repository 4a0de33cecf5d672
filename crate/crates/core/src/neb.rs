//! The nearly-even-branching (NEB) property of trees.
//!
//! A tree on one vertex is NEB at that vertex. A larger tree `T` is NEB at
//! `w` when (i) deleting `w` leaves exactly one odd component if `n` is
//! even and none if `n` is odd, and (ii) the branch hanging off each
//! neighbor `v` of `w` is itself NEB at `v`.
//!
//! Every subtree the recursion ever visits is a *branch*: the component of
//! `T - u` containing a neighbor `v` of `u`, rooted at `v`. The engine
//! below therefore evaluates the property once per directed edge `(u, v)`
//! instead of memoizing on vertex sets, which is what makes the exhaustive
//! tree sweeps in the test suite affordable.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum NebError {
    #[error("input is not a tree (need a connected graph with n-1 edges)")]
    NotATree,
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("invalid path step {step}: {msg}")]
    InvalidPathStep { step: usize, msg: String },
    #[error("tree is NEB at vertex {v}: no non-NEB witness exists below it")]
    NoNonNebWitness { v: usize },
}

/// Where a tree is NEB, plus a witness vertex when it is NEB nowhere.
///
/// The witness `w`, present exactly when `neb_roots` is empty, satisfies
/// "deleting `w` leaves at least two odd components".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NebReport {
    pub neb_roots: Vec<usize>,
    pub is_neb_somewhere: bool,
    pub witness: Option<usize>,
}

/// A subtree reached by deleting a path of vertices: delete `path[0]`,
/// keep the component holding `path[1]`, and so on; `root` anchors the
/// final component.
#[derive(Debug, Clone, Serialize)]
pub struct RootedSubtreeRef {
    #[serde(skip)]
    tree: Graph,
    #[serde(rename = "path")]
    deleted_path: Vec<usize>,
    root: usize,
    vertices: Vec<usize>,
}

impl RootedSubtreeRef {
    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn deleted_path(&self) -> &[usize] {
        &self.deleted_path
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Vertices of the referenced subtree, in original labels, sorted.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Standalone copy of the subtree with vertices renumbered `1..=len`.
    /// Returns the tree, the root's new label, and the original label of
    /// each new vertex (index 0 unused).
    pub fn extract(&self) -> (Graph, usize, Vec<usize>) {
        let mut to_new = vec![0usize; self.tree.vertex_count() + 1];
        let mut to_old = vec![0usize; self.vertices.len() + 1];
        for (i, &v) in self.vertices.iter().enumerate() {
            to_new[v] = i + 1;
            to_old[i + 1] = v;
        }
        let edges = self
            .tree
            .edges()
            .filter(|&(u, v)| to_new[u] != 0 && to_new[v] != 0)
            .map(|(u, v)| (to_new[u], to_new[v]));
        let sub = Graph::new(self.vertices.len(), edges).expect("subtree is a valid graph");
        (sub, to_new[self.root], to_old)
    }
}

/// Per-tree tables indexed by directed edge: branch sizes and NEB flags.
struct TreeEngine {
    n: usize,
    adj: Vec<Vec<usize>>,
    /// directed edge `offset[u] + i` is `(u -> adj[u][i])`
    offset: Vec<usize>,
    /// id -> (u, v) for each directed edge
    ends: Vec<(usize, usize)>,
    branch_size: Vec<usize>,
    branch_neb: Vec<bool>,
}

impl TreeEngine {
    fn build(t: &Graph) -> Result<Self, NebError> {
        if !t.is_tree() {
            return Err(NebError::NotATree);
        }
        let n = t.vertex_count();
        let adj = t.adjacency();
        let mut offset = vec![0usize; n + 2];
        let mut ends = Vec::with_capacity(2 * n.saturating_sub(1));
        for v in 1..=n {
            offset[v + 1] = offset[v] + adj[v].len();
            for &w in &adj[v] {
                ends.push((v, w));
            }
        }
        let dir_edges = ends.len();
        let mut engine = TreeEngine {
            n,
            adj,
            offset,
            ends,
            branch_size: vec![0; dir_edges],
            branch_neb: vec![false; dir_edges],
        };
        engine.fill_sizes();
        engine.fill_neb();
        Ok(engine)
    }

    fn edge_id(&self, u: usize, v: usize) -> usize {
        let pos = self.adj[u].binary_search(&v).expect("v adjacent to u");
        self.offset[u] + pos
    }

    /// Branch sizes for every directed edge via one rooted DFS: the branch
    /// below a tree edge has its subtree size, the branch above has the
    /// complement.
    fn fill_sizes(&mut self) {
        if self.n == 1 {
            return;
        }
        let mut parent = vec![0usize; self.n + 1];
        let mut order = Vec::with_capacity(self.n);
        let mut stack = vec![1usize];
        let mut seen = vec![false; self.n + 1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut down = vec![1usize; self.n + 1];
        for &v in order.iter().rev() {
            if parent[v] != 0 {
                down[parent[v]] += down[v];
            }
        }
        for id in 0..self.ends.len() {
            let (u, v) = self.ends[id];
            self.branch_size[id] = if parent[v] == u {
                down[v]
            } else {
                self.n - down[u]
            };
        }
    }

    /// NEB flag for every directed edge, children-first (ascending branch
    /// size guarantees the children are already done).
    fn fill_neb(&mut self) {
        let mut ids: Vec<usize> = (0..self.branch_size.len()).collect();
        ids.sort_unstable_by_key(|&id| self.branch_size[id]);
        for id in ids {
            let (u, v) = self.ends[id];
            let size = self.branch_size[id];
            self.branch_neb[id] = if size == 1 {
                true
            } else {
                self.conditions_hold(v, Some(u), size)
            };
        }
    }

    /// Conditions (i) and (ii) at `root` inside the branch that excludes
    /// `blocked` (the whole tree when `blocked` is `None`).
    fn conditions_hold(&self, root: usize, blocked: Option<usize>, size: usize) -> bool {
        let mut odd = 0usize;
        for &w in &self.adj[root] {
            if Some(w) == blocked {
                continue;
            }
            let id = self.edge_id(root, w);
            if !self.branch_neb[id] {
                return false;
            }
            odd += self.branch_size[id] % 2;
        }
        match size % 2 {
            0 => odd == 1,
            _ => odd == 0,
        }
    }

    fn neb_at_root(&self, w: usize) -> bool {
        if self.n == 1 {
            return true;
        }
        self.conditions_hold(w, None, self.n)
    }

    /// Branch vertices of the component of `T - blocked` containing
    /// `root`, or all vertices when `blocked` is `None`.
    fn branch_vertices(&self, root: usize, blocked: Option<usize>) -> Vec<usize> {
        let mut out = vec![root];
        let mut seen = vec![false; self.n + 1];
        seen[root] = true;
        if let Some(b) = blocked {
            seen[b] = true;
        }
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Descend from `start` into non-NEB branches (smallest neighbor
    /// first) until every child branch of the current root is NEB.
    /// Returns the deleted path and the final root.
    fn descend_to_minimal(&self, start: usize) -> (Vec<usize>, usize, Option<usize>) {
        let mut path = Vec::new();
        let mut root = start;
        let mut blocked: Option<usize> = None;
        loop {
            let next = self
                .adj[root]
                .iter()
                .copied()
                .filter(|&w| Some(w) != blocked)
                .find(|&w| !self.branch_neb[self.edge_id(root, w)]);
            match next {
                Some(w) => {
                    path.push(root);
                    blocked = Some(root);
                    root = w;
                }
                None => return (path, root, blocked),
            }
        }
    }

    fn check_vertex(&self, v: usize) -> Result<(), NebError> {
        if v == 0 || v > self.n {
            return Err(NebError::VertexOutOfRange { v, n: self.n });
        }
        Ok(())
    }
}

/// Whether the tree `t` is NEB at vertex `w`.
pub fn neb_at(t: &Graph, w: usize) -> Result<bool, NebError> {
    let engine = TreeEngine::build(t)?;
    engine.check_vertex(w)?;
    Ok(engine.neb_at_root(w))
}

/// All NEB roots of the tree; when there are none, also a witness vertex
/// whose deletion leaves at least two odd components.
pub fn neb_report(t: &Graph) -> Result<NebReport, NebError> {
    let engine = TreeEngine::build(t)?;
    let neb_roots: Vec<usize> = (1..=engine.n).filter(|&w| engine.neb_at_root(w)).collect();
    let witness = if neb_roots.is_empty() {
        // walk a minimal non-NEB subtree down from vertex 1; its root has
        // at least two odd components in the full tree as well
        let (_, root, _) = engine.descend_to_minimal(1);
        Some(root)
    } else {
        None
    };
    Ok(NebReport {
        is_neb_somewhere: !neb_roots.is_empty(),
        neb_roots,
        witness,
    })
}

/// The subtree reached by deleting `path[0]`, keeping the component of
/// `path[1]`, and so on; `anchor` names the component kept at the last
/// step. Each vertex in the sequence must be adjacent to its predecessor
/// and still present in the current component.
pub fn subtree_after_path(
    t: &Graph,
    path: &[usize],
    anchor: usize,
) -> Result<RootedSubtreeRef, NebError> {
    if !t.is_tree() {
        return Err(NebError::NotATree);
    }
    let n = t.vertex_count();
    let adj = t.adjacency();
    for &v in path.iter().chain([&anchor]) {
        if v == 0 || v > n {
            return Err(NebError::VertexOutOfRange { v, n });
        }
    }
    let mut alive = vec![true; n + 1];
    let seq: Vec<usize> = path.iter().copied().chain([anchor]).collect();
    for i in 0..path.len() {
        let gone = seq[i];
        let keep = seq[i + 1];
        if !alive[gone] {
            return Err(NebError::InvalidPathStep {
                step: i + 1,
                msg: format!("vertex {gone} was already deleted"),
            });
        }
        if !adj[gone].contains(&keep) {
            return Err(NebError::InvalidPathStep {
                step: i + 1,
                msg: format!("{keep} is not a neighbor of {gone}"),
            });
        }
        if !alive[keep] {
            return Err(NebError::InvalidPathStep {
                step: i + 1,
                msg: format!("vertex {keep} is not in the current component"),
            });
        }
        alive[gone] = false;
        // restrict to the component of `keep`
        let mut in_comp = vec![false; n + 1];
        in_comp[keep] = true;
        let mut stack = vec![keep];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if alive[w] && !in_comp[w] {
                    in_comp[w] = true;
                    stack.push(w);
                }
            }
        }
        alive[1..=n].copy_from_slice(&in_comp[1..=n]);
    }
    if !alive[anchor] {
        return Err(NebError::InvalidPathStep {
            step: path.len(),
            msg: format!("anchor {anchor} was deleted"),
        });
    }
    let vertices: Vec<usize> = (1..=n).filter(|&v| alive[v]).collect();
    Ok(RootedSubtreeRef {
        tree: t.clone(),
        deleted_path: path.to_vec(),
        root: anchor,
        vertices,
    })
}

/// A minimal non-NEB subtree with respect to `v1`: descend from `v1`
/// through non-NEB branches (smallest qualifying neighbor first) until
/// every child branch of the current root is NEB at its own root.
///
/// Errors when the tree is already NEB at `v1`.
pub fn minimal_non_neb_subtree(t: &Graph, v1: usize) -> Result<RootedSubtreeRef, NebError> {
    let engine = TreeEngine::build(t)?;
    engine.check_vertex(v1)?;
    if engine.neb_at_root(v1) {
        return Err(NebError::NoNonNebWitness { v: v1 });
    }
    let (path, root, blocked) = engine.descend_to_minimal(v1);
    let vertices = engine.branch_vertices(root, blocked);
    Ok(RootedSubtreeRef {
        tree: t.clone(),
        deleted_path: path,
        root,
        vertices,
    })
}
