//! Finite simple undirected graphs on dense vertex ids `0..n`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple undirected graph.
///
/// Vertices are `0..vertex_count()`. Each adjacency list is sorted and
/// free of duplicates, and `u ∈ N(v)` iff `v ∈ N(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

/// Disjoint vertex groups covering every vertex of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    groups: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Wraps groups that the caller guarantees are disjoint.
    pub fn from_groups(groups: Vec<Vec<usize>>) -> Self {
        VertexPartition { groups }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group index of every vertex.
    pub fn membership(&self, vertex_count: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; vertex_count];
        for (i, group) in self.groups.iter().enumerate() {
            for &v in group {
                out[v] = i;
            }
        }
        out
    }
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from unordered vertex pairs. Repeated pairs (in either
    /// orientation) collapse to a single edge.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        vertex_count: n,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edge_list(n, &edges).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edge_list(n, &edges).expect("path edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degs: Vec<_> = self.adjacency.iter().map(Vec::len).collect();
        degs.sort_unstable();
        degs
    }

    /// `|V| - |E|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }

    /// Disjoint union `self ⊕ other`; returns the union and the id offset of
    /// `other`'s vertices in it.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, usize) {
        let offset = self.vertex_count();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(
            other
                .adjacency
                .iter()
                .map(|list| list.iter().map(|&v| v + offset).collect()),
        );
        (Graph { adjacency }, offset)
    }

    /// Connected components, ordered by minimum vertex id; each group sorted.
    pub fn connected_components(&self) -> VertexPartition {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut groups = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut group = Vec::new();
            while let Some(v) = queue.pop_front() {
                group.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            group.sort_unstable();
            groups.push(group);
        }
        VertexPartition { groups }
    }

    /// True for graphs with exactly one component. The empty graph is not
    /// connected.
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adjacency = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<_> = self.adjacency[v]
                    .iter()
                    .filter(|&&u| index[u] != usize::MAX)
                    .map(|&u| index[u])
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph { adjacency }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.vertex_count());
        let mut adjacency = vec![Vec::new(); self.vertex_count()];
        for (v, list) in self.adjacency.iter().enumerate() {
            let mut mapped: Vec<_> = list.iter().map(|&u| perm[u]).collect();
            mapped.sort_unstable();
            adjacency[perm[v]] = mapped;
        }
        Graph { adjacency }
    }

    /// Parent array of the BFS tree rooted at `root` (`None` for the root and
    /// for unreachable vertices). Neighbors are visited in increasing order.
    pub fn bfs_parents(&self, root: usize) -> Vec<Option<usize>> {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }
        parent
    }

    /// Checks the symmetry and simplicity invariants by full scan.
    pub fn check_invariants(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(v, list)| {
            list.windows(2).all(|w| w[0] < w[1])
                && list
                    .iter()
                    .all(|&u| u != v && u < self.vertex_count() && self.has_edge(u, v))
        })
    }

    /// True iff `map` is a bijection `V(self) → V(other)` preserving
    /// adjacency in both directions.
    pub fn is_isomorphism(&self, other: &Graph, map: &[usize]) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || map.len() != n || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut hit = vec![false; n];
        for &m in map {
            if m >= n || hit[m] {
                return false;
            }
            hit[m] = true;
        }
        // Injective on vertices and equal edge counts: edge preservation one
        // way suffices.
        self.edges()
            .into_iter()
            .all(|(u, v)| other.has_edge(map[u], map[v]))
    }
}
