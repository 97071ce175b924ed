#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use wlcovers_core::{is_discrete, Graph, VoltageAssignment};

pub fn union_all(parts: &[Graph]) -> Graph {
    parts
        .iter()
        .fold(Graph::empty(0), |acc, g| acc.disjoint_union(g).0)
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<_> = (0..n)
        .tuple_combinations()
        .filter(|_| rng.random_bool(p))
        .collect();
    Graph::from_edge_list(n, &edges).unwrap()
}

/// Random graph on `n` vertices with maximum degree at most `max_deg`.
pub fn random_sparse_graph(rng: &mut impl Rng, n: usize, edges: usize, max_deg: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    pairs.shuffle(rng);
    let mut deg = vec![0; n];
    let mut chosen = Vec::new();
    for (u, v) in pairs {
        if chosen.len() == edges {
            break;
        }
        if deg[u] < max_deg && deg[v] < max_deg {
            deg[u] += 1;
            deg[v] += 1;
            chosen.push((u, v));
        }
    }
    Graph::from_edge_list(n, &chosen).unwrap()
}

/// Uniform-attachment random tree.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::from_edge_list(n, &edges).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random connected graph with `n` vertices and `n - 1 + extra` edges: a
/// random tree plus extra random edges.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, extra: usize) -> Graph {
    let tree = random_tree(rng, n);
    let mut edges: BTreeSet<(usize, usize)> = tree.edges().into_iter().collect();
    let target = (n - 1 + extra).min(n * (n - 1) / 2);
    while edges.len() < target {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    Graph::from_edge_list(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
}

/// Connected graph with discrete stable coloring and rank `rank`.
pub fn random_rigid_base(
    rng: &mut impl Rng,
    n_range: std::ops::RangeInclusive<usize>,
    rank: usize,
) -> Graph {
    loop {
        let n = rng.random_range(n_range.clone());
        let g = random_connected_graph(rng, n, rank);
        if g.edge_count() == n - 1 + rank && is_discrete(&g) {
            return g;
        }
    }
}

pub fn random_voltage(rng: &mut impl Rng, base: &Graph, degree: usize) -> VoltageAssignment {
    let r = wlcovers_core::cover::distinguished_edges(base).len();
    let perms = (0..r).map(|_| random_permutation(rng, degree)).collect();
    VoltageAssignment::on_base(base, degree, perms).unwrap()
}

/// Exhaustive isomorphism test over all `n!` bijections.
pub fn brute_force_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let edges = g.edges();
    (0..n)
        .permutations(n)
        .any(|p| edges.iter().all(|&(u, v)| h.has_edge(p[u], p[v])))
}

/// All permutations of `0..d`.
pub fn symmetric_group(d: usize) -> Vec<Vec<usize>> {
    (0..d).permutations(d).collect()
}

/// Orbit count of `0..d` under the tuple, by union-find.
pub fn orbit_count(tuple: &[&Vec<usize>], d: usize) -> usize {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for perm in tuple {
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..d).filter(|&x| find(&mut parent, x) == x).count()
}

/// All transitive tuples in `S_d^r`.
pub fn transitive_tuples(d: usize, r: usize) -> Vec<Vec<Vec<usize>>> {
    let group = symmetric_group(d);
    std::iter::repeat_n(group.iter(), r)
        .multi_cartesian_product()
        .filter(|t| orbit_count(t, d) == 1)
        .map(|t| t.into_iter().cloned().collect())
        .collect()
}

/// Number of simultaneous-conjugacy orbits of transitive tuples in `S_d^r`.
pub fn conjugacy_classes_of_transitive_tuples(d: usize, r: usize) -> usize {
    let group = symmetric_group(d);
    let canon = |t: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        group
            .iter()
            .map(|s| {
                // s ∘ p ∘ s⁻¹
                let mut inv = vec![0; d];
                for (i, &x) in s.iter().enumerate() {
                    inv[x] = i;
                }
                t.iter()
                    .map(|p| (0..d).map(|i| s[p[inv[i]]]).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap()
    };
    transitive_tuples(d, r)
        .iter()
        .map(canon)
        .collect::<BTreeSet<_>>()
        .len()
}
