//! Covering maps: voltage construction, validation, degree, color lifting and
//! truncated universal covers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refine::color_refine;

/// Permutation voltages on the distinguished edges of a base graph.
///
/// Edge `(u, w)` with permutation `σ` joins copy `u_i` to `w_{σ(i)}`; every
/// other base edge joins `u_i` to `w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VoltageAssignment {
    pub degree: usize,
    pub edges: Vec<(usize, usize)>,
    pub perms: Vec<Vec<usize>>,
}

/// Non-tree edges of the BFS spanning tree rooted at vertex 0, as `(u, w)`
/// with `u < w` in lexicographic order.
pub fn distinguished_edges(base: &Graph) -> Vec<(usize, usize)> {
    if base.vertex_count() == 0 {
        return Vec::new();
    }
    let parents = base.bfs_parents(0);
    let tree: BTreeSet<(usize, usize)> = parents
        .iter()
        .enumerate()
        .filter_map(|(v, p)| p.map(|p| (p.min(v), p.max(v))))
        .collect();
    base.edges()
        .into_iter()
        .filter(|e| !tree.contains(e))
        .collect()
}

fn is_permutation(p: &[usize], d: usize) -> bool {
    let mut seen = vec![false; d];
    p.len() == d
        && p.iter()
            .all(|&x| x < d && !std::mem::replace(&mut seen[x], true))
}

impl VoltageAssignment {
    /// All-identity voltages on the distinguished edges of `base`.
    pub fn identity(base: &Graph, degree: usize) -> Self {
        let edges = distinguished_edges(base);
        let perms = vec![(0..degree).collect(); edges.len()];
        VoltageAssignment {
            degree,
            edges,
            perms,
        }
    }

    /// Voltages on the standard distinguished edges of `base`.
    pub fn on_base(base: &Graph, degree: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let va = VoltageAssignment {
            degree,
            edges: distinguished_edges(base),
            perms,
        };
        va.validate_for(base)?;
        Ok(va)
    }

    /// Checks the assignment against `base`: one valid permutation per edge,
    /// `1 - χ(base)` distinct base edges whose complement is a spanning tree.
    pub fn validate_for(&self, base: &Graph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidVoltage(msg));
        if self.degree == 0 {
            return bad("degree must be at least 1".into());
        }
        if self.perms.len() != self.edges.len() {
            return bad(format!(
                "{} permutations for {} edges",
                self.perms.len(),
                self.edges.len()
            ));
        }
        if let Some(p) = self.perms.iter().find(|p| !is_permutation(p, self.degree)) {
            return bad(format!("{p:?} is not a permutation of 0..{}", self.degree));
        }
        let rank = 1 - base.euler_characteristic();
        if self.edges.len() as i64 != rank {
            return bad(format!(
                "{} distinguished edges, base needs 1 - χ = {rank}",
                self.edges.len()
            ));
        }
        let mut keys = BTreeSet::new();
        for &(u, w) in &self.edges {
            if !base.has_edge(u, w) {
                return bad(format!("({u}, {w}) is not a base edge"));
            }
            if !keys.insert((u.min(w), u.max(w))) {
                return bad(format!("edge ({u}, {w}) listed twice"));
            }
        }
        let tree: Vec<_> = base
            .edges()
            .into_iter()
            .filter(|e| !keys.contains(e))
            .collect();
        let tree = Graph::from_edge_list(base.vertex_count(), &tree)?;
        if !tree.is_tree() {
            return bad("remaining edges do not form a spanning tree".into());
        }
        Ok(())
    }

    /// True iff the permutations generate a transitive action on
    /// `0..degree`, i.e. the cover over a connected base is connected.
    pub fn is_transitive(&self) -> bool {
        permutations_transitive(&self.perms, self.degree)
    }
}

/// Orbit of 0 under the group generated by `perms` is all of `0..d`.
pub fn permutations_transitive(perms: &[Vec<usize>], d: usize) -> bool {
    if d == 0 {
        return false;
    }
    let mut seen = vec![false; d];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        // Finite groups: closure under the generators alone suffices.
        for p in perms {
            let y = p[x];
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}

/// A vertex map `total → base` claimed to be a covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringMap {
    pub total: Graph,
    pub base: Graph,
    pub vertex_map: Vec<usize>,
}

impl CoveringMap {
    pub fn new(total: Graph, base: Graph, vertex_map: Vec<usize>) -> Self {
        CoveringMap {
            total,
            base,
            vertex_map,
        }
    }

    /// The identity cover of `g`.
    pub fn identity(g: &Graph) -> Self {
        CoveringMap::new(g.clone(), g.clone(), (0..g.vertex_count()).collect())
    }

    pub fn project(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// Vertices over each base vertex, in increasing order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.base.vertex_count()];
        for (v, &b) in self.vertex_map.iter().enumerate() {
            if b < fibers.len() {
                fibers[b].push(v);
            }
        }
        fibers
    }
}

/// Builds the cover of `base` defined by `va`. Copy `i` of base vertex `v` is
/// total vertex `i * |V(base)| + v`.
pub fn build_cover(base: &Graph, va: &VoltageAssignment) -> Result<CoveringMap> {
    if !base.is_connected() {
        return Err(Error::Disconnected);
    }
    va.validate_for(base)?;
    let n = base.vertex_count();
    let d = va.degree;
    let voltage: BTreeMap<(usize, usize), (usize, usize, &[usize])> = va
        .edges
        .iter()
        .zip(&va.perms)
        .map(|(&(u, w), p)| ((u.min(w), u.max(w)), (u, w, p.as_slice())))
        .collect();
    let mut edges = Vec::with_capacity(d * base.edge_count());
    for (u, w) in base.edges() {
        match voltage.get(&(u, w)) {
            Some(&(from, to, perm)) => {
                edges.extend((0..d).map(|i| (i * n + from, perm[i] * n + to)));
            }
            None => edges.extend((0..d).map(|i| (i * n + u, i * n + w))),
        }
    }
    let total = Graph::from_edge_list(d * n, &edges)?;
    let vertex_map = (0..d * n).map(|v| v % n).collect();
    Ok(CoveringMap::new(total, base.clone(), vertex_map))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverVerdict {
    Valid,
    /// Base vertex with empty fiber.
    NotSurjective {
        base_vertex: usize,
    },
    /// Total vertex whose neighbors do not map bijectively onto the neighbors
    /// of its image (or whose image is out of range).
    NotLocallyBijective {
        vertex: usize,
    },
}

impl CoverVerdict {
    pub fn is_valid(&self) -> bool {
        *self == CoverVerdict::Valid
    }
}

/// Checks surjectivity and that every total vertex's neighborhood maps
/// bijectively onto the neighborhood of its image.
pub fn validate_covering(cm: &CoveringMap) -> Result<CoverVerdict> {
    let (nt, nb) = (cm.total.vertex_count(), cm.base.vertex_count());
    if cm.vertex_map.len() != nt {
        return Err(Error::InvalidCover(format!(
            "vertex map has {} entries for {nt} vertices",
            cm.vertex_map.len()
        )));
    }
    for v in 0..nt {
        let image = cm.vertex_map[v];
        if image >= nb {
            return Ok(CoverVerdict::NotLocallyBijective { vertex: v });
        }
        let mut mapped: Vec<usize> = cm
            .total
            .neighbors(v)
            .iter()
            .map(|&u| cm.vertex_map[u])
            .collect();
        mapped.sort_unstable();
        if mapped != cm.base.neighbors(image) {
            return Ok(CoverVerdict::NotLocallyBijective { vertex: v });
        }
    }
    let mut hit = vec![false; nb];
    for &b in &cm.vertex_map {
        hit[b] = true;
    }
    if let Some(base_vertex) = hit.iter().position(|&h| !h) {
        return Ok(CoverVerdict::NotSurjective { base_vertex });
    }
    Ok(CoverVerdict::Valid)
}

/// Number of sheets: the common fiber size of a valid cover.
pub fn covering_degree(cm: &CoveringMap) -> Result<usize> {
    match validate_covering(cm)? {
        CoverVerdict::Valid => {}
        other => return Err(Error::InvalidCover(format!("{other:?}"))),
    }
    let fibers = cm.fibers();
    let Some(expected) = fibers.first().map(Vec::len) else {
        return Ok(0);
    };
    if let Some((vertex, f)) = fibers.iter().enumerate().find(|(_, f)| f.len() != expected) {
        return Err(Error::UnequalFibers {
            vertex,
            size: f.len(),
            expected,
        });
    }
    debug_assert_eq!(cm.total.vertex_count(), expected * cm.base.vertex_count());
    Ok(expected)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftVerdict {
    Pass,
    /// Total vertex whose color at `round` differs from its image's.
    Fail {
        round: usize,
        vertex: usize,
    },
}

impl LiftVerdict {
    pub fn passed(&self) -> bool {
        *self == LiftVerdict::Pass
    }
}

/// Refines total and base graphs separately and checks that every total
/// vertex carries its image's color in every round.
pub fn lift_check(cm: &CoveringMap) -> LiftVerdict {
    let total = color_refine(&cm.total, None).expect("constant start");
    let base = color_refine(&cm.base, None).expect("constant start");
    for (round, (tc, bc)) in total.rounds().iter().zip(base.rounds()).enumerate() {
        for v in 0..cm.total.vertex_count() {
            let image = cm.vertex_map.get(v).copied();
            if image.is_none_or(|b| b >= bc.len() || tc.get(v) != bc.get(b)) {
                return LiftVerdict::Fail { round, vertex: v };
            }
        }
    }
    let (tl, bl) = (total.rounds().len(), base.rounds().len());
    if tl != bl {
        return LiftVerdict::Fail {
            round: tl.min(bl),
            vertex: 0,
        };
    }
    LiftVerdict::Pass
}

/// A finite rooted tree. Node 0 is the root, and nodes are stored in BFS
/// order so every child index exceeds its parent's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTreeBall {
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// Vertex of the source graph each node lies over.
    pub label: Vec<usize>,
    pub radius: usize,
}

impl RootedTreeBall {
    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    /// Views `g` (which must be a tree) as rooted at `root`.
    pub fn from_tree(g: &Graph, root: usize) -> Result<Self> {
        if !g.is_tree() {
            return Err(Error::NotATree);
        }
        let ball = universal_cover_ball(g, root, g.vertex_count());
        debug_assert_eq!(ball.node_count(), g.vertex_count());
        Ok(ball)
    }

    pub fn to_graph(&self) -> Graph {
        let edges: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(p, cs)| cs.iter().map(move |&c| (p, c)))
            .collect();
        Graph::from_edge_list(self.node_count(), &edges).expect("tree edges are valid")
    }
}

/// Radius-`radius` ball around a lift of `root` in the universal cover of
/// `g`: the tree of non-backtracking walks from `root` of length at most
/// `radius`.
pub fn universal_cover_ball(g: &Graph, root: usize, radius: usize) -> RootedTreeBall {
    let mut ball = RootedTreeBall {
        children: vec![Vec::new()],
        depth: vec![0],
        label: vec![root],
        radius,
    };
    let mut came_from: Vec<Option<usize>> = vec![None];
    let mut next = 0;
    while next < ball.node_count() {
        let node = next;
        next += 1;
        if ball.depth[node] == radius {
            continue;
        }
        let v = ball.label[node];
        for &u in g.neighbors(v) {
            if Some(u) == came_from[node] {
                continue;
            }
            let child = ball.node_count();
            ball.children[node].push(child);
            ball.children.push(Vec::new());
            ball.depth.push(ball.depth[node] + 1);
            ball.label.push(u);
            came_from.push(Some(v));
        }
    }
    ball
}

/// Bracket encoding of a rooted tree: each node is `(` followed by its
/// children's codes in sorted order and `)`. Equal codes iff the rooted trees
/// are isomorphic.
pub fn rooted_tree_canonical(t: &RootedTreeBall) -> String {
    let mut codes: Vec<String> = vec![String::new(); t.node_count()];
    for node in (0..t.node_count()).rev() {
        let mut child_codes: Vec<String> = t.children[node]
            .iter()
            .map(|&c| std::mem::take(&mut codes[c]))
            .collect();
        child_codes.sort_unstable();
        let mut code =
            String::with_capacity(2 + child_codes.iter().map(String::len).sum::<usize>());
        code.push('(');
        for c in child_codes {
            code.push_str(&c);
        }
        code.push(')');
        codes[node] = code;
    }
    codes.swap_remove(0)
}

/// Canonical code of an unrooted tree: the least rooted code over all roots.
pub fn tree_canonical(g: &Graph) -> Result<String> {
    (0..g.vertex_count())
        .map(|r| RootedTreeBall::from_tree(g, r).map(|t| rooted_tree_canonical(&t)))
        .try_fold(None::<String>, |best, code| {
            let code = code?;
            Ok(Some(match best {
                Some(b) if b <= code => b,
                _ => code,
            }))
        })
        .map(|c| c.unwrap_or_default())
}
