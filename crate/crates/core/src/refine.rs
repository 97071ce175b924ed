//! Color refinement (1-dimensional Weisfeiler-Leman) and the WL test.
//!
//! Each round recolors a vertex by its signature: its previous color plus the
//! sorted multiset of its neighbors' previous colors. Distinct signatures are
//! numbered densely in lexicographic order, so the resulting ids depend only
//! on the set of signatures present and not on vertex numbering. Two graphs
//! refined separately therefore agree on ids whenever they see the same
//! signature sets (this is what makes covering maps color-preserving
//! round by round).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPartition};

/// Dense per-vertex coloring: ids are `0..class_count()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
}

/// Color id → number of vertices with that color.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorHistogram(pub BTreeMap<usize, usize>);

impl ColorHistogram {
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

impl Coloring {
    pub fn constant(n: usize) -> Self {
        Coloring { colors: vec![0; n] }
    }

    /// Renumbers arbitrary color values densely, preserving their order.
    pub fn from_raw(raw: &[usize]) -> Self {
        let distinct: BTreeSet<usize> = raw.iter().copied().collect();
        let index: BTreeMap<usize, usize> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        Coloring {
            colors: raw.iter().map(|c| index[c]).collect(),
        }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn get(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn histogram(&self) -> ColorHistogram {
        self.histogram_of(0..self.colors.len())
    }

    pub fn histogram_of(&self, vertices: impl IntoIterator<Item = usize>) -> ColorHistogram {
        let mut hist = BTreeMap::new();
        for v in vertices {
            *hist.entry(self.colors[v]).or_insert(0) += 1;
        }
        ColorHistogram(hist)
    }

    /// Color classes, ordered by color id.
    pub fn classes(&self) -> VertexPartition {
        let mut groups = vec![Vec::new(); self.class_count()];
        for (v, &c) in self.colors.iter().enumerate() {
            groups[c].push(v);
        }
        VertexPartition::from_groups(groups)
    }

    /// True iff every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Coloring) -> bool {
        let mut image: BTreeMap<usize, usize> = BTreeMap::new();
        self.colors
            .iter()
            .zip(&coarser.colors)
            .all(|(&fine, &coarse)| *image.entry(fine).or_insert(coarse) == coarse)
    }
}

/// Round-by-round refinement history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementTrace {
    rounds: Vec<Coloring>,
    stable_round: usize,
}

impl RefinementTrace {
    pub fn rounds(&self) -> &[Coloring] {
        &self.rounds
    }

    /// Index of the first round whose partition equals the previous one.
    pub fn stable_round(&self) -> usize {
        self.stable_round
    }

    pub fn stable(&self) -> &Coloring {
        &self.rounds[self.stable_round]
    }
}

fn refine_round(g: &Graph, prev: &Coloring) -> Coloring {
    let n = g.vertex_count();
    let signatures: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nbrs: Vec<usize> = g.neighbors(v).iter().map(|&u| prev.colors[u]).collect();
            nbrs.sort_unstable();
            (prev.colors[v], nbrs)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| signatures[a].cmp(&signatures[b]));
    let mut colors = vec![0; n];
    let mut next_id = 0;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && signatures[v] != signatures[order[i - 1]] {
            next_id += 1;
        }
        colors[v] = next_id;
    }
    Coloring { colors }
}

/// Runs color refinement until the induced partition stops changing.
///
/// Round 0 is `initial` (renumbered densely) or the constant coloring.
pub fn color_refine(g: &Graph, initial: Option<&Coloring>) -> Result<RefinementTrace> {
    let n = g.vertex_count();
    let start = match initial {
        Some(c) if c.len() != n => {
            return Err(Error::ColoringLength {
                expected: n,
                actual: c.len(),
            })
        }
        Some(c) => Coloring::from_raw(&c.colors),
        None => Coloring::constant(n),
    };
    let mut rounds = vec![start];
    loop {
        let prev = rounds.last().expect("at least one round");
        let next = refine_round(g, prev);
        let stable = next.class_count() == prev.class_count();
        rounds.push(next);
        if stable {
            let stable_round = rounds.len() - 1;
            return Ok(RefinementTrace {
                rounds,
                stable_round,
            });
        }
    }
}

/// Stable coloring under the constant initial coloring.
pub fn stable_coloring(g: &Graph) -> Coloring {
    color_refine(g, None)
        .expect("constant coloring has the right length")
        .stable()
        .clone()
}

/// Outcome of the WL test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlVerdict {
    Equivalent,
    /// Color histograms first differ at this round.
    Distinguished {
        round: usize,
    },
}

impl WlVerdict {
    pub fn is_equivalent(self) -> bool {
        self == WlVerdict::Equivalent
    }
}

/// WL test: refines `g ⊕ h` and compares per-side color histograms.
pub fn wl_test(g: &Graph, h: &Graph) -> WlVerdict {
    let (union, offset) = g.disjoint_union(h);
    let trace = color_refine(&union, None).expect("constant coloring has the right length");
    let n = union.vertex_count();
    for (round, coloring) in trace.rounds().iter().enumerate() {
        if coloring.histogram_of(0..offset) != coloring.histogram_of(offset..n) {
            return WlVerdict::Distinguished { round };
        }
    }
    WlVerdict::Equivalent
}

/// True iff the stable coloring assigns every vertex its own color.
pub fn is_discrete(g: &Graph) -> bool {
    stable_coloring(g).class_count() == g.vertex_count()
}

/// Connected components grouped by the set of stable colors they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGrouping {
    pub components: VertexPartition,
    /// Each entry lists component indices sharing one stable color set,
    /// ordered by first component.
    pub groups: Vec<Vec<usize>>,
    /// Stable color set of each group.
    pub color_sets: Vec<BTreeSet<usize>>,
}

fn group_components(g: &Graph, coloring: &Coloring) -> ComponentGrouping {
    let components = g.connected_components();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut color_sets: Vec<BTreeSet<usize>> = Vec::new();
    for (ci, comp) in components.groups().iter().enumerate() {
        let set: BTreeSet<usize> = comp.iter().map(|&v| coloring.get(v)).collect();
        match color_sets.iter().position(|s| *s == set) {
            Some(i) => groups[i].push(ci),
            None => {
                debug_assert!(
                    color_sets.iter().all(|s| s.is_disjoint(&set)),
                    "stable color sets of components must be equal or disjoint"
                );
                color_sets.push(set);
                groups.push(vec![ci]);
            }
        }
    }
    ComponentGrouping {
        components,
        groups,
        color_sets,
    }
}

/// Groups the components of `g` by their stable color sets. Sets of two
/// finite connected components are always equal or disjoint.
pub fn component_color_groups(g: &Graph) -> ComponentGrouping {
    group_components(g, &stable_coloring(g))
}

/// Per-group evidence for [`check_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupEvidence {
    /// Components of the first graph in this group (vertex ids of that graph).
    pub left_components: Vec<Vec<usize>>,
    /// Components of the second graph in this group (vertex ids of that graph).
    pub right_components: Vec<Vec<usize>>,
    pub left_order: usize,
    pub right_order: usize,
}

impl GroupEvidence {
    pub fn balanced(&self) -> bool {
        self.left_order == self.right_order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub groups: Vec<GroupEvidence>,
    /// Index of the first group whose orders differ.
    pub first_failure: Option<usize>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks the component decomposition condition for WL equivalence of
/// possibly disconnected graphs: components of `g ⊕ h` are grouped by stable
/// color set, and every group must hold equally many vertices from each side.
pub fn check_decomposition(g: &Graph, h: &Graph) -> DecompositionReport {
    let (union, offset) = g.disjoint_union(h);
    let grouping = group_components(&union, &stable_coloring(&union));
    let comps = grouping.components.groups();
    let groups: Vec<GroupEvidence> = grouping
        .groups
        .iter()
        .map(|members| {
            let mut ev = GroupEvidence {
                left_components: Vec::new(),
                right_components: Vec::new(),
                left_order: 0,
                right_order: 0,
            };
            for &ci in members {
                let comp = &comps[ci];
                if comp[0] < offset {
                    ev.left_order += comp.len();
                    ev.left_components.push(comp.clone());
                } else {
                    ev.right_order += comp.len();
                    ev.right_components
                        .push(comp.iter().map(|v| v - offset).collect());
                }
            }
            ev
        })
        .collect();
    let first_failure = groups.iter().position(|e| !e.balanced());
    DecompositionReport {
        groups,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn union(parts: &[Graph]) -> Graph {
        parts
            .iter()
            .fold(Graph::empty(0), |acc, g| acc.disjoint_union(g).0)
    }

    #[test]
    fn path_splits_ends_from_middle() {
        let trace = color_refine(&Graph::path(3), None).unwrap();
        let stable = trace.stable();
        assert_eq!(stable.class_count(), 2);
        assert_eq!(stable.get(0), stable.get(2));
        assert_ne!(stable.get(0), stable.get(1));
    }

    #[test]
    fn cycle_is_one_class() {
        let trace = color_refine(&Graph::cycle(6), None).unwrap();
        assert_eq!(trace.stable().class_count(), 1);
        assert_eq!(trace.stable_round(), 1);
        assert!(!is_discrete(&Graph::cycle(6)));
    }

    #[test]
    fn initial_length_checked() {
        let c = Coloring::constant(2);
        assert_eq!(
            color_refine(&Graph::cycle(3), Some(&c)),
            Err(Error::ColoringLength {
                expected: 3,
                actual: 2
            })
        );
    }

    #[test]
    fn initial_coloring_is_respected() {
        let c = Coloring::from_raw(&[7, 3, 3, 3, 3, 3]);
        let trace = color_refine(&Graph::cycle(6), Some(&c)).unwrap();
        // distance from vertex 0 splits C6 into 4 classes
        assert_eq!(trace.stable().class_count(), 4);
    }

    #[test]
    fn spider_is_discrete() {
        // legs of length 1, 2, 3 from center 0
        let g =
            Graph::from_edge_list(7, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)]).unwrap();
        assert!(is_discrete(&g));
    }

    #[test]
    fn wl_examples() {
        let c3 = Graph::cycle(3);
        let two_c3 = union(&[c3.clone(), c3.clone()]);
        assert_eq!(wl_test(&Graph::cycle(6), &two_c3), WlVerdict::Equivalent);
        assert_eq!(wl_test(&c3, &c3), WlVerdict::Equivalent);
        assert_eq!(
            wl_test(&c3, &Graph::path(3)),
            WlVerdict::Distinguished { round: 1 }
        );
        assert_eq!(
            wl_test(&c3, &Graph::cycle(4)),
            WlVerdict::Distinguished { round: 0 }
        );
    }

    #[test]
    fn component_groups() {
        let c3 = Graph::cycle(3);
        let g = union(&[Graph::cycle(6), c3.clone(), c3.clone()]);
        assert_eq!(component_color_groups(&g).groups, vec![vec![0, 1, 2]]);

        let g = union(&[c3, Graph::path(3)]);
        assert_eq!(component_color_groups(&g).groups.len(), 2);

        let g = union(&[Graph::cycle(4), Graph::cycle(4), Graph::path(2)]);
        assert_eq!(component_color_groups(&g).groups, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn decomposition_examples() {
        let c3 = Graph::cycle(3);
        let two_c3 = union(&[c3.clone(), c3.clone()]);
        let r = check_decomposition(&Graph::cycle(6), &two_c3);
        assert!(r.passed());
        assert_eq!(r.groups.len(), 1);
        assert_eq!((r.groups[0].left_order, r.groups[0].right_order), (6, 6));
        assert_eq!(r.groups[0].right_components.len(), 2);

        // every cycle has the same one-color stable coloring, so C4 joins
        // the group of C6 and the triangles
        let left = union(&[Graph::cycle(6), Graph::cycle(4)]);
        let right = union(&[c3.clone(), c3.clone(), Graph::cycle(4)]);
        let r = check_decomposition(&left, &right);
        assert!(r.passed());
        assert_eq!(r.groups.len(), 1);
        assert_eq!((r.groups[0].left_order, r.groups[0].right_order), (10, 10));
        assert!(wl_test(&left, &right).is_equivalent());

        let left = union(&[Graph::cycle(6), Graph::path(2)]);
        let right = union(&[c3.clone(), c3.clone(), Graph::path(2)]);
        let r = check_decomposition(&left, &right);
        assert!(r.passed());
        assert_eq!(r.groups.len(), 2);
        assert!(wl_test(&left, &right).is_equivalent());

        let r = check_decomposition(&Graph::cycle(6), &c3);
        assert!(!r.passed());
        let bad = &r.groups[r.first_failure.unwrap()];
        assert_eq!((bad.left_order, bad.right_order), (6, 3));
    }
}
