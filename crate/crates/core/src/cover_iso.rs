//! Isomorphism of covers over a common base.
//!
//! A morphism between connected covers is pinned down by the image of a
//! single vertex: once `v ↦ v'` is fixed, each neighbor `u` of `v` must go to
//! the unique neighbor of `v'` lying over `π(u)`. Testing isomorphism
//! therefore needs one forced extension per candidate seed in a single
//! fiber, `d` extensions of cost `O(|E(H)|)` each, `O(d²·|E(G)|)` overall.

use std::collections::VecDeque;

use crate::cover::{covering_degree, validate_covering, CoveringMap};
use crate::error::{Error, Result};
use crate::iso::graphs_isomorphic;
use crate::refine::is_discrete;

fn check_pair(src: &CoveringMap, dst: &CoveringMap) -> Result<()> {
    if src.base != dst.base {
        return Err(Error::BaseMismatch);
    }
    for cm in [src, dst] {
        if !validate_covering(cm)?.is_valid() {
            return Err(Error::InvalidCover("covering check failed".into()));
        }
        if !cm.total.is_connected() {
            return Err(Error::Disconnected);
        }
    }
    Ok(())
}

/// Extends `seed.0 ↦ seed.1` to a cover isomorphism `src → dst`, or returns
/// `None` if the forced extension conflicts.
pub fn extend_cover_morphism(
    src: &CoveringMap,
    dst: &CoveringMap,
    seed: (usize, usize),
) -> Result<Option<Vec<usize>>> {
    check_pair(src, dst)?;
    let (s, t) = seed;
    if s >= src.total.vertex_count()
        || t >= dst.total.vertex_count()
        || src.project(s) != dst.project(t)
    {
        return Err(Error::SeedFiberMismatch {
            source_vertex: s,
            target_vertex: t,
        });
    }
    Ok(extend_unchecked(src, dst, seed))
}

/// Forced extension without precondition checks. Both covers must be valid
/// with connected totals over the same base and the seed must respect fibers.
pub(crate) fn extend_unchecked(
    src: &CoveringMap,
    dst: &CoveringMap,
    (s, t): (usize, usize),
) -> Option<Vec<usize>> {
    let n = src.total.vertex_count();
    if n != dst.total.vertex_count() {
        return None;
    }
    let mut forward = vec![usize::MAX; n];
    let mut used = vec![false; n];
    forward[s] = t;
    used[t] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        let fx = forward[x];
        for &y in src.total.neighbors(x) {
            let over = src.project(y);
            let fy = dst
                .total
                .neighbors(fx)
                .iter()
                .copied()
                .find(|&z| dst.project(z) == over)?;
            if forward[y] == usize::MAX {
                if std::mem::replace(&mut used[fy], true) {
                    return None;
                }
                forward[y] = fy;
                queue.push_back(y);
            } else if forward[y] != fy {
                return None;
            }
        }
    }
    forward.iter().all(|&f| f != usize::MAX).then_some(forward)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverIso {
    /// Witness `φ` with `π' ∘ φ = π`.
    Isomorphic(Vec<usize>),
    NotIsomorphic,
    /// Covers of different degree are never isomorphic.
    DegreeMismatch {
        source: usize,
        target: usize,
    },
}

impl CoverIso {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, CoverIso::Isomorphic(_))
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            CoverIso::Isomorphic(w) => Some(w),
            _ => None,
        }
    }
}

/// Tests whether two connected covers of the same base are isomorphic as
/// covers, seeding from vertex 0 of `src`.
pub fn covers_isomorphic(src: &CoveringMap, dst: &CoveringMap) -> Result<CoverIso> {
    check_pair(src, dst)?;
    let (ds, dt) = (covering_degree(src)?, covering_degree(dst)?);
    if ds != dt {
        return Ok(CoverIso::DegreeMismatch {
            source: ds,
            target: dt,
        });
    }
    Ok(covers_isomorphic_unchecked(src, dst))
}

pub(crate) fn covers_isomorphic_unchecked(src: &CoveringMap, dst: &CoveringMap) -> CoverIso {
    if src.total.vertex_count() == 0 || src.total.vertex_count() != dst.total.vertex_count() {
        return CoverIso::NotIsomorphic;
    }
    let over = src.project(0);
    (0..dst.total.vertex_count())
        .filter(|&t| dst.project(t) == over)
        .find_map(|t| extend_unchecked(src, dst, (0, t)))
        .map_or(CoverIso::NotIsomorphic, CoverIso::Isomorphic)
}

/// Cover isomorphism and graph isomorphism verdicts for the same pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoAgreement {
    pub cover_isomorphic: bool,
    pub graph_isomorphic: bool,
}

impl IsoAgreement {
    pub fn agree(&self) -> bool {
        self.cover_isomorphic == self.graph_isomorphic
    }
}

/// Computes both notions of isomorphism for covers of a base whose stable
/// coloring is discrete, where they must coincide.
pub fn graph_iso_equals_cover_iso_check(
    src: &CoveringMap,
    dst: &CoveringMap,
) -> Result<IsoAgreement> {
    if !is_discrete(&src.base) {
        return Err(Error::NonDiscreteBase);
    }
    let cover_isomorphic = covers_isomorphic(src, dst)?.is_isomorphic();
    let graph_isomorphic = graphs_isomorphic(&src.total, &dst.total)?.is_some();
    Ok(IsoAgreement {
        cover_isomorphic,
        graph_isomorphic,
    })
}
