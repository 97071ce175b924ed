//! Weisfeiler-Leman equivalence classes through graph covering spaces.
//!
//! Color refinement cannot tell apart two connected graphs of the same order
//! that share a universal cover. This crate builds such families explicitly:
//! it enumerates the connected covers of a rigid base graph via permutation
//! voltages, deduplicates them up to isomorphism, and checks the resulting
//! datasets against WL, exact isomorphism, subgroup counts and a
//! message-passing embedding harness.

pub mod bundled;
pub mod counting;
pub mod cover;
pub mod cover_iso;
pub mod dataset;
pub mod error;
pub mod graph;
pub mod io;
pub mod iso;
pub mod mp;
pub mod refine;

pub use cover::{
    build_cover, covering_degree, lift_check, rooted_tree_canonical, universal_cover_ball,
    validate_covering, CoveringMap, RootedTreeBall, VoltageAssignment,
};
pub use cover_iso::{covers_isomorphic, extend_cover_morphism, graph_iso_equals_cover_iso_check};
pub use error::{Error, Result};
pub use graph::{Graph, VertexPartition};
pub use iso::graphs_isomorphic;
pub use refine::{color_refine, is_discrete, wl_test, Coloring, RefinementTrace, WlVerdict};
