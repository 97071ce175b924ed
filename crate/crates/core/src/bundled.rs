//! Small reference graphs.

use crate::graph::Graph;

/// Edges of the 9-vertex experiment base: a triangle `0-1-2` bridged to a
/// square `3-4-5-6`, with pendant vertices 7 (on 0) and 8 (on 4).
pub const EXPERIMENT_BASE_EDGES: [(usize, usize); 10] = [
    (0, 1),
    (1, 2),
    (0, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (3, 6),
    (0, 7),
    (4, 8),
];

/// Connected, 9 vertices, 10 edges (χ = −1), discrete stable coloring.
pub fn experiment_base() -> Graph {
    Graph::from_edge_list(9, &EXPERIMENT_BASE_EDGES).expect("static edges are valid")
}

/// A second rigid base with χ = −1 that is not isomorphic to
/// [`experiment_base`]: two bridged triangles with a pendant path of length
/// two on vertex 0 and a pendant vertex on 4.
pub fn two_triangle_base() -> Graph {
    Graph::from_edge_list(
        9,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 6),
            (6, 7),
            (4, 8),
        ],
    )
    .expect("static edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::graphs_isomorphic;
    use crate::refine::is_discrete;

    #[test]
    fn experiment_base_properties() {
        let g = experiment_base();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 10));
        assert_eq!(g.euler_characteristic(), -1);
        assert!(g.is_connected());
        assert!(is_discrete(&g));
    }

    #[test]
    fn second_base_is_rigid_and_different() {
        let g = two_triangle_base();
        assert_eq!(g.euler_characteristic(), -1);
        assert!(g.is_connected() && is_discrete(&g));
        assert_eq!(graphs_isomorphic(&g, &experiment_base()).unwrap(), None);
    }
}
