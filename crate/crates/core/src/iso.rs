//! Exact graph isomorphism for small graphs by individualization-refinement.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refine::{color_refine, Coloring};

/// Largest vertex count [`graphs_isomorphic`] accepts.
pub const DEFAULT_ISO_LIMIT: usize = 64;

/// Finds an isomorphism `g → h` (as `map[v_g] = v_h`) or proves none exists.
///
/// Refuses graphs with more than [`DEFAULT_ISO_LIMIT`] vertices.
pub fn graphs_isomorphic(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    graphs_isomorphic_with_limit(g, h, DEFAULT_ISO_LIMIT)
}

pub fn graphs_isomorphic_with_limit(
    g: &Graph,
    h: &Graph,
    limit: usize,
) -> Result<Option<Vec<usize>>> {
    let n = g.vertex_count();
    for vertices in [n, h.vertex_count()] {
        if vertices > limit {
            return Err(Error::SizeGuard { vertices, limit });
        }
    }
    if n != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.degree_sequence() != h.degree_sequence()
    {
        return Ok(None);
    }
    let (union, offset) = g.disjoint_union(h);
    let start = Coloring::constant(union.vertex_count());
    Ok(search(&union, offset, g, h, &start))
}

fn search(
    union: &Graph,
    offset: usize,
    g: &Graph,
    h: &Graph,
    coloring: &Coloring,
) -> Option<Vec<usize>> {
    let refined = color_refine(union, Some(coloring))
        .expect("coloring sized for the union")
        .stable()
        .clone();
    let total = union.vertex_count();
    if refined.histogram_of(0..offset) != refined.histogram_of(offset..total) {
        return None;
    }

    let classes = refined.classes();
    // Smallest class with more than one vertex per side.
    let target = classes
        .groups()
        .iter()
        .filter(|c| c.len() > 2)
        .min_by_key(|c| c.len());

    let Some(class) = target else {
        let mut map = vec![usize::MAX; offset];
        for class in classes.groups() {
            map[class[0]] = class[1] - offset;
        }
        return g.is_isomorphism(h, &map).then_some(map);
    };

    let pivot = class[0];
    let fresh = refined.class_count();
    for &candidate in class.iter().filter(|&&w| w >= offset) {
        let mut colors = refined.colors().to_vec();
        colors[pivot] = fresh;
        colors[candidate] = fresh;
        if let Some(map) = search(union, offset, g, h, &Coloring::from_raw(&colors)) {
            return Some(map);
        }
    }
    None
}
