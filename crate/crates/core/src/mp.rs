//! Deterministic message-passing embeddings.
//!
//! Each layer computes `x'(v) = ReLU(W_self·x(v) + W_nbr·agg_{u∈N(v)} x(u))`
//! and the readout concatenates mean and max pooling over vertices. Weights
//! are drawn uniformly from `[-1/√fan_in, 1/√fan_in]` by a ChaCha8 stream
//! seeded with `seed_from_u64(seed)`, row-major, self matrix before neighbor
//! matrix, layer by layer. No training happens: the point is that every
//! weight choice gives covers of a common base the same embedding when the
//! features only see structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_HIDDEN: usize = 100;
pub const DEFAULT_LAYERS: usize = 2;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Input node features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSpec {
    /// 1 at every vertex.
    Constant,
    /// Vertex degree.
    Degree,
    /// One standard-normal draw per vertex, in vertex order.
    Random { seed: u64 },
    /// Indicator vector of the vertex id, dimension `|V|`.
    OneHotId,
}

impl FeatureSpec {
    pub fn dimension(&self, g: &Graph) -> usize {
        match self {
            FeatureSpec::OneHotId => g.vertex_count(),
            _ => 1,
        }
    }

    /// Features that only depend on graph structure, which message passing
    /// cannot use to separate WL-equivalent graphs.
    pub fn is_structural(&self) -> bool {
        matches!(self, FeatureSpec::Constant | FeatureSpec::Degree)
    }

    pub fn features(&self, g: &Graph) -> Vec<Vec<f64>> {
        let n = g.vertex_count();
        match *self {
            FeatureSpec::Constant => vec![vec![1.0]; n],
            FeatureSpec::Degree => (0..n).map(|v| vec![g.degree(v) as f64]).collect(),
            FeatureSpec::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| vec![rng.sample(StandardNormal)]).collect()
            }
            FeatureSpec::OneHotId => (0..n)
                .map(|v| {
                    let mut x = vec![0.0; n];
                    x[v] = 1.0;
                    x
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Sum,
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
struct Layer {
    in_dim: usize,
    out_dim: usize,
    w_self: Vec<f64>,
    w_nbr: Vec<f64>,
}

impl Layer {
    fn random(in_dim: usize, out_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let scale = 1.0 / (in_dim.max(1) as f64).sqrt();
        let mut draw = || {
            (0..in_dim * out_dim)
                .map(|_| rng.random_range(-scale..=scale))
                .collect::<Vec<f64>>()
        };
        let w_self = draw();
        let w_nbr = draw();
        Layer {
            in_dim,
            out_dim,
            w_self,
            w_nbr,
        }
    }

    fn apply(&self, own: &[f64], agg: &[f64]) -> Vec<f64> {
        (0..self.out_dim)
            .map(|o| {
                let row = o * self.in_dim..(o + 1) * self.in_dim;
                let s: f64 = self.w_self[row.clone()]
                    .iter()
                    .zip(own)
                    .map(|(w, x)| w * x)
                    .sum();
                let t: f64 = self.w_nbr[row].iter().zip(agg).map(|(w, x)| w * x).sum();
                (s + t).max(0.0)
            })
            .collect()
    }
}

/// Untrained message-passing network with fixed random weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MPModel {
    layers: Vec<Layer>,
    pub aggregation: Aggregation,
    pub seed: u64,
}

impl MPModel {
    pub fn new(
        input_dim: usize,
        hidden_dim: usize,
        layer_count: usize,
        seed: u64,
        aggregation: Aggregation,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = (0..layer_count)
            .map(|l| {
                let in_dim = if l == 0 { input_dim } else { hidden_dim };
                Layer::random(in_dim, hidden_dim, &mut rng)
            })
            .collect();
        MPModel {
            layers,
            aggregation,
            seed,
        }
    }

    /// Two layers of width 100, sum aggregation, sized for `features` on `g`.
    pub fn default_for(features: FeatureSpec, g: &Graph, seed: u64) -> Self {
        MPModel::new(
            features.dimension(g),
            DEFAULT_HIDDEN,
            DEFAULT_LAYERS,
            seed,
            Aggregation::Sum,
        )
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, |l| l.in_dim)
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }
}

/// Embeds `g` as mean-pool ‖ max-pool of the last layer's vertex states.
pub fn embed_graph(g: &Graph, features: FeatureSpec, model: &MPModel) -> Result<Vec<f64>> {
    let dim = features.dimension(g);
    if model.layer_count() > 0 && dim != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            actual: dim,
        });
    }
    let mut states = features.features(g);
    for layer in &model.layers {
        states = (0..g.vertex_count())
            .map(|v| {
                let mut agg = vec![0.0; layer.in_dim];
                for &u in g.neighbors(v) {
                    for (a, x) in agg.iter_mut().zip(&states[u]) {
                        *a += x;
                    }
                }
                if model.aggregation == Aggregation::Mean && g.degree(v) > 0 {
                    let k = g.degree(v) as f64;
                    agg.iter_mut().for_each(|a| *a /= k);
                }
                layer.apply(&states[v], &agg)
            })
            .collect();
    }
    let width = states.first().map_or(dim, Vec::len);
    let n = g.vertex_count().max(1) as f64;
    let mut mean = vec![0.0; width];
    let mut max = vec![f64::NEG_INFINITY; width];
    for s in &states {
        for (k, &x) in s.iter().enumerate() {
            mean[k] += x;
            max[k] = max[k].max(x);
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    if states.is_empty() {
        max.iter_mut().for_each(|m| *m = 0.0);
    }
    mean.extend(max);
    Ok(mean)
}

pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        .max(if a.len() == b.len() {
            0.0
        } else {
            f64::INFINITY
        })
}

fn linf_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndistinguishabilityReport {
    pub embeddings: Vec<Vec<f64>>,
    /// Pairwise L∞ distances.
    pub distances: Vec<Vec<f64>>,
    /// Distances divided by `max(1, ‖a‖∞, ‖b‖∞)`.
    pub relative: Vec<Vec<f64>>,
    pub tolerance: f64,
    pub indistinguishable: bool,
    /// Number of groups of graphs with embeddings within tolerance.
    pub distinct_embeddings: usize,
    /// Best training accuracy reachable by any classifier on top of these
    /// embeddings when every graph is its own class.
    pub predicted_accuracy: f64,
}

/// Embeds every graph and compares all pairs; "indistinguishable" iff all
/// relative distances are below `tolerance`.
pub fn indistinguishability_report(
    graphs: &[Graph],
    features: FeatureSpec,
    model: &MPModel,
    tolerance: f64,
) -> Result<IndistinguishabilityReport> {
    if graphs.len() < 2 {
        return Err(Error::InvalidArgument("need at least two graphs".into()));
    }
    let embeddings = graphs
        .iter()
        .map(|g| embed_graph(g, features, model))
        .collect::<Result<Vec<_>>>()?;
    let k = embeddings.len();
    let mut distances = vec![vec![0.0; k]; k];
    let mut relative = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let d = linf_distance(&embeddings[i], &embeddings[j]);
            let scale = 1f64
                .max(linf_norm(&embeddings[i]))
                .max(linf_norm(&embeddings[j]));
            distances[i][j] = d;
            relative[i][j] = d / scale;
        }
    }
    // group graphs whose embeddings are within tolerance of a group leader
    let mut leaders: Vec<usize> = Vec::new();
    for (i, row) in relative.iter().enumerate() {
        if leaders.iter().all(|&l| row[l] >= tolerance) {
            leaders.push(i);
        }
    }
    let indistinguishable = relative.iter().flatten().all(|&d| d < tolerance);
    Ok(IndistinguishabilityReport {
        embeddings,
        distances,
        relative,
        tolerance,
        indistinguishable,
        distinct_embeddings: leaders.len(),
        predicted_accuracy: leaders.len() as f64 / k as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_graphs_embed_identically() {
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let h = g.relabel(&[4, 2, 0, 1, 3]);
        let m = MPModel::default_for(FeatureSpec::Constant, &g, DEFAULT_SEED);
        let a = embed_graph(&g, FeatureSpec::Constant, &m).unwrap();
        let b = embed_graph(&h, FeatureSpec::Constant, &m).unwrap();
        assert_eq!(a.len(), 2 * DEFAULT_HIDDEN);
        assert!(linf_distance(&a, &b) <= 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let g = Graph::cycle(4);
        let m = MPModel::new(3, 8, 2, 1, Aggregation::Sum);
        assert_eq!(
            embed_graph(&g, FeatureSpec::Constant, &m),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 1
            })
        );
    }

    #[test]
    fn weights_depend_on_seed_only() {
        assert_eq!(
            MPModel::new(1, 10, 2, 7, Aggregation::Sum),
            MPModel::new(1, 10, 2, 7, Aggregation::Sum)
        );
        assert_ne!(
            MPModel::new(1, 10, 2, 7, Aggregation::Sum),
            MPModel::new(1, 10, 2, 8, Aggregation::Sum)
        );
    }

    #[test]
    fn features() {
        let g = Graph::path(3);
        assert_eq!(
            FeatureSpec::Degree.features(&g),
            vec![vec![1.0], vec![2.0], vec![1.0]]
        );
        assert_eq!(FeatureSpec::OneHotId.features(&g)[1], vec![0.0, 1.0, 0.0]);
        let r = FeatureSpec::Random { seed: 3 };
        assert_eq!(r.features(&g), r.features(&g));
    }

    #[test]
    fn needs_two_graphs() {
        let g = Graph::cycle(3);
        let m = MPModel::default_for(FeatureSpec::Constant, &g, 1);
        assert!(indistinguishability_report(&[g], FeatureSpec::Constant, &m, 1e-6).is_err());
    }

    #[test]
    fn wl_equivalent_cycles_share_embeddings() {
        let (two, _) = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        let graphs = [Graph::cycle(6), two];
        for agg in [Aggregation::Sum, Aggregation::Mean] {
            let m = MPModel::new(1, 16, 2, 5, agg);
            let r = indistinguishability_report(&graphs, FeatureSpec::Constant, &m, 1e-6).unwrap();
            assert!(r.indistinguishable);
            assert_eq!(r.predicted_accuracy, 0.5);
        }
    }
}
