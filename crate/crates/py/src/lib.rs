//! Python bindings. The module is importable as `wlcovers`.

use std::path::PathBuf;

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wlcovers_core::counting;
use wlcovers_core::cover::distinguished_edges;
use wlcovers_core::dataset::{self, GenerateConfig, DEFAULT_BUDGET};
use wlcovers_core::io;
use wlcovers_core::mp::{
    self, Aggregation, FeatureSpec, MPModel, DEFAULT_HIDDEN, DEFAULT_LAYERS, DEFAULT_SEED,
    DEFAULT_TOLERANCE,
};
use wlcovers_core::refine;

fn py_err(e: wlcovers_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "wlcovers", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: wlcovers_core::Graph,
}

impl From<wlcovers_core::Graph> for PyGraph {
    fn from(inner: wlcovers_core::Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        wlcovers_core::Graph::from_edge_list(n, &edges)
            .map(Into::into)
            .map_err(py_err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        wlcovers_core::Graph::cycle(n).into()
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        wlcovers_core::Graph::path(n).into()
    }

    /// Parses the `n m` edge-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_edge_list(text).map(Into::into).map_err(py_err)
    }

    fn to_edge_list(&self) -> String {
        io::write_edge_list(&self.inner)
    }

    fn to_dot(&self) -> String {
        io::to_dot(&self.inner, Some(&refine::stable_coloring(&self.inner)))
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.vertex_count() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn disjoint_union(&self, other: &PyGraph) -> PyGraph {
        self.inner.disjoint_union(&other.inner).0.into()
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// Permutation voltages on the non-tree edges of a base graph.
#[pyclass(
    name = "VoltageAssignment",
    module = "wlcovers",
    eq,
    frozen,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
pub struct PyVoltage {
    inner: wlcovers_core::VoltageAssignment,
}

#[pymethods]
impl PyVoltage {
    /// Voltages on the default distinguished edges of `base`.
    #[new]
    fn new(base: &PyGraph, degree: usize, perms: Vec<Vec<usize>>) -> PyResult<Self> {
        wlcovers_core::VoltageAssignment::on_base(&base.inner, degree, perms)
            .map(|inner| PyVoltage { inner })
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_voltage(text)
            .map(|inner| PyVoltage { inner })
            .map_err(py_err)
    }

    fn to_json(&self) -> String {
        io::voltage_to_json(&self.inner)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges.clone()
    }

    #[getter]
    fn perms(&self) -> Vec<Vec<usize>> {
        self.inner.perms.clone()
    }

    fn is_transitive(&self) -> bool {
        self.inner.is_transitive()
    }

    fn __repr__(&self) -> String {
        format!("VoltageAssignment({})", self.to_json())
    }
}

/// A cover of a base graph: total graph plus projection.
#[pyclass(name = "Cover", module = "wlcovers", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCover {
    inner: wlcovers_core::CoveringMap,
}

#[pymethods]
impl PyCover {
    #[getter]
    fn graph(&self) -> PyGraph {
        self.inner.total.clone().into()
    }

    #[getter]
    fn base(&self) -> PyGraph {
        self.inner.base.clone().into()
    }

    #[getter]
    fn projection(&self) -> Vec<usize> {
        self.inner.vertex_map.clone()
    }

    fn degree(&self) -> PyResult<usize> {
        wlcovers_core::covering_degree(&self.inner).map_err(py_err)
    }

    fn is_valid(&self) -> PyResult<bool> {
        wlcovers_core::validate_covering(&self.inner)
            .map(|v| v.is_valid())
            .map_err(py_err)
    }

    /// True if every vertex has its image's color in every refinement round.
    fn lift_check(&self) -> bool {
        wlcovers_core::lift_check(&self.inner).passed()
    }

    fn __repr__(&self) -> String {
        format!(
            "Cover({} vertices over {})",
            self.inner.total.vertex_count(),
            self.inner.base.vertex_count()
        )
    }
}

/// Isomorphism classes of connected covers of a base, one representative each.
#[pyclass(name = "CoverDataset", module = "wlcovers", frozen)]
pub struct PyDataset {
    inner: dataset::CoverDataset,
}

#[pymethods]
impl PyDataset {
    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    fn graphs(&self) -> Vec<PyGraph> {
        self.inner
            .representatives
            .iter()
            .map(|r| r.graph().clone().into())
            .collect()
    }

    fn voltages(&self) -> Vec<PyVoltage> {
        self.inner
            .representatives
            .iter()
            .map(|r| PyVoltage {
                inner: r.voltage.clone(),
            })
            .collect()
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        let s = self.inner.stats;
        d.set_item("scanned", s.scanned)?;
        d.set_item("connected", s.connected)?;
        d.set_item("classes", s.classes)?;
        d.set_item("complete", s.complete)?;
        Ok(d)
    }

    /// Re-checks every dataset invariant; returns `(passed, failures)`.
    fn verify(&self) -> (bool, Vec<String>) {
        let report = dataset::verify_dataset(&self.inner);
        let failures = report
            .failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        (report.passed(), failures)
    }

    #[pyo3(signature = (directory, dot = false))]
    fn export(&self, directory: PathBuf, dot: bool) -> PyResult<usize> {
        dataset::export_dataset(&self.inner, &directory, dot)
            .map(|m| m.classes.len())
            .map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.representatives.len()
    }
}

#[pyfunction]
fn experiment_base() -> PyGraph {
    wlcovers_core::bundled::experiment_base().into()
}

#[pyfunction]
fn base_distinguished_edges(base: &PyGraph) -> Vec<(usize, usize)> {
    distinguished_edges(&base.inner)
}

/// Returns `(equivalent, round)` where `round` is the first distinguishing
/// round or `None`.
#[pyfunction]
fn wl_test(g: &PyGraph, h: &PyGraph) -> (bool, Option<usize>) {
    match wlcovers_core::wl_test(&g.inner, &h.inner) {
        wlcovers_core::WlVerdict::Equivalent => (true, None),
        wlcovers_core::WlVerdict::Distinguished { round } => (false, Some(round)),
    }
}

/// Colors of every refinement round, up to and including the stable one.
#[pyfunction]
#[pyo3(signature = (g, initial = None))]
fn color_refine(g: &PyGraph, initial: Option<Vec<usize>>) -> PyResult<Vec<Vec<usize>>> {
    let start = initial.map(|c| refine::Coloring::from_raw(&c));
    let trace = wlcovers_core::color_refine(&g.inner, start.as_ref()).map_err(py_err)?;
    Ok(trace.rounds().iter().map(|c| c.colors().to_vec()).collect())
}

#[pyfunction]
fn stable_coloring(g: &PyGraph) -> Vec<usize> {
    refine::stable_coloring(&g.inner).colors().to_vec()
}

#[pyfunction]
fn is_discrete(g: &PyGraph) -> bool {
    wlcovers_core::is_discrete(&g.inner)
}

/// An isomorphism `g -> h` as a vertex list, or `None`.
#[pyfunction]
fn graphs_isomorphic(g: &PyGraph, h: &PyGraph) -> PyResult<Option<Vec<usize>>> {
    wlcovers_core::graphs_isomorphic(&g.inner, &h.inner).map_err(py_err)
}

#[pyfunction]
fn check_decomposition(g: &PyGraph, h: &PyGraph) -> bool {
    refine::check_decomposition(&g.inner, &h.inner).passed()
}

#[pyfunction]
fn build_cover(base: &PyGraph, voltage: &PyVoltage) -> PyResult<PyCover> {
    wlcovers_core::build_cover(&base.inner, &voltage.inner)
        .map(|inner| PyCover { inner })
        .map_err(py_err)
}

/// A cover isomorphism as a vertex list, or `None`.
#[pyfunction]
fn covers_isomorphic(a: &PyCover, b: &PyCover) -> PyResult<Option<Vec<usize>>> {
    wlcovers_core::covers_isomorphic(&a.inner, &b.inner)
        .map(|v| v.witness().map(<[usize]>::to_vec))
        .map_err(py_err)
}

/// Canonical code of the radius-`radius` universal cover ball at `root`.
#[pyfunction]
fn universal_cover_ball_code(g: &PyGraph, root: usize, radius: usize) -> PyResult<String> {
    if root >= g.inner.vertex_count() {
        return Err(PyValueError::new_err(format!("vertex {root} out of range")));
    }
    let ball = wlcovers_core::universal_cover_ball(&g.inner, root, radius);
    Ok(wlcovers_core::rooted_tree_canonical(&ball))
}

#[pyfunction]
#[pyo3(signature = (base, degree, budget = DEFAULT_BUDGET, max_classes = None, workers = 0))]
fn generate_graphcovers(
    py: Python<'_>,
    base: &PyGraph,
    degree: usize,
    budget: u64,
    max_classes: Option<usize>,
    workers: usize,
) -> PyResult<PyDataset> {
    let config = GenerateConfig {
        budget,
        max_classes,
        workers,
        ..Default::default()
    };
    let base = base.inner.clone();
    py.detach(move || dataset::generate_graphcovers(&base, degree, &config))
        .map(|inner| PyDataset { inner })
        .map_err(py_err)
}

#[pyfunction]
fn load_dataset(manifest: PathBuf) -> PyResult<PyDataset> {
    dataset::load_dataset(&manifest)
        .map(|(_, inner)| PyDataset { inner })
        .map_err(py_err)
}

/// Number of index-`d` subgroups of the free group of rank `r`.
#[pyfunction]
fn hall_count(d: usize, r: usize) -> PyResult<BigUint> {
    counting::hall_count(d, r).map(|c| c.value).map_err(py_err)
}

#[pyfunction]
fn lower_bound(d: usize, r: usize) -> PyResult<BigUint> {
    counting::lower_bound(d, r).map_err(py_err)
}

fn feature_spec(name: &str, seed: u64) -> PyResult<FeatureSpec> {
    match name {
        "constant" => Ok(FeatureSpec::Constant),
        "degree" => Ok(FeatureSpec::Degree),
        "random" => Ok(FeatureSpec::Random { seed }),
        "onehot" => Ok(FeatureSpec::OneHotId),
        other => Err(PyValueError::new_err(format!(
            "unknown features {other:?}; expected constant, degree, random or onehot"
        ))),
    }
}

fn aggregation(name: &str) -> PyResult<Aggregation> {
    match name {
        "sum" => Ok(Aggregation::Sum),
        "mean" => Ok(Aggregation::Mean),
        other => Err(PyValueError::new_err(format!(
            "unknown aggregation {other:?}"
        ))),
    }
}

/// Mean and max pooled embedding of `g` under a fixed random network.
#[pyfunction]
#[pyo3(signature = (g, features = "constant", seed = DEFAULT_SEED, hidden = DEFAULT_HIDDEN, layers = DEFAULT_LAYERS, aggregation = "sum"))]
fn embed_graph(
    g: &PyGraph,
    features: &str,
    seed: u64,
    hidden: usize,
    layers: usize,
    aggregation: &str,
) -> PyResult<Vec<f64>> {
    let fs = feature_spec(features, seed)?;
    let model = MPModel::new(
        fs.dimension(&g.inner),
        hidden,
        layers,
        seed,
        self::aggregation(aggregation)?,
    );
    mp::embed_graph(&g.inner, fs, &model).map_err(py_err)
}

/// Embeds all graphs and compares them pairwise; returns a dict with
/// `indistinguishable`, `distances`, `distinct_embeddings` and
/// `predicted_accuracy`.
#[pyfunction]
#[pyo3(signature = (graphs, features = "constant", seed = DEFAULT_SEED, hidden = DEFAULT_HIDDEN, layers = DEFAULT_LAYERS, aggregation = "sum", tolerance = DEFAULT_TOLERANCE))]
#[allow(clippy::too_many_arguments)]
fn indistinguishability_report<'py>(
    py: Python<'py>,
    graphs: Vec<PyGraph>,
    features: &str,
    seed: u64,
    hidden: usize,
    layers: usize,
    aggregation: &str,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let fs = feature_spec(features, seed)?;
    let graphs: Vec<wlcovers_core::Graph> = graphs.into_iter().map(|g| g.inner).collect();
    let first = graphs
        .first()
        .ok_or_else(|| PyValueError::new_err("need at least two graphs"))?;
    let model = MPModel::new(
        fs.dimension(first),
        hidden,
        layers,
        seed,
        self::aggregation(aggregation)?,
    );
    let r = mp::indistinguishability_report(&graphs, fs, &model, tolerance).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("indistinguishable", r.indistinguishable)?;
    d.set_item("distances", r.distances)?;
    d.set_item("relative", r.relative)?;
    d.set_item("distinct_embeddings", r.distinct_embeddings)?;
    d.set_item("predicted_accuracy", r.predicted_accuracy)?;
    Ok(d)
}

#[pymodule]
fn wlcovers(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyVoltage>()?;
    m.add_class::<PyCover>()?;
    m.add_class::<PyDataset>()?;
    m.add_function(wrap_pyfunction!(experiment_base, m)?)?;
    m.add_function(wrap_pyfunction!(base_distinguished_edges, m)?)?;
    m.add_function(wrap_pyfunction!(wl_test, m)?)?;
    m.add_function(wrap_pyfunction!(color_refine, m)?)?;
    m.add_function(wrap_pyfunction!(stable_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(is_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(graphs_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(check_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(build_cover, m)?)?;
    m.add_function(wrap_pyfunction!(covers_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(universal_cover_ball_code, m)?)?;
    m.add_function(wrap_pyfunction!(generate_graphcovers, m)?)?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(hall_count, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(embed_graph, m)?)?;
    m.add_function(wrap_pyfunction!(indistinguishability_report, m)?)?;
    Ok(())
}
