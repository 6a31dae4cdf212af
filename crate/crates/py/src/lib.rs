//! Python bindings: grow networks, load and write edge lists, compute the
//! metric suite and generate baselines. Reports come back as plain dicts.

use std::path::PathBuf;

use backcloth::baselines::{generate_erdos_renyi, generate_pref_attach};
use backcloth::io::{self, EdgeFormat, ObjectiveWeights};
use backcloth::metrics::{self, MetricSettings, MetricsReport, Undirected};
use backcloth::{DirectedGraph, Error, NodeId};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParam { .. } | Error::NonGrowing { .. } | Error::Config(_) | Error::UnknownNode(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Malformed { .. } | Error::MissingInput { .. } | Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Serde value to a Python object via the `json` module.
fn to_object<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Simulation parameters. Every field is a read/write attribute.
#[pyclass(name = "SimParams", module = "pybackcloth", get_all, set_all, from_py_object)]
#[derive(Clone)]
struct PySimParams {
    nu: f64,
    psi: f64,
    kappa: u32,
    p_random: f64,
    p_triadic: f64,
    p_cumulative: f64,
    p_distance: f64,
    top_k: usize,
    distance_check: bool,
    n0: usize,
    target_nodes: usize,
    seed: u64,
    budget_split: [f64; 4],
}

impl From<backcloth::SimParams> for PySimParams {
    fn from(p: backcloth::SimParams) -> Self {
        Self {
            nu: p.nu,
            psi: p.psi,
            kappa: p.kappa,
            p_random: p.p_random,
            p_triadic: p.p_triadic,
            p_cumulative: p.p_cumulative,
            p_distance: p.p_distance,
            top_k: p.top_k,
            distance_check: p.distance_check,
            n0: p.n0,
            target_nodes: p.target_nodes,
            seed: p.seed,
            budget_split: p.budget_split,
        }
    }
}

impl From<&PySimParams> for backcloth::SimParams {
    fn from(p: &PySimParams) -> Self {
        Self {
            nu: p.nu,
            psi: p.psi,
            kappa: p.kappa,
            p_random: p.p_random,
            p_triadic: p.p_triadic,
            p_cumulative: p.p_cumulative,
            p_distance: p.p_distance,
            top_k: p.top_k,
            distance_check: p.distance_check,
            n0: p.n0,
            target_nodes: p.target_nodes,
            seed: p.seed,
            budget_split: p.budget_split,
        }
    }
}

#[pymethods]
impl PySimParams {
    /// Defaults, overridden by keyword arguments.
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut p = Self::from(backcloth::SimParams::default());
        if let Some(kw) = kwargs {
            let py = kw.py();
            let obj = Bound::new(py, p.clone())?;
            for (k, v) in kw.iter() {
                let name: String = k.extract()?;
                if !obj.hasattr(name.as_str())? || name.starts_with('_') {
                    return Err(PyValueError::new_err(format!("unknown parameter `{name}`")));
                }
                obj.setattr(name.as_str(), v)?;
            }
            p = obj.borrow().clone();
        }
        Ok(p)
    }

    /// Raises ValueError naming the first invalid field.
    fn validate(&self) -> PyResult<()> {
        backcloth::SimParams::from(self).validate().map_err(to_py)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_object(py, &backcloth::SimParams::from(self))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", backcloth::SimParams::from(self))
    }
}

/// Directed simple graph on dense integer ids.
#[pyclass(name = "Graph", module = "pybackcloth")]
struct PyGraph {
    inner: DirectedGraph,
}

fn node(g: &DirectedGraph, v: u32) -> PyResult<NodeId> {
    let id = NodeId(v);
    if g.contains(id) {
        Ok(id)
    } else {
        Err(to_py(Error::UnknownNode(v)))
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n=0))]
    fn new(n: usize) -> Self {
        Self {
            inner: DirectedGraph::with_nodes(n),
        }
    }

    /// Reads an edge list. `format` is "auto", "whitespace" or "csv".
    /// Returns `(graph, labels)` where `labels[id]` is the original label.
    #[staticmethod]
    #[pyo3(signature = (path, format="auto"))]
    fn load(path: PathBuf, format: &str) -> PyResult<(Self, Vec<String>)> {
        let format: EdgeFormat = format.parse().map_err(PyValueError::new_err)?;
        let loaded = io::load_edge_list(&path, format).map_err(to_py)?;
        Ok((Self { inner: loaded.graph }, loaded.labels))
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_edge_list(&self.inner, path).map_err(to_py)
    }

    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    #[pyo3(signature = (turn=0))]
    fn add_node(&mut self, turn: u32) -> u32 {
        self.inner.add_node(turn).0
    }

    /// True if the edge was new.
    fn add_edge(&mut self, src: u32, dst: u32) -> PyResult<bool> {
        self.inner.add_edge(NodeId(src), NodeId(dst)).map_err(to_py)
    }

    fn has_edge(&self, src: u32, dst: u32) -> bool {
        self.inner.has_edge(NodeId(src), NodeId(dst))
    }

    /// Edges sorted by `(src, dst)`.
    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.sorted_edges().into_iter().map(|(s, d)| (s.0, d.0)).collect()
    }

    fn successors(&self, v: u32) -> PyResult<Vec<u32>> {
        let v = node(&self.inner, v)?;
        Ok(self.inner.out_slice(v).iter().map(|x| x.0).collect())
    }

    fn predecessors(&self, v: u32) -> PyResult<Vec<u32>> {
        let v = node(&self.inner, v)?;
        Ok(self.inner.in_slice(v).iter().map(|x| x.0).collect())
    }

    fn in_degrees(&self) -> Vec<usize> {
        self.inner.in_degrees()
    }

    fn out_degrees(&self) -> Vec<usize> {
        self.inner.out_degrees()
    }

    fn birth_turns(&self) -> Vec<u32> {
        self.inner.nodes().map(|v| self.inner.birth_turn(v)).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Grows a network. Returns `(graph, turns)` with one dict per turn.
#[pyfunction]
fn run<'py>(py: Python<'py>, params: &PySimParams) -> PyResult<(PyGraph, Bound<'py, PyAny>)> {
    let p = backcloth::SimParams::from(params);
    let out = py.detach(|| backcloth::run(&p)).map_err(to_py)?;
    let turns = to_object(py, &out.ledger)?;
    Ok((PyGraph { inner: out.graph }, turns))
}

fn settings(
    exact_threshold: usize,
    sample_sources: usize,
    seed: u64,
    centralities: bool,
) -> MetricSettings {
    MetricSettings {
        exact_threshold,
        sample_sources,
        seed,
        centralities,
        ..MetricSettings::default()
    }
}

/// Full metric report as a dict.
#[pyfunction]
#[pyo3(signature = (graph, centralities=true, exact_threshold=20_000, sample_sources=512, seed=0))]
fn compute_metrics<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    centralities: bool,
    exact_threshold: usize,
    sample_sources: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let s = settings(exact_threshold, sample_sources, seed, centralities);
    let report = py.detach(|| MetricsReport::compute(&graph.inner, &s));
    to_object(py, &report)
}

/// Compares `right` against the reference `left`; returns the comparison
/// dict with per-metric deltas and the objective.
#[pyfunction]
#[pyo3(signature = (left, right, exact_threshold=20_000, sample_sources=512, seed=0))]
fn compare<'py>(
    py: Python<'py>,
    left: &PyGraph,
    right: &PyGraph,
    exact_threshold: usize,
    sample_sources: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let s = settings(exact_threshold, sample_sources, seed, false);
    let c = py
        .detach(|| {
            let l = MetricsReport::compute(&left.inner, &s);
            let r = MetricsReport::compute(&right.inner, &s);
            io::compare(&l, &r, &ObjectiveWeights::default())
        })
        .map_err(to_py)?;
    to_object(py, &c)
}

/// Modularity of a given community assignment on the undirected projection.
#[pyfunction]
fn modularity(graph: &PyGraph, membership: Vec<u32>) -> PyResult<f64> {
    metrics::modularity_of(&Undirected::from_graph(&graph.inner), &membership).map_err(to_py)
}

/// Louvain partition: `(membership, modularity)`.
#[pyfunction]
#[pyo3(signature = (graph, seed=0))]
fn louvain(graph: &PyGraph, seed: u64) -> PyResult<(Vec<u32>, f64)> {
    let p = metrics::louvain(&Undirected::from_graph(&graph.inner), seed).map_err(to_py)?;
    Ok((p.membership, p.modularity))
}

#[pyfunction]
#[pyo3(signature = (n, p, seed=0))]
fn erdos_renyi(n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    generate_erdos_renyi(n, p, seed)
        .map(|inner| PyGraph { inner })
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, m, seed=0))]
fn pref_attach(n: usize, m: usize, seed: u64) -> PyResult<PyGraph> {
    generate_pref_attach(n, m, seed)
        .map(|inner| PyGraph { inner })
        .map_err(to_py)
}

#[pymodule]
pub fn pybackcloth(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySimParams>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(compute_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(louvain, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(pref_attach, m)?)?;
    Ok(())
}
