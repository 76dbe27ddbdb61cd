//! Python bindings. Ratios cross the boundary as `(numerator, denominator)`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sweeplab::bisect::{bisec_exact, bisect_by_bites, symmetry_group, DEFAULT_Q_CAP};
use sweeplab::cobordism::{cover_graph, lifted_sweepout, stabilization_budget, IntersectionGraph, ReleasePolicy};
use sweeplab::folner::{self, FolnerProfileTable};
use sweeplab::groups::{self, Family};
use sweeplab::sweepout::{self, Convention, Sweepout};
use sweeplab::{Error, VertexSet};

fn err(e: Error) -> PyErr {
    match e {
        Error::InvariantViolation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Rows = Vec<(usize, u64, u64, Vec<usize>)>;

fn table_rows(t: &FolnerProfileTable) -> Rows {
    (1..=t.v_max())
        .map(|v| {
            let r = t.ratio(v);
            (v, *r.numer(), *r.denom(), t.witness(v).to_vec())
        })
        .collect()
}

fn ratio_pair(r: &num_rational::BigRational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

fn set(g: &sweeplab::Graph, vertices: Option<Vec<usize>>) -> PyResult<VertexSet> {
    match vertices {
        None => Ok(VertexSet::full(g.vertex_count())),
        Some(v) => VertexSet::from_vertices(g.vertex_count(), v).map_err(err),
    }
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph(sweeplab::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        sweeplab::Graph::new(vertex_count, edges).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        sweeplab::Graph::from_text(text).map(PyGraph).map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.0.vertex_count() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.0.neighbors(v).to_vec())
    }

    fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn edge_boundary(&self, vertices: Vec<usize>) -> PyResult<usize> {
        let a = set(&self.0, Some(vertices))?;
        sweeplab::graph::edge_boundary_size(&self.0, &a).map_err(err)
    }

    /// Width of an order under `"edge"` or `"vertex"`.
    #[pyo3(signature = (order, convention = "edge"))]
    fn width(&self, order: Vec<usize>, convention: &str) -> PyResult<usize> {
        let conv: Convention = convention.parse().map_err(err)?;
        let s = Sweepout::new(&self.0, order).map_err(err)?;
        Ok(s.width(conv))
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.0.vertex_count(), self.0.edge_count())
    }
}

#[pyclass(name = "CosetAction", frozen)]
struct PyCosetAction(groups::CosetAction);

#[pymethods]
impl PyCosetAction {
    /// Family descriptor such as `"cyclic:8"`, `"torus:2x4"` or `"heis:3"`.
    #[new]
    fn new(family: &str) -> PyResult<Self> {
        let f = Family::parse(family).map_err(err)?;
        groups::make_family(&f).map(PyCosetAction).map_err(err)
    }

    #[getter]
    fn family(&self) -> String {
        self.0.family().to_string()
    }

    #[getter]
    fn coset_count(&self) -> usize {
        self.0.coset_count()
    }

    #[getter]
    fn generators(&self) -> Vec<(String, Vec<usize>)> {
        self.0.generators().iter().map(|g| (g.label.clone(), g.permutation().to_vec())).collect()
    }

    fn act_word(&self, word: Vec<String>, x: usize) -> PyResult<usize> {
        self.0.act_word(&word, x).map_err(err)
    }

    fn schreier_graph(&self) -> PyGraph {
        PyGraph(groups::schreier_graph(&self.0))
    }

    /// Size of the symmetry group used for bites, and whether it is exact.
    #[pyo3(signature = (cap = DEFAULT_Q_CAP, seed = 0))]
    fn symmetry_order(&self, cap: usize, seed: u64) -> (usize, bool) {
        let q = symmetry_group(&self.0, cap, seed);
        (q.len(), q.is_exact())
    }

    fn __repr__(&self) -> String {
        format!("CosetAction('{}', cosets={})", self.0.family(), self.0.coset_count())
    }
}

/// Rows `(V, num, den, witness)` of the exact profile.
#[pyfunction]
#[pyo3(signature = (graph, v_max, budget = folner::DEFAULT_SUBSET_BUDGET, anchor = None))]
fn profile_exact(
    py: Python<'_>,
    graph: &PyGraph,
    v_max: usize,
    budget: u64,
    anchor: Option<usize>,
) -> PyResult<Rows> {
    let opts = folner::ExactOptions { budget, anchor, ..Default::default() };
    let t = py.detach(|| folner::profile_exact_with(&graph.0, v_max, &opts)).map_err(err)?;
    Ok(table_rows(&t))
}

#[pyfunction]
#[pyo3(signature = (graph, v_max, seed = 0))]
fn profile_heuristic(
    py: Python<'_>,
    graph: &PyGraph,
    v_max: usize,
    seed: u64,
) -> PyResult<Rows> {
    let t = py.detach(|| folner::profile_heuristic(&graph.0, v_max, seed)).map_err(err)?;
    Ok(table_rows(&t))
}

/// `(width, order)` of an optimal edge-cutwidth order.
#[pyfunction]
fn cutwidth_exact(py: Python<'_>, graph: &PyGraph) -> PyResult<(usize, Vec<usize>)> {
    let (w, s) = py.detach(|| sweepout::cutwidth_exact(&graph.0)).map_err(err)?;
    Ok((w, s.order().to_vec()))
}

/// `(b1, b2, cut)` of an optimal balanced bisection.
#[pyfunction]
#[pyo3(signature = (graph, vertices = None))]
fn bisection_exact(
    py: Python<'_>,
    graph: &PyGraph,
    vertices: Option<Vec<usize>>,
) -> PyResult<(Vec<usize>, Vec<usize>, usize)> {
    let a = set(&graph.0, vertices)?;
    let b = py.detach(|| bisec_exact(&graph.0, &a)).map_err(err)?;
    Ok((b.b1.to_vec(), b.b2.to_vec(), b.cut_size()))
}

/// `(b1, b2, cut)` from bites on the Schreier graph of `action`.
#[pyfunction]
#[pyo3(signature = (action, seed = 0))]
fn bisect_bites(py: Python<'_>, action: &PyCosetAction, seed: u64) -> PyResult<(Vec<usize>, Vec<usize>, usize)> {
    py.detach(|| {
        let g = groups::schreier_graph(&action.0);
        let q = symmetry_group(&action.0, DEFAULT_Q_CAP, seed);
        let opts = sweepout::SeriesOptions { seed, ..Default::default() };
        let profile = sweepout::sweepout_profile(&g, &q, &opts)?;
        let b = bisect_by_bites(&g, &VertexSet::full(g.vertex_count()), &profile, &q)?;
        Ok((b.b1.to_vec(), b.b2.to_vec(), b.cut_size()))
    })
    .map_err(err)
}

/// `(order, edge_width, vertex_width, chain_bound)` of the recursive sweepout.
#[pyfunction]
#[pyo3(signature = (action, seed = 0))]
fn sweepout_recursive(py: Python<'_>, action: &PyCosetAction, seed: u64) -> PyResult<(Vec<usize>, usize, usize, usize)> {
    py.detach(|| {
        let g = groups::schreier_graph(&action.0);
        let q = symmetry_group(&action.0, DEFAULT_Q_CAP, seed);
        let opts = sweepout::SeriesOptions { seed, ..Default::default() };
        let profile = sweepout::sweepout_profile(&g, &q, &opts)?;
        let r = sweepout::sweepout_recursive(&g, &VertexSet::full(g.vertex_count()), &profile, &q)?;
        Ok((r.sweepout.order().to_vec(), r.sweepout.width_edge(), r.sweepout.width_vertex(), r.chain_bound))
    })
    .map_err(err)
}

/// Width bound from the analytic profile of `z:D`, as decimal strings.
#[pyfunction]
fn folsw_bound_analytic(dim: usize, size: usize) -> PyResult<(String, String)> {
    let p = folner::analytic_profile(groups::InfiniteFamily::Lattice(dim)).map_err(err)?;
    Ok(ratio_pair(&sweepout::folsw_bound(&p, size)))
}

#[pyfunction]
fn predicted_rate_exponent(alpha: f64) -> PyResult<f64> {
    sweepout::predicted_rate_exponent(alpha).map_err(err)
}

/// `(m, constant)` with `m = k²w + k`.
#[pyfunction]
fn token_budget(k: usize, w: usize) -> (u128, u128) {
    let b = stabilization_budget(k, w);
    (b.m, b.constant)
}

/// Lift the natural coset order to the cover of `graph_text` over `action`
/// and play the token game. Returns `(success, lifted_width, max_attached, steps)`.
#[pyfunction]
#[pyo3(signature = (graph_text, action, tokens = None, release = "leaving"))]
fn token_game(
    graph_text: &str,
    action: &PyCosetAction,
    tokens: Option<u128>,
    release: &str,
) -> PyResult<(bool, usize, u128, usize)> {
    let policy = match release {
        "leaving" => ReleasePolicy::LeavingBoundary,
        "never" => ReleasePolicy::Never,
        other => return Err(PyValueError::new_err(format!("unknown release policy {other:?}"))),
    };
    let base = IntersectionGraph::from_text(graph_text).map_err(err)?;
    let cover = cover_graph(&base, &action.0).map_err(err)?;
    let coset = Sweepout::new(&groups::schreier_graph(&action.0), (0..action.0.coset_count()).collect()).map_err(err)?;
    let lifted = lifted_sweepout(&base, &cover, &coset).map_err(err)?;
    let k = cover.graph.max_degree().max(1);
    let w = lifted.width_vertex();
    let m = tokens.unwrap_or_else(|| stabilization_budget(k, w).m);
    let trace = sweeplab::cobordism::token_game(&cover.graph, &cover.blue, &lifted, k, m, policy).map_err(err)?;
    Ok((trace.success(), w, trace.max_attached, trace.steps.len()))
}

#[pymodule]
fn sweeplab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCosetAction>()?;
    m.add_function(wrap_pyfunction!(profile_exact, m)?)?;
    m.add_function(wrap_pyfunction!(profile_heuristic, m)?)?;
    m.add_function(wrap_pyfunction!(cutwidth_exact, m)?)?;
    m.add_function(wrap_pyfunction!(bisection_exact, m)?)?;
    m.add_function(wrap_pyfunction!(bisect_bites, m)?)?;
    m.add_function(wrap_pyfunction!(sweepout_recursive, m)?)?;
    m.add_function(wrap_pyfunction!(folsw_bound_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_rate_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(token_budget, m)?)?;
    m.add_function(wrap_pyfunction!(token_game, m)?)?;
    Ok(())
}
