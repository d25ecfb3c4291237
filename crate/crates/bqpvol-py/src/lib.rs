//! Python bindings for the bqpvol toolkit.
//!
//! The module exposes the core operations — exact volumes, linear-extension
//! counts, Euler numbers, the odd-cycle separation oracle, simplex geometry,
//! and the Monte-Carlo estimators — on a thin `Graph` wrapper. Exact rational
//! results are returned as `(numerator, denominator)` pairs of Python ints so
//! callers can build `fractions.Fraction` values without precision loss.

use num_bigint::BigInt;
use pyo3::exceptions::{PyNotImplementedError, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use bqpvol::formulas::{self, PolytopeKind};
use bqpvol::graph;
use bqpvol::mc;
use bqpvol::numbers::{self, ExactRational};
use bqpvol::polytope::{self, RefinementKind};
use bqpvol::poset::{self, CountCaps, Engine};
use bqpvol::separation::{self, ScanMode};

fn to_py_err(e: bqpvol::Error) -> PyErr {
    match e {
        bqpvol::Error::Size { .. } => PyOverflowError::new_err(e.to_string()),
        bqpvol::Error::Capability(_) => PyNotImplementedError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn engine_from_str(s: &str) -> PyResult<Engine> {
    s.parse::<Engine>().map_err(to_py_err)
}

fn kind_from_str(s: &str) -> PyResult<PolytopeKind> {
    match s {
        "O" | "o" => Ok(PolytopeKind::O),
        "Q" | "q" => Ok(PolytopeKind::Q),
        "P" | "p" => Ok(PolytopeKind::P),
        "Q-minus-P" | "q-minus-p" | "QminusP" => Ok(PolytopeKind::QMinusP),
        other => Err(PyValueError::new_err(format!(
            "unknown polytope '{other}' (known: O, Q, P, Q-minus-P)"
        ))),
    }
}

fn system_from_str(g: &graph::Graph, s: &str) -> PyResult<polytope::HalfspaceSystem> {
    match s {
        "O" | "o" => Ok(polytope::build_o(g)),
        "Q" | "q" => Ok(polytope::build_q(g)),
        "R" | "r" => polytope::build_refinement(g, RefinementKind::BigCycle).map_err(to_py_err),
        "T" | "t" => polytope::build_refinement(g, RefinementKind::Triangles).map_err(to_py_err),
        "P" | "p" => polytope::build_refinement(g, RefinementKind::AllCycles).map_err(to_py_err),
        other => Err(PyValueError::new_err(format!(
            "unknown halfspace system '{other}' (known: O, Q, R, T, P)"
        ))),
    }
}

/// Exact rational → (numerator, denominator) Python-int pair.
fn rational_pair(py: Python<'_>, v: &ExactRational) -> PyResult<Py<PyAny>> {
    let pair = (v.numer().clone(), v.denom().clone());
    Ok(pair.into_pyobject(py)?.unbind().into_any())
}

/// Accept int, float, str, or any object whose `str()` parses as a rational
/// (covers `fractions.Fraction`).
fn rational_from_py(obj: &Bound<'_, PyAny>) -> PyResult<ExactRational> {
    if let Ok(i) = obj.extract::<i64>() {
        return Ok(ExactRational::from_integer(i.into()));
    }
    if let Ok(big) = obj.extract::<BigInt>() {
        return Ok(ExactRational::from_integer(big));
    }
    if let Ok(f) = obj.extract::<f64>() {
        return ExactRational::from_float(f).ok_or_else(|| {
            PyValueError::new_err(format!("{f} is not a finite coordinate"))
        });
    }
    let s: String = obj.str()?.extract()?;
    numbers::rational_from_str(&s).map_err(to_py_err)
}

/// An undirected graph on vertices 1..n with the canonical (lexicographic)
/// edge order used for y-coordinates.
#[pyclass(frozen, name = "Graph")]
struct PyGraph {
    inner: graph::Graph,
}

#[pymethods]
impl PyGraph {
    /// Build from a family spec such as ``"cycle:5"``, ``"necklace:4"``,
    /// ``"union:path:2+star:3"``, or an explicit edge list via ``n=...,
    /// edges=[...]``.
    #[new]
    #[pyo3(signature = (spec=None, *, n=None, edges=None))]
    fn new(spec: Option<&str>, n: Option<usize>, edges: Option<Vec<(usize, usize)>>) -> PyResult<Self> {
        let inner = match (spec, n, edges) {
            (Some(s), None, None) => graph::Graph::from_spec_str(s).map_err(to_py_err)?,
            (None, Some(n), Some(edges)) => graph::Graph::new(n, edges).map_err(to_py_err)?,
            _ => {
                return Err(PyValueError::new_err(
                    "pass either a spec string or both n= and edges=",
                ))
            }
        };
        Ok(PyGraph { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Ambient dimension n + m.
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Edges in canonical order — the order of the y-coordinates.
    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    /// Simple cycles of a cactus graph, in canonical order.
    fn cycles(&self) -> PyResult<Vec<Vec<usize>>> {
        graph::enumerate_cycles_cactus(&self.inner).map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={}, d={})", self.inner.n(), self.inner.m(), self.inner.dim())
    }
}

/// Exact volume of a polytope of `graph`. Returns a dict with the value as a
/// string, a `(numerator, denominator)` pair, a float, the d-th root, and the
/// method that produced it.
#[pyfunction]
#[pyo3(signature = (graph, polytope="Q", engine="auto"))]
fn volume<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    polytope: &str,
    engine: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = kind_from_str(polytope)?;
    let engine = engine_from_str(engine)?;
    let res = formulas::volume(&graph.inner, kind, engine, CountCaps::default()).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("polytope", polytope)?;
    out.set_item("dimension", res.dimension)?;
    out.set_item("value", &res.value)?;
    out.set_item("exact", rational_pair(py, &res.exact)?)?;
    out.set_item("float", res.value_f64)?;
    out.set_item("root", res.dth_root)?;
    out.set_item("method", &res.method)?;
    Ok(out)
}

/// Number of linear extensions of the incidence poset, as a Python int.
#[pyfunction]
#[pyo3(signature = (graph, engine="auto"))]
fn lecount(py: Python<'_>, graph: &PyGraph, engine: &str) -> PyResult<Py<PyAny>> {
    let engine = engine_from_str(engine)?;
    let e = poset::count_linear_extensions(&graph.inner, engine, CountCaps::default())
        .map_err(to_py_err)?;
    Ok(e.into_pyobject(py)?.unbind().into_any())
}

/// Euler (zigzag) numbers A_0..A_k as Python ints.
#[pyfunction]
fn euler_numbers(py: Python<'_>, k: usize) -> PyResult<Bound<'_, PyList>> {
    let table = numbers::euler_numbers(k);
    PyList::new(py, table.values().iter().cloned())
}

/// Run the odd-cycle separation oracle on a point given as x/y coordinate
/// sequences (ints, floats, strings, or Fractions). Returns None when every
/// odd-cycle inequality is satisfied, otherwise a dict describing the row.
#[pyfunction]
#[pyo3(signature = (graph, x, y, most_violated=false, exhaustive=false))]
fn separate<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    x: Vec<Bound<'py, PyAny>>,
    y: Vec<Bound<'py, PyAny>>,
    most_violated: bool,
    exhaustive: bool,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let g = &graph.inner;
    if x.len() != g.n() || y.len() != g.m() {
        return Err(PyValueError::new_err(format!(
            "point has {} x and {} y coordinates, graph needs {} and {}",
            x.len(),
            y.len(),
            g.n(),
            g.m()
        )));
    }
    let mut point: Vec<ExactRational> = Vec::with_capacity(g.dim());
    for obj in x.iter().chain(y.iter()) {
        point.push(rational_from_py(obj)?);
    }
    let result = if exhaustive {
        separation::separate_exhaustive(g, &point)
    } else {
        separation::separate(g, &point)
    }
    .map_err(to_py_err)?;
    let mode = if most_violated { ScanMode::MostViolated } else { ScanMode::FirstViolated };
    match result.outcome(mode) {
        None => Ok(None),
        Some(f) => {
            let out = PyDict::new(py);
            out.set_item("cycle", f.cycle.clone())?;
            out.set_item("a", f.a.clone())?;
            out.set_item("violation", rational_pair(py, &f.violation)?)?;
            out.set_item("violation_str", f.violation.to_string())?;
            out.set_item("row", polytope::hrep_row_line(&f.row, g.dim()))?;
            out.set_item("cycles_checked", result.cycles_checked)?;
            Ok(Some(out))
        }
    }
}

/// Exact geometry of the simplex W cut off by OC(A) on a single cycle:
/// |det| and volume as (numerator, denominator) pairs.
#[pyfunction]
fn simplex_w<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    a: Vec<(usize, usize)>,
) -> PyResult<Bound<'py, PyDict>> {
    let w = polytope::simplex_w(&graph.inner, &a).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("a", w.a.clone())?;
    out.set_item("det_abs", rational_pair(py, &w.det_abs_exact)?)?;
    out.set_item("volume", rational_pair(py, &w.volume_exact)?)?;
    Ok(out)
}

/// Monte-Carlo box-rejection estimate of the volume of one halfspace system
/// (O, Q, R, T, or P). Deterministic for a fixed (seed, samples) pair.
#[pyfunction]
#[pyo3(signature = (graph, polytope="Q", samples=1_000_000, seed=mc::DEFAULT_SEED))]
fn estimate_volume<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    polytope: &str,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let system = system_from_str(&graph.inner, polytope)?;
    let est = py
        .detach(|| mc::estimate_volume(&system, samples, seed))
        .map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("polytope", polytope)?;
    out.set_item("dimension", est.dimension)?;
    out.set_item("hits", est.hits)?;
    out.set_item("samples", est.samples)?;
    out.set_item("seed", est.seed)?;
    out.set_item("estimate", est.estimate)?;
    out.set_item("std_error", est.std_error)?;
    out.set_item("root", est.dth_root)?;
    out.set_item("root_std_error", est.dth_root_std_error)?;
    Ok(out)
}

/// The shared-stream necklace experiment: exact 𝒬 volume plus conditional
/// Monte-Carlo rows for 𝒬, ℛ, 𝒯, 𝒫 of N_n.
#[pyfunction]
#[pyo3(signature = (n, samples=1_000_000, seed=mc::DEFAULT_SEED))]
fn necklace_experiment<'py>(
    py: Python<'py>,
    n: usize,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = py
        .detach(|| mc::necklace_experiment(n, samples, seed))
        .map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("n", rep.n)?;
    out.set_item("dimension", rep.dimension)?;
    out.set_item("samples", rep.samples)?;
    out.set_item("seed", rep.seed)?;
    out.set_item("exact_q_volume", &rep.exact_q_volume)?;
    out.set_item("exact_q_root", rep.exact_q_root)?;
    out.set_item("table_q_root", rep.table_q_root)?;
    let rows = PyList::empty(py);
    for r in &rep.rows {
        let row = PyDict::new(py);
        row.set_item("polytope", &r.polytope)?;
        row.set_item("hits", r.hits)?;
        row.set_item("estimate", r.estimate)?;
        row.set_item("std_error", r.std_error)?;
        row.set_item("root", r.dth_root)?;
        row.set_item("root_std_error", r.dth_root_std_error)?;
        rows.append(row)?;
    }
    out.set_item("rows", rows)?;
    Ok(out)
}

/// H-representation of a halfspace system as a list of (tag, text) rows.
#[pyfunction]
#[pyo3(signature = (graph, polytope="Q"))]
fn hrep(graph: &PyGraph, polytope: &str) -> PyResult<Vec<(String, String)>> {
    let system = system_from_str(&graph.inner, polytope)?;
    Ok(system
        .rows
        .iter()
        .map(|row| {
            (format!("{}", row.tag), polytope::hrep_row_line(row, system.dimension))
        })
        .collect())
}

#[pymodule]
fn bqpvol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(volume, m)?)?;
    m.add_function(wrap_pyfunction!(lecount, m)?)?;
    m.add_function(wrap_pyfunction!(euler_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(separate, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_w, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_volume, m)?)?;
    m.add_function(wrap_pyfunction!(necklace_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(hrep, m)?)?;
    m.add("DEFAULT_SEED", mc::DEFAULT_SEED)?;
    Ok(())
}
