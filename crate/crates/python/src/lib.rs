//! Python bindings: graphs, embeddings, the reachability oracle, gadget
//! compilation and verification, the reduction and the transforms. Reports
//! come back as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use ::reconforge as engine;
use engine::gadget::{verify_pattern_gadget, PatternGadget};
use engine::oracle::{self as oracle, MoveRule, Witness, DEFAULT_CAP};
use engine::reduction::{compile, GadgetLibrary, HostKit, ReductionBundle};
use engine::surface::validate::{
    validate_pp_quadrangulation, validate_reflexive_triangulation, validate_sphere_quadrangulation,
};
use engine::{generators, transforms, Error, Vertex};

create_exception!(reconforge, ReconforgeError, PyValueError, "Raised for invalid input or a failed check.");
create_exception!(reconforge, CapExceeded, ReconforgeError, "Raised when a search exceeds its state cap.");

fn err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => CapExceeded::new_err(e.to_string()),
        _ => ReconforgeError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    ReconforgeError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_rule(rule: &str) -> PyResult<MoveRule> {
    rule.parse().map_err(err)
}

#[pyclass(name = "Graph", module = "reconforge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(engine::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, loops = Vec::new()))]
    fn new(n: usize, edges: Vec<(Vertex, Vertex)>, loops: Vec<Vertex>) -> PyResult<Self> {
        let mut b = engine::Graph::builder(n);
        for (u, v) in edges {
            b.add_edge(u, v).map_err(err)?;
        }
        for v in loops {
            b.add_loop(v).map_err(err)?;
        }
        Ok(PyGraph(b.build()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyGraph).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.0.edges().collect()
    }

    #[getter]
    fn loops(&self) -> Vec<Vertex> {
        self.0.looped_vertices().collect()
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.0.has_edge(u, v)
    }

    fn neighbours(&self, v: Vertex) -> PyResult<Vec<Vertex>> {
        if v >= self.0.vertex_count() {
            return Err(ReconforgeError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.0.neighbours(v).to_vec())
    }

    fn is_bipartite(&self) -> bool {
        self.0.is_bipartite()
    }

    fn is_reflexive(&self) -> bool {
        self.0.is_reflexive()
    }

    fn reflexive_closure(&self) -> Self {
        PyGraph(self.0.reflexive_closure())
    }

    fn double_cover(&self) -> Self {
        PyGraph(engine::graph::double_cover(&self.0))
    }

    fn product(&self, other: &PyGraph) -> Self {
        PyGraph(engine::graph::categorical_product(&self.0, &other.0))
    }

    fn to_dot(&self) -> String {
        engine::io::to_dot(&self.0, &[])
    }

    fn __len__(&self) -> usize {
        self.0.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={}, loops={})", self.0.vertex_count(), self.0.edge_count(), self.0.looped_vertices().count())
    }
}

#[pyclass(name = "Embedding", module = "reconforge", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEmbedding(engine::surface::Embedding);

#[pymethods]
impl PyEmbedding {
    /// Rotation lists per vertex and the edges with sign -1.
    #[new]
    #[pyo3(signature = (rotations, negative_edges = Vec::new()))]
    fn new(rotations: Vec<Vec<Vertex>>, negative_edges: Vec<(Vertex, Vertex)>) -> Self {
        PyEmbedding(engine::surface::Embedding::new(rotations, negative_edges))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyEmbedding).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn rotations(&self) -> Vec<Vec<Vertex>> {
        self.0.rotations().to_vec()
    }

    /// Faces as closed walks, with the Euler characteristic.
    fn faces<'py>(&self, py: Python<'py>, graph: &PyGraph) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &engine::surface::trace_faces(&graph.0, &self.0).map_err(err)?)
    }
}

#[pyclass(name = "Gadget", module = "reconforge", frozen, skip_from_py_object)]
struct PyGadget(PatternGadget);

#[pymethods]
impl PyGadget {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyGadget).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph(self.0.graph.clone())
    }

    #[getter]
    fn signals(&self) -> Vec<Vertex> {
        self.0.signals.clone()
    }

    #[getter]
    fn patterns(&self) -> Vec<Vec<Vertex>> {
        self.0.patterns.clone()
    }

    #[getter]
    fn canonical(&self) -> Vec<Vec<Vertex>> {
        self.0.canonical.clone()
    }

    fn without_edge(&self, u: Vertex, v: Vertex) -> PyResult<Self> {
        self.0.without_edge(u, v).map(PyGadget).map_err(err)
    }

    /// Checks the three gadget conditions; the rule defaults to the gadget's own.
    #[pyo3(signature = (rule = None, cap = DEFAULT_CAP))]
    fn verify<'py>(&self, py: Python<'py>, rule: Option<&str>, cap: usize) -> PyResult<Bound<'py, PyAny>> {
        let rule = rule.map(parse_rule).transpose()?.unwrap_or(self.0.rule);
        let report = py.detach(|| verify_pattern_gadget(&self.0, rule, cap)).map_err(err)?;
        to_py(py, &report)
    }
}

#[pyclass(name = "Reduction", module = "reconforge", frozen, skip_from_py_object)]
struct PyReduction(ReductionBundle);

#[pymethods]
impl PyReduction {
    /// Compiles the 4-recolouring instance `(source, f, g)` over `host`.
    #[new]
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (source, f, g, host, embedding, zero = None, cap = DEFAULT_CAP))]
    fn new(
        py: Python<'_>,
        source: &PyGraph,
        f: Vec<Vertex>,
        g: Vec<Vertex>,
        host: &PyGraph,
        embedding: &PyEmbedding,
        zero: Option<Vertex>,
        cap: usize,
    ) -> PyResult<Self> {
        py.detach(|| {
            let kit = HostKit::detect(&host.0, &embedding.0, zero, cap)?;
            let library = GadgetLibrary::new(kit, cap)?;
            compile(&source.0, &f, &g, library)
        })
        .map(PyReduction)
        .map_err(err)
    }

    #[getter]
    fn g_prime(&self) -> PyGraph {
        PyGraph(self.0.g_prime.clone())
    }

    #[getter]
    fn f_prime(&self) -> Vec<Vertex> {
        self.0.f_prime.clone()
    }

    #[getter]
    fn g_prime_colouring(&self) -> Vec<Vertex> {
        self.0.g_prime_colouring.clone()
    }

    #[getter]
    fn rule(&self) -> &'static str {
        match self.0.rule {
            MoveRule::Irreflexive => "irreflexive",
            MoveRule::Reflexive => "reflexive",
        }
    }

    #[getter]
    fn nbo_count(&self) -> usize {
        self.0.nbo_count()
    }

    #[getter]
    fn naz_count(&self) -> usize {
        self.0.naz_count()
    }

    fn registry<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.registry)
    }

    fn encode(&self, f: Vec<Vertex>) -> PyResult<Vec<Vertex>> {
        self.0.encode(&f).map_err(err)
    }

    fn project(&self, psi: Vec<Vertex>) -> PyResult<Vec<Vertex>> {
        self.0.project(&psi).map_err(err)
    }

    /// Lifts a 4-recolouring sequence to a validated sequence on `G'`.
    fn lift(&self, py: Python<'_>, witness: Vec<Vec<Vertex>>) -> PyResult<Vec<Vec<Vertex>>> {
        py.detach(|| self.0.lift_sequence(&Witness(witness)))
            .map(|w| w.0)
            .map_err(err)
    }

    #[pyo3(signature = (steps = 10_000, seed = 0, cap = DEFAULT_CAP))]
    fn walk<'py>(&self, py: Python<'py>, steps: usize, seed: u64, cap: usize) -> PyResult<Bound<'py, PyAny>> {
        let report = py.detach(|| self.0.random_walk_check(steps, seed, cap)).map_err(err)?;
        to_py(py, &report)
    }
}

/// A named graph and its embedding.
#[pyfunction]
#[pyo3(signature = (name, k = None, levels = 2))]
fn generate(name: &str, k: Option<usize>, levels: usize) -> PyResult<(PyGraph, PyEmbedding)> {
    let need = |min: usize| -> PyResult<usize> {
        match k {
            Some(k) if k >= min => Ok(k),
            _ => Err(ReconforgeError::new_err(format!("{name} needs k >= {min}"))),
        }
    };
    let (g, e) = match name {
        "cycle" => generators::cycle(need(3)?),
        "wheel" => generators::wheel(need(3)?),
        "k23" => generators::k23_quadrangulation(),
        "cube" => generators::cube(),
        "pseudo-double-wheel" => generators::pseudo_double_wheel(need(2)?).map_err(err)?,
        "mycielski" => generators::generalized_mycielski(need(3)?, levels).map_err(err)?,
        "projective-wheel" => generators::generalized_mycielski(need(3)?, 1).map_err(err)?,
        "grotzsch" => generators::grotzsch(),
        "reflexive-tetrahedron" => generators::reflexive_tetrahedron(),
        "reflexive-octahedron" => generators::reflexive_octahedron(),
        "reflexive-icosahedron" => generators::reflexive_icosahedron(),
        other => return Err(ReconforgeError::new_err(format!("unknown family {other:?}"))),
    };
    Ok((PyGraph(g), PyEmbedding(e)))
}

#[pyfunction]
fn complete(n: usize) -> PyGraph {
    PyGraph(generators::complete(n))
}

/// `kind` is `sphere-quad`, `pp-quad` or `reflexive-tri`.
#[pyfunction]
fn validate<'py>(py: Python<'py>, kind: &str, graph: &PyGraph, embedding: &PyEmbedding) -> PyResult<Bound<'py, PyAny>> {
    let report = match kind {
        "sphere-quad" => validate_sphere_quadrangulation(&graph.0, &embedding.0),
        "pp-quad" => validate_pp_quadrangulation(&graph.0, &embedding.0),
        "reflexive-tri" => validate_reflexive_triangulation(&graph.0, &embedding.0),
        other => return Err(ReconforgeError::new_err(format!("unknown kind {other:?}"))),
    };
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (g, h, cap = DEFAULT_CAP))]
fn enumerate_homs(py: Python<'_>, g: &PyGraph, h: &PyGraph, cap: usize) -> PyResult<Vec<Vec<Vertex>>> {
    py.detach(|| oracle::enumerate_homs(&g.0, &h.0, cap)).map_err(err)
}

/// Shortest reconfiguration sequence from `f` to `target`, as a report dict.
#[pyfunction]
#[pyo3(signature = (g, h, f, target, rule = "irreflexive", cap = DEFAULT_CAP))]
fn reachable<'py>(
    py: Python<'py>,
    g: &PyGraph,
    h: &PyGraph,
    f: Vec<Vertex>,
    target: Vec<Vertex>,
    rule: &str,
    cap: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let rule = parse_rule(rule)?;
    let result = py.detach(|| oracle::reachable(&g.0, &h.0, &f, &target, rule, cap)).map_err(err)?;
    to_py(py, &result)
}

#[pyfunction]
#[pyo3(signature = (g, h, f, rule = "irreflexive", cap = DEFAULT_CAP))]
fn component(py: Python<'_>, g: &PyGraph, h: &PyGraph, f: Vec<Vertex>, rule: &str, cap: usize) -> PyResult<Vec<Vec<Vertex>>> {
    let rule = parse_rule(rule)?;
    py.detach(|| oracle::component(&g.0, &h.0, &f, rule, cap)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (g, h, witness, rule = "irreflexive"))]
fn validate_witness<'py>(
    py: Python<'py>,
    g: &PyGraph,
    h: &PyGraph,
    witness: Vec<Vec<Vertex>>,
    rule: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let check = oracle::validate_witness(&g.0, &h.0, &Witness(witness), parse_rule(rule)?);
    to_py(py, &check)
}

/// `kind` is `not-both-one` or `not-all-zero`; the host kit is chosen from
/// the host's reflexivity.
#[pyfunction]
#[pyo3(signature = (kind, host, embedding, zero = None, cap = DEFAULT_CAP))]
fn compile_gadget(
    py: Python<'_>,
    kind: &str,
    host: &PyGraph,
    embedding: &PyEmbedding,
    zero: Option<Vertex>,
    cap: usize,
) -> PyResult<PyGadget> {
    let kit = py.detach(|| HostKit::detect(&host.0, &embedding.0, zero, cap)).map_err(err)?;
    let gadget = match kind {
        "not-both-one" => kit.not_both_one(),
        "not-all-zero" => kit.not_all_zero(),
        other => return Err(ReconforgeError::new_err(format!("unknown gadget kind {other:?}"))),
    };
    gadget.map(PyGadget).map_err(err)
}

#[pyfunction]
fn pp_lift<'py>(py: Python<'py>, h: &PyGraph, e: &PyEmbedding) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &transforms::pp_lift(&h.0, &e.0).map_err(err)?)
}

#[pyfunction]
fn wheel_retraction(py: Python<'_>, k: usize) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &transforms::wheel_retraction(k).map_err(err)?)
}

#[pyfunction]
fn bipartite_instance_to_cover(g: &PyGraph, f: Vec<Vertex>) -> PyResult<Vec<Vertex>> {
    transforms::bipartite_instance_to_cover(&g.0, &f).map_err(err)
}

#[pymodule]
#[pyo3(name = "reconforge")]
pub fn reconforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ReconforgeError", m.py().get_type::<ReconforgeError>())?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add("DEFAULT_CAP", DEFAULT_CAP)?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_class::<PyGadget>()?;
    m.add_class::<PyReduction>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(complete, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_homs, m)?)?;
    m.add_function(wrap_pyfunction!(reachable, m)?)?;
    m.add_function(wrap_pyfunction!(component, m)?)?;
    m.add_function(wrap_pyfunction!(validate_witness, m)?)?;
    m.add_function(wrap_pyfunction!(compile_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(pp_lift, m)?)?;
    m.add_function(wrap_pyfunction!(wheel_retraction, m)?)?;
    m.add_function(wrap_pyfunction!(bipartite_instance_to_cover, m)?)?;
    Ok(())
}
