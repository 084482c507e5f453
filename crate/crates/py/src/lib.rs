//! Python bindings for the vizadvisor recommender.
//!
//! Structured results (prompts, recommendations, reports) cross the
//! boundary as plain dicts and lists with the same camelCase keys the HTTP
//! API uses.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use vizadvisor_core::engine::{self, recommend_auto, Session as CoreSession};
use vizadvisor_core::extension::{classify_candidate, find_similar, insert_distinguishing_question, ExtensionSpec};
use vizadvisor_core::knowledge::{self, load_tree_or_seed};
use vizadvisor_core::profiler::{self, CsvOptions};
use vizadvisor_core::tree::{load_tree, DecisionTree};

create_exception!(vizadvisor, VizAdvisorError, PyException, "Base class for vizadvisor errors.");
create_exception!(vizadvisor, TreeError, VizAdvisorError, "A tree document could not be loaded or is invalid.");
create_exception!(vizadvisor, SessionError, VizAdvisorError, "An answer or navigation step was rejected.");
create_exception!(vizadvisor, DataError, VizAdvisorError, "A CSV file could not be read or profiled.");
create_exception!(vizadvisor, ExtensionError, VizAdvisorError, "A tree extension was refused.");

fn err<E: std::fmt::Display>(kind: fn(String) -> PyErr) -> impl Fn(E) -> PyErr {
    move |e| kind(e.to_string())
}

fn tree_err(msg: String) -> PyErr {
    TreeError::new_err(msg)
}

fn session_err(msg: String) -> PyErr {
    SessionError::new_err(msg)
}

fn data_err(msg: String) -> PyErr {
    DataError::new_err(msg)
}

fn extension_err(msg: String) -> PyErr {
    ExtensionError::new_err(msg)
}

/// Converts any serializable value to native Python objects via `json.loads`.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A validated decision tree.
#[pyclass(module = "vizadvisor", frozen)]
struct Tree {
    inner: Arc<DecisionTree>,
}

#[pymethods]
impl Tree {
    /// The bundled seed tree.
    #[staticmethod]
    fn seed() -> Self {
        Tree {
            inner: Arc::new(knowledge::seed_tree()),
        }
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let tree = load_tree_or_seed(Some(&path)).map_err(err(tree_err))?;
        Ok(Tree { inner: Arc::new(tree) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let tree = load_tree(text.as_bytes()).map_err(err(tree_err))?;
        Ok(Tree { inner: Arc::new(tree) })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn version(&self) -> &str {
        self.inner.version()
    }

    fn stats(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, self.inner.stats())
    }

    /// Visualizations with their educational content.
    fn catalog(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &knowledge::catalog(&self.inner))
    }

    fn start(&self) -> Session {
        Session {
            inner: engine::start_session(Arc::clone(&self.inner)),
        }
    }

    /// Replays a sequence of answer tokens and returns the session.
    fn replay(&self, answers: Vec<String>) -> PyResult<Session> {
        let inner = engine::replay(Arc::clone(&self.inner), &answers).map_err(err(session_err))?;
        Ok(Session { inner })
    }

    /// Profiles the chosen columns of a CSV file and walks the tree
    /// unattended. `task` is a task feature key such as `compare.proportions`.
    #[pyo3(signature = (path, columns, task=None, delimiter=","))]
    fn recommend_csv(
        &self,
        py: Python<'_>,
        path: PathBuf,
        columns: Vec<String>,
        task: Option<&str>,
        delimiter: &str,
    ) -> PyResult<Py<PyAny>> {
        let delimiter = match delimiter.as_bytes() {
            [b] => *b,
            _ => return Err(PyValueError::new_err("delimiter must be a single ASCII character")),
        };
        let bytes = std::fs::read(&path).map_err(|e| DataError::new_err(format!("{}: {e}", path.display())))?;
        let options = CsvOptions {
            delimiter,
            ..CsvOptions::default()
        };
        let dataset = profiler::ingest_csv(&bytes, &options).map_err(err(data_err))?;
        let selected: Vec<&str> = columns.iter().map(String::as_str).collect();
        let profile = profiler::profile(&dataset, &selected).map_err(err(data_err))?;
        let rec = recommend_auto(Arc::clone(&self.inner), &profile, task).map_err(err(session_err))?;
        to_py(py, &rec)
    }

    /// Ranks visualizations by how many of the given `feature -> answer`
    /// pairs their paths disagree with.
    fn find_similar(&self, py: Python<'_>, answers: BTreeMap<String, String>) -> PyResult<Py<PyAny>> {
        let candidate = classify_candidate(&self.inner, &answers).map_err(err(extension_err))?;
        to_py(py, &find_similar(&self.inner, &candidate))
    }

    /// Applies an extension document and returns the new tree with the diff.
    fn extend(&self, py: Python<'_>, spec_json: &str) -> PyResult<(Tree, Py<PyAny>)> {
        let spec: ExtensionSpec =
            serde_json::from_str(spec_json).map_err(|e| ExtensionError::new_err(format!("malformed extension: {e}")))?;
        let (tree, diff) = insert_distinguishing_question(&self.inner, &spec).map_err(err(extension_err))?;
        Ok((Tree { inner: Arc::new(tree) }, to_py(py, &diff)?))
    }

    fn __repr__(&self) -> String {
        let s = self.inner.stats();
        format!("<Tree version={} questions={} visualizations={}>", self.inner.version(), s.internal_nodes, s.leaves)
    }
}

/// One walk through a tree.
#[pyclass(module = "vizadvisor")]
struct Session {
    inner: CoreSession,
}

#[pymethods]
impl Session {
    #[new]
    fn new(tree: &Tree) -> Self {
        tree.start()
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id().to_string()
    }

    #[getter]
    fn tree_version(&self) -> &str {
        self.inner.tree_version()
    }

    #[getter]
    fn finished(&self) -> bool {
        self.inner.is_finished()
    }

    fn prompt(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.prompt())
    }

    fn answer(&mut self, py: Python<'_>, value: &str) -> PyResult<Py<PyAny>> {
        let prompt = self.inner.answer(value).map_err(err(session_err))?;
        to_py(py, &prompt)
    }

    fn dont_know(&mut self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let prompt = self.inner.dont_know().map_err(err(session_err))?;
        to_py(py, &prompt)
    }

    fn back(&mut self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let prompt = self.inner.go_back().map_err(err(session_err))?;
        to_py(py, &prompt)
    }

    fn trace(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.history())
    }

    /// The recommendation once finished, otherwise None.
    fn recommendation(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        self.inner.recommendation().map(|r| to_py(py, &r)).transpose()
    }
}

#[pyfunction]
fn glossary() -> BTreeMap<String, String> {
    knowledge::glossary()
}

/// Validates a tree document without building it; returns the report.
#[pyfunction]
fn validate(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let doc = vizadvisor_core::tree::parse_document(text.as_bytes()).map_err(err(tree_err))?;
    to_py(py, &vizadvisor_core::tree::validate(&doc))
}

#[pymodule]
fn vizadvisor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Tree>()?;
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(glossary, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("VizAdvisorError", py.get_type::<VizAdvisorError>())?;
    m.add("TreeError", py.get_type::<TreeError>())?;
    m.add("SessionError", py.get_type::<SessionError>())?;
    m.add("DataError", py.get_type::<DataError>())?;
    m.add("ExtensionError", py.get_type::<ExtensionError>())?;
    m.add("DONT_KNOW", vizadvisor_core::tree::DONT_KNOW)?;
    Ok(())
}
