//! Python bindings, importable as `vlgap`.
//!
//! Texts may be passed as `str` or `bytes`; positions are 1-based end
//! positions, as in the Rust API.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use vlg_core::reporter;
use vlg_core::{oracle, GapBounds, ImplicitGapGraph, VlgPattern};

fn core_err(e: vlg_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn text_bytes(text: &Bound<'_, PyAny>) -> PyResult<Vec<u8>> {
    if let Ok(b) = text.cast::<PyBytes>() {
        return Ok(b.as_bytes().to_vec());
    }
    Ok(text.extract::<String>()?.into_bytes())
}

/// A parsed pattern such as `A.{6,7}CC.{2,6}GT`.
#[pyclass(name = "Pattern", module = "vlgap", frozen, from_py_object)]
#[derive(Clone)]
struct PyPattern {
    inner: VlgPattern,
}

#[derive(FromPyObject)]
enum PatternArg {
    Parsed(PyPattern),
    Source(String),
}

impl PatternArg {
    fn into_pattern(self) -> PyResult<VlgPattern> {
        match self {
            PatternArg::Parsed(p) => Ok(p.inner),
            PatternArg::Source(s) => VlgPattern::parse(&s).map_err(|e| PyValueError::new_err(e.to_string())),
        }
    }
}

#[pymethods]
impl PyPattern {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        VlgPattern::parse(expr)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Builds a pattern from subpatterns and `(lower, upper)` gaps;
    /// `upper=None` leaves a gap unbounded.
    #[staticmethod]
    fn from_parts(subpatterns: Vec<Vec<u8>>, gaps: Vec<(usize, Option<usize>)>) -> PyResult<Self> {
        let gaps = gaps.into_iter().map(|(lo, hi)| GapBounds { lower: lo, upper: hi }).collect();
        VlgPattern::new(subpatterns, gaps)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn subpatterns<'py>(&self, py: Python<'py>) -> Vec<Bound<'py, PyBytes>> {
        self.inner.subpatterns().iter().map(|s| PyBytes::new(py, s)).collect()
    }

    #[getter]
    fn gaps(&self) -> Vec<(usize, Option<usize>)> {
        self.inner.gaps().iter().map(|g| (g.lower, g.upper)).collect()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn is_bounded(&self) -> bool {
        self.inner.is_bounded()
    }

    /// `m + B`, or `None` with an unbounded gap.
    #[getter]
    fn max_span(&self) -> Option<usize> {
        self.inner.max_span()
    }

    /// `{"m", "k", "A", "B"}`; `B` is `None` with an unbounded gap.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let st = self.inner.stats();
        let d = PyDict::new(py);
        d.set_item("m", st.m)?;
        d.set_item("k", st.k)?;
        d.set_item("A", st.a)?;
        d.set_item("B", st.b)?;
        Ok(d)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Implicit gap graph: nodes are `(layer, endpos)` with 1-based layers.
#[pyclass(name = "GapGraph", module = "vlgap", frozen)]
struct PyGapGraph {
    inner: ImplicitGapGraph,
}

#[pymethods]
impl PyGapGraph {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    /// End positions of the nodes of `layer` (1-based), ascending.
    fn nodes(&self, layer: usize) -> PyResult<Vec<usize>> {
        if layer == 0 || layer > self.inner.k() {
            return Err(PyValueError::new_err(format!("layer must be in 1..={}", self.inner.k())));
        }
        Ok(self.inner.nodes(layer - 1).iter().map(|n| n.endpos).collect())
    }

    /// `(layer, endpos, pred_layer, pred_endpos)` tuples.
    fn edges(&self) -> Vec<(usize, usize, usize, usize)> {
        self.inner
            .edges()
            .map(|e| (e.layer + 1, e.endpos, e.layer, e.pred_endpos))
            .collect()
    }

    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn count_combinations(&self) -> u128 {
        reporter::count_combinations(&self.inner)
    }

    fn combinations(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        reporter::expand_combinations(&self.inner, |c| out.push(c.to_vec()));
        out
    }

    /// The `N ...` / `E ...` text dump.
    fn to_text(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner
            .write_text(&mut buf, "")
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(String::from_utf8(buf).expect("dump is ASCII"))
    }
}

/// End positions of all matches of `pattern` in `text`.
#[pyfunction]
fn find_endpoints(py: Python<'_>, pattern: PatternArg, text: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
    let p = pattern.into_pattern()?;
    let t = text_bytes(text)?;
    Ok(py.detach(|| vlg_core::find_endpoints(&p, &t)))
}

/// Every match combination as a tuple of end positions.
///
/// `engine` is `"onthefly"` (ordered by last end position) or `"chunked"`.
#[pyfunction]
#[pyo3(signature = (pattern, text, engine = "onthefly", chunk_len = None))]
fn report_combinations(
    py: Python<'_>,
    pattern: PatternArg,
    text: &Bound<'_, PyAny>,
    engine: &str,
    chunk_len: Option<usize>,
) -> PyResult<Vec<Vec<usize>>> {
    let chunked = match engine {
        "onthefly" => false,
        "chunked" => true,
        _ => return Err(PyValueError::new_err(format!("unknown engine {engine:?}"))),
    };
    let p = pattern.into_pattern()?;
    let t = text_bytes(text)?;
    let mut out = Vec::new();
    py.detach(|| {
        let sink = |c: &[usize]| out.push(c.to_vec());
        if chunked {
            vlg_core::report_chunked(&p, &t, chunk_len, sink).map(|_| ())
        } else {
            vlg_core::report_on_the_fly(&p, &t, sink).map(|_| ())
        }
    })
    .map_err(core_err)?;
    Ok(out)
}

#[pyfunction]
fn build_graph(py: Python<'_>, pattern: PatternArg, text: &Bound<'_, PyAny>) -> PyResult<PyGapGraph> {
    let p = pattern.into_pattern()?;
    let t = text_bytes(text)?;
    let inner = py
        .detach(|| vlg_core::build_implicit_gap_graph(&p, &t))
        .map_err(core_err)?;
    Ok(PyGapGraph { inner })
}

/// Number of match combinations, without enumerating them.
#[pyfunction]
fn count_combinations(py: Python<'_>, pattern: PatternArg, text: &Bound<'_, PyAny>) -> PyResult<u128> {
    Ok(build_graph(py, pattern, text)?.count_combinations())
}

/// Matcher statistics: occurrences per subpattern, α, match count and peak
/// range-list sizes.
#[pyfunction]
fn match_stats<'py>(py: Python<'py>, pattern: PatternArg, text: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let p = pattern.into_pattern()?;
    let t = text_bytes(text)?;
    let s = py.detach(|| vlg_core::Matcher::new(p).run(&t, &mut vlg_core::matcher::NoProbe, |_| {}));
    let d = PyDict::new(py);
    d.set_item("n", t.len())?;
    d.set_item("alpha", s.alpha())?;
    d.set_item("layer_occurrences", s.layer_occurrences.clone())?;
    d.set_item("matches", s.counters.reported)?;
    d.set_item("peak_list_sizes", s.peak_list_sizes.clone())?;
    Ok(d)
}

/// Brute-force end positions (small inputs only).
#[pyfunction]
fn oracle_endpoints(pattern: PatternArg, text: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
    let p = pattern.into_pattern()?;
    oracle::brute_force_endpoints(&p, &text_bytes(text)?).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Brute-force combinations, sorted (small inputs only).
#[pyfunction]
fn oracle_combinations(pattern: PatternArg, text: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<usize>>> {
    let p = pattern.into_pattern()?;
    if !p.is_bounded() {
        return Err(core_err(vlg_core::Error::UnboundedGap));
    }
    oracle::brute_force_combinations(&p, &text_bytes(text)?)
        .map(|s| s.into_iter().collect())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn vlgap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPattern>()?;
    m.add_class::<PyGapGraph>()?;
    m.add_function(wrap_pyfunction!(find_endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(report_combinations, m)?)?;
    m.add_function(wrap_pyfunction!(build_graph, m)?)?;
    m.add_function(wrap_pyfunction!(count_combinations, m)?)?;
    m.add_function(wrap_pyfunction!(match_stats, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_combinations, m)?)?;
    Ok(())
}
