//! Python bindings. Structured results (reports, ledgers, summaries) cross
//! the boundary as plain dicts and lists; integer vectors as Python ints.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use plumbcalc::cohomology::ne_summary;
use plumbcalc::report::{self, ReportOptions};
use plumbcalc::{ConfigFile, Cycle, DivisorSolution, PeelOrder, PlumbingConfig};

fn err(e: plumbcalc::Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// Serializes through JSON so every nested struct arrives as dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn order(s: &str) -> PyResult<PeelOrder> {
    s.parse().map_err(PyValueError::new_err)
}

/// A disjoint union of chains of rational curves, each with self-intersections
/// `-b` and ample degrees `a`.
#[pyclass(name = "Config", module = "plumbcalc", frozen)]
struct PyConfig {
    inner: PlumbingConfig,
    sweep: Option<(u64, u64)>,
}

impl PyConfig {
    fn cycle(&self, mult: Vec<Vec<u64>>) -> PyResult<Cycle> {
        Cycle::from_multiplicities(&self.inner, mult).map_err(err)
    }

    fn solution(&self) -> PyResult<DivisorSolution> {
        plumbcalc::primitive_positive_solution(&self.inner).map_err(err)
    }
}

#[pymethods]
impl PyConfig {
    /// `chains` is a list of `(b, a)` pairs of equal-length integer lists.
    #[new]
    fn new(chains: Vec<(Vec<u64>, Vec<u64>)>) -> PyResult<Self> {
        Ok(PyConfig {
            inner: PlumbingConfig::from_lists(chains).map_err(err)?,
            sweep: None,
        })
    }

    /// Parses the `chain b=[..] a=[..]` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let ConfigFile { config, sweep } =
            plumbcalc::parse_config(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyConfig { inner: config, sweep })
    }

    #[getter]
    fn chains(&self) -> Vec<(Vec<u64>, Vec<u64>)> {
        self.inner
            .chains()
            .iter()
            .map(|c| (c.b().to_vec(), c.a().to_vec()))
            .collect()
    }

    /// The file's `sweep n=[lo,hi]` block, if any.
    #[getter]
    fn sweep(&self) -> Option<(u64, u64)> {
        self.sweep
    }

    fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        plumbcalc::intersection_matrix(&self.inner).rows().to_vec()
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let v = plumbcalc::validate_config(&self.inner).map_err(err)?;
        to_py(py, &report::validation_section(&v))
    }

    /// Primitive positive kernel vector as `(x0, x)`, `x` grouped by chain.
    fn solve(&self) -> PyResult<(BigInt, Vec<Vec<BigInt>>)> {
        let s = self.solution()?;
        Ok((s.x0, s.x))
    }

    #[pyo3(signature = (target, twist, order="canonical"))]
    fn peel_summary(
        &self,
        py: Python<'_>,
        target: Vec<Vec<u64>>,
        twist: Vec<Vec<u64>>,
        order: &str,
    ) -> PyResult<Py<PyAny>> {
        let s = plumbcalc::peel_summary(
            &self.inner,
            &self.cycle(target)?,
            &self.cycle(twist)?,
            self::order(order)?,
        )
        .map_err(err)?;
        to_py(py, &s)
    }

    #[pyo3(signature = (target, twist, order="canonical"))]
    fn peel_ledger(
        &self,
        py: Python<'_>,
        target: Vec<Vec<u64>>,
        twist: Vec<Vec<u64>>,
        order: &str,
    ) -> PyResult<Py<PyAny>> {
        let l = plumbcalc::peel_ledger(
            &self.inner,
            &self.cycle(target)?,
            &self.cycle(twist)?,
            self::order(order)?,
        )
        .map_err(err)?;
        to_py(py, &l)
    }

    /// Totals for `nE` peeled under the twist `nE`.
    #[pyo3(signature = (n, order="canonical"))]
    fn ne_summary(&self, py: Python<'_>, n: u64, order: &str) -> PyResult<Py<PyAny>> {
        let s = ne_summary(&self.inner, &self.solution()?, n, self::order(order)?).map_err(err)?;
        to_py(py, &s)
    }

    #[pyo3(signature = (n, order="canonical"))]
    fn component_vanishing(&self, n: u64, order: &str) -> PyResult<Vec<Vec<bool>>> {
        plumbcalc::check_component_h0_vanishing(&self.inner, &self.solution()?, n, self::order(order)?).map_err(err)
    }

    #[pyo3(signature = (n, order="canonical"))]
    fn e_vanishing(&self, n: u64, order: &str) -> PyResult<bool> {
        plumbcalc::check_h0_reduced_e_vanishing(&self.inner, &self.solution()?, n, self::order(order)?).map_err(err)
    }

    #[pyo3(signature = (n_lo, n_hi, order="canonical"))]
    fn growth(&self, py: Python<'_>, n_lo: u64, n_hi: u64, order: &str) -> PyResult<Py<PyAny>> {
        let g =
            plumbcalc::growth_analysis(&self.inner, &self.solution()?, n_lo, n_hi, self::order(order)?).map_err(err)?;
        to_py(py, &report::growth_section(&g))
    }

    fn discrepancy(&self, py: Python<'_>, n_lo: u64, n_hi: u64) -> PyResult<Py<PyAny>> {
        let rows = plumbcalc::discrepancy_report(&self.inner, &self.solution()?, n_lo, n_hi).map_err(err)?;
        to_py(py, &report::discrepancy_lines(&rows))
    }

    /// Full run report as JSON text, identical to `plumbcalc report --format json`
    /// given the same input text.
    #[pyo3(signature = (input_text, n, n_range, order="canonical"))]
    fn report_json(&self, input_text: &str, n: u64, n_range: (u64, u64), order: &str) -> PyResult<String> {
        let file = ConfigFile {
            config: self.inner.clone(),
            sweep: self.sweep,
        };
        let opts = ReportOptions {
            n,
            n_range,
            order: self::order(order)?,
        };
        Ok(report::to_json(
            &report::build_report(input_text, &file, opts).map_err(err)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!("Config({:?})", self.chains())
    }
}

/// `(h0, h1)` of `O(d)` on the projective line.
#[pyfunction]
fn p1_cohomology(d: i128) -> (u128, u128) {
    plumbcalc::p1_cohomology(d)
}

/// Hirzebruch-Jung fraction `n/q` of `b[0] - 1/(b[1] - ...)`.
#[pyfunction]
fn hirzebruch_jung(b: Vec<u64>) -> (BigInt, BigInt) {
    let hj = plumbcalc::hirzebruch_jung(&b);
    (hj.n, hj.q)
}

/// Closed-form kernel vector for one chain of length 1 or 2, `x0` first.
#[pyfunction]
fn closed_form_small_m(b: Vec<u64>, a: Vec<u64>) -> PyResult<Vec<BigInt>> {
    plumbcalc::closed_form_small_m(&b, &a).map_err(err)
}

#[pyfunction]
fn alpha_bound(n: u64, a1: u64, x0: u64, b1: u64) -> u128 {
    plumbcalc::alpha_bound(n, a1, x0, b1)
}

#[pymodule]
#[pyo3(name = "plumbcalc")]
fn plumbcalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyConfig>()?;
    m.add_function(wrap_pyfunction!(p1_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(hirzebruch_jung, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_small_m, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_bound, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    #[test]
    fn module_round_trip_in_embedded_interpreter() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "plumbcalc").unwrap();
            plumbcalc_py(&m).unwrap();
            let locals = PyDict::new(py);
            locals.set_item("plumbcalc", m).unwrap();
            py.run(
                c"c = plumbcalc.Config([([2, 2], [1, 1])])
assert c.solve() == (1, [[1, 1]]), c.solve()
s = c.peel_summary([[1, 1]], [[1, 1]], 'reverse')
assert s['h0']['lo'] - s['h1']['lo'] == s['euler']
assert plumbcalc.hirzebruch_jung([2, 2]) == (3, 2)
",
                None,
                Some(&locals),
            )
            .unwrap();
        });
    }
}
