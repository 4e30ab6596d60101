//! Python bindings for `snumbers`.
//!
//! Exponent sets are passed either as `ExponentSet` objects or as their
//! textual form (`"finite:1,2"`, `"squarefree"`, ...). Library errors are
//! raised as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use snumbers as core;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "ExponentSet", module = "pysnumbers", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyExponentSet(core::ExponentSet);

#[pymethods]
impl PyExponentSet {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[staticmethod]
    fn finite(elements: Vec<u32>) -> PyResult<Self> {
        core::ExponentSet::finite(elements).map(Self).map_err(err)
    }

    #[staticmethod]
    fn cofinite(excluded: Vec<u32>) -> PyResult<Self> {
        core::ExponentSet::cofinite(excluded).map(Self).map_err(err)
    }

    #[staticmethod]
    fn up_to(k: u32) -> PyResult<Self> {
        core::ExponentSet::up_to(k).map(Self).map_err(err)
    }

    #[staticmethod]
    fn all() -> Self {
        Self(core::ExponentSet::all())
    }

    #[staticmethod]
    fn geq(k: u32) -> PyResult<Self> {
        core::ExponentSet::geq(k).map(Self).map_err(err)
    }

    #[staticmethod]
    fn squarefree() -> Self {
        Self(core::ExponentSet::squarefree())
    }

    #[getter]
    fn kind(&self) -> String {
        format!("{:?}", self.0.kind())
    }

    fn contains(&self, n: u32) -> bool {
        self.0.contains(n)
    }

    fn u(&self, n: u32) -> i32 {
        self.0.u(n)
    }

    fn contains_one(&self) -> bool {
        self.0.contains_one()
    }

    fn is_subset_of(&self, other: SetArg) -> bool {
        self.0.is_subset_of(&other.0)
    }

    fn __contains__(&self, n: u32) -> bool {
        self.0.contains(n)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ExponentSet('{}')", self.0)
    }
}

/// Accepts an `ExponentSet` or its textual form.
pub struct SetArg(core::ExponentSet);

impl<'a, 'py> FromPyObject<'a, 'py> for SetArg {
    type Error = PyErr;

    fn extract(ob: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
        if let Ok(s) = ob.cast::<PyExponentSet>() {
            return Ok(SetArg(s.get().0.clone()));
        }
        let text: String = ob.extract()?;
        text.parse().map(SetArg).map_err(err)
    }
}

#[pyclass(name = "DensityResult", module = "pysnumbers", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyDensityResult(core::DensityResult);

#[pymethods]
impl PyDensityResult {
    #[getter]
    fn value(&self) -> f64 {
        self.0.value
    }

    #[getter]
    fn error_bound(&self) -> f64 {
        self.0.error_bound
    }

    #[getter]
    fn prime_limit(&self) -> u64 {
        self.0.prime_limit
    }

    #[getter]
    fn exponent_depth(&self) -> u32 {
        self.0.exponent_depth
    }

    #[getter]
    fn sum_limit(&self) -> Option<u64> {
        self.0.sum_limit
    }

    #[getter]
    fn route(&self) -> &'static str {
        self.0.route.as_str()
    }

    fn lower(&self) -> f64 {
        self.0.lower()
    }

    fn upper(&self) -> f64 {
        self.0.upper()
    }

    fn intersects(&self, other: &PyDensityResult) -> bool {
        self.0.intersects(&other.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityResult(value={}, error_bound={:e}, route='{}')",
            self.0.value, self.0.error_bound, self.0.route
        )
    }
}

#[pyclass(name = "FactorSieve", module = "pysnumbers", frozen)]
pub struct PyFactorSieve(core::FactorSieve);

#[pymethods]
impl PyFactorSieve {
    #[new]
    #[pyo3(signature = (limit, cap = core::DEFAULT_SIEVE_CAP))]
    fn new(py: Python<'_>, limit: u64, cap: u64) -> PyResult<Self> {
        py.detach(|| core::FactorSieve::with_cap(limit, cap))
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.0.limit()
    }

    fn primes(&self) -> Vec<u32> {
        self.0.primes().to_vec()
    }

    fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        self.0.smallest_prime_factor(n)
    }

    /// `[(prime, exponent), ...]` in increasing prime order.
    fn factorize(&self, n: u64) -> PyResult<Vec<(u64, u32)>> {
        self.0.factorize(n).map(|f| f.parts).map_err(err)
    }

    fn radical(&self, n: u64) -> PyResult<u64> {
        self.0.factorize(n).map(|f| f.radical()).map_err(err)
    }

    fn is_member(&self, n: u64, set: SetArg) -> PyResult<bool> {
        self.0.is_member(n, &set.0).map_err(err)
    }

    fn count_members(&self, py: Python<'_>, x: u64, set: SetArg) -> PyResult<u64> {
        py.detach(|| self.0.count_members(x, &set.0)).map_err(err)
    }

    fn count_members_at(&self, py: Python<'_>, xs: Vec<u64>, set: SetArg) -> PyResult<Vec<u64>> {
        py.detach(|| self.0.count_members_at(&xs, &set.0)).map_err(err)
    }

    fn count_squarefree_coprime(&self, x: u64, r: u64) -> PyResult<u64> {
        self.0.count_squarefree_coprime(x, r).map_err(err)
    }

    fn count_via_decomposition(&self, py: Python<'_>, x: u64, set: SetArg) -> PyResult<u64> {
        py.detach(|| core::count_via_decomposition(&self.0, x, &set.0)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("FactorSieve(limit={})", self.0.limit())
    }
}

fn wrap(r: core::Result<core::DensityResult>) -> PyResult<PyDensityResult> {
    r.map(PyDensityResult).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (set, prime_limit, eps = core::density::DEFAULT_EPS))]
fn density_eq4(py: Python<'_>, set: SetArg, prime_limit: u64, eps: f64) -> PyResult<PyDensityResult> {
    wrap(py.detach(|| core::density_eq4(&set.0, prime_limit, eps)))
}

#[pyfunction]
#[pyo3(signature = (set, prime_limit, eps = core::density::DEFAULT_EPS))]
fn density_eq11(py: Python<'_>, set: SetArg, prime_limit: u64, eps: f64) -> PyResult<PyDensityResult> {
    wrap(py.detach(|| core::density_eq11(&set.0, prime_limit, eps)))
}

#[pyfunction]
fn density_eq8_sum_form(py: Python<'_>, set: SetArg, a_limit: u64) -> PyResult<PyDensityResult> {
    wrap(py.detach(|| core::density_eq8_sum_form(&set.0, a_limit)))
}

#[pyfunction]
fn density_zero_branch(set: SetArg) -> PyResult<PyDensityResult> {
    wrap(core::density_zero_branch(&set.0))
}

/// Density with error bound at most `tolerance`; zero branch when 1 is not in S.
#[pyfunction]
fn density(py: Python<'_>, set: SetArg, tolerance: f64) -> PyResult<PyDensityResult> {
    wrap(py.detach(|| core::density_to_tolerance(&set.0, tolerance)))
}

/// `rule` is `"prefix"` or `"list:<set>;<set>...:default:<set>"`.
#[pyfunction]
fn density_per_prime(rule: &str, term_limit: u64) -> PyResult<PyDensityResult> {
    let family: core::PerPrimeFamily = rule.parse().map_err(err)?;
    wrap(core::density_per_prime(&family, term_limit))
}

#[pyfunction]
fn family_set(rule: &str, n: u64) -> PyResult<PyExponentSet> {
    let family: core::PerPrimeFamily = rule.parse().map_err(err)?;
    Ok(PyExponentSet(family.set_for(n)))
}

/// `(upper_no2, lower_with2, certified)`.
#[pyfunction]
fn gap_interval(py: Python<'_>, prime_limit: u64) -> PyResult<(PyDensityResult, PyDensityResult, bool)> {
    let g = py.detach(|| core::gap_interval(prime_limit)).map_err(err)?;
    Ok((PyDensityResult(g.upper_no2), PyDensityResult(g.lower_with2), g.certified))
}

/// `(value, tail_bound)`.
#[pyfunction]
fn radical_class_sum(set: SetArg, l: u64, depth: u32) -> PyResult<(f64, f64)> {
    let b = core::radical_class_sum(&set.0, l, depth).map_err(err)?;
    Ok((b.value, b.tail_bound))
}

#[pyfunction]
fn enumerate_powerful(py: Python<'_>, limit: u64) -> Vec<u64> {
    py.detach(|| core::enumerate_powerful(limit))
}

#[pyfunction]
fn powerful_main_term(x: f64) -> f64 {
    core::powerful_main_term(x)
}

#[pyfunction]
fn br_main_term(x: f64, r: u64) -> PyResult<f64> {
    core::br_main_term(x, r).map_err(err)
}

#[pyfunction]
fn envelope(x: f64) -> f64 {
    core::envelope(x)
}

#[pyfunction]
fn verify_density<'py>(
    py: Python<'py>,
    sieve: &PyFactorSieve,
    set: SetArg,
    xs: Vec<u64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let reports = py.detach(|| core::verify_density(&sieve.0, &set.0, &xs)).map_err(err)?;
    reports
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("x", r.x)?;
            d.set_item("exact_count", r.exact_count)?;
            d.set_item("density", r.density.value)?;
            d.set_item("density_error_bound", r.density.error_bound)?;
            d.set_item("main_term", r.main_term)?;
            d.set_item("residual", r.residual)?;
            d.set_item("envelope", r.envelope)?;
            d.set_item("normalized_residual", r.normalized_residual)?;
            Ok(d)
        })
        .collect()
}

/// `(rows, pass)` with one dict per `(r, x)` cell.
#[pyfunction]
fn audit_lemma1<'py>(
    py: Python<'py>,
    sieve: &PyFactorSieve,
    rs: Vec<u64>,
    xs: Vec<u64>,
) -> PyResult<(Vec<Bound<'py, PyDict>>, bool)> {
    let audit = py.detach(|| core::audit_lemma1(&sieve.0, &rs, &xs)).map_err(err)?;
    let rows = audit
        .rows
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("r", c.r)?;
            d.set_item("x", c.x)?;
            d.set_item("count", c.count)?;
            d.set_item("main_term", c.main_term)?;
            d.set_item("residual", c.residual)?;
            d.set_item("bound", c.bound)?;
            d.set_item("ok", c.ok)?;
            Ok(d)
        })
        .collect::<PyResult<_>>()?;
    Ok((rows, audit.pass))
}

#[pyfunction]
fn verify_powerful_asymptotic<'py>(py: Python<'py>, xs: Vec<u64>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = py.detach(|| core::verify_powerful_asymptotic(&xs)).map_err(err)?;
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("x", r.x)?;
            d.set_item("count", r.count)?;
            d.set_item("main_term", r.main_term)?;
            d.set_item("residual", r.residual)?;
            d.set_item("ratio", r.ratio)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn lemma_constants(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let c = core::lemma_constants();
    let d = PyDict::new(py);
    d.set_item("k", c.k)?;
    d.set_item("c", c.c)?;
    d.set_item("n", c.n)?;
    d.set_item("k1", c.k1)?;
    Ok(d)
}

#[pyfunction]
fn constants_fingerprint() -> String {
    core::constants_fingerprint()
}

#[pymodule]
fn pysnumbers(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExponentSet>()?;
    m.add_class::<PyDensityResult>()?;
    m.add_class::<PyFactorSieve>()?;
    m.add_function(wrap_pyfunction!(density_eq4, m)?)?;
    m.add_function(wrap_pyfunction!(density_eq11, m)?)?;
    m.add_function(wrap_pyfunction!(density_eq8_sum_form, m)?)?;
    m.add_function(wrap_pyfunction!(density_zero_branch, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(density_per_prime, m)?)?;
    m.add_function(wrap_pyfunction!(family_set, m)?)?;
    m.add_function(wrap_pyfunction!(gap_interval, m)?)?;
    m.add_function(wrap_pyfunction!(radical_class_sum, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_powerful, m)?)?;
    m.add_function(wrap_pyfunction!(powerful_main_term, m)?)?;
    m.add_function(wrap_pyfunction!(br_main_term, m)?)?;
    m.add_function(wrap_pyfunction!(envelope, m)?)?;
    m.add_function(wrap_pyfunction!(verify_density, m)?)?;
    m.add_function(wrap_pyfunction!(audit_lemma1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_powerful_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_constants, m)?)?;
    m.add_function(wrap_pyfunction!(constants_fingerprint, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
