//! Python bindings: the tower construction, certified metrics, heights,
//! Mahler measure, and primality verdicts, mirroring the CLI surface.
//!
//! Big integers cross the boundary as Python ints (decimal-string bridge);
//! every real quantity arrives as an `Enclosure` with outward-rounded
//! decimal endpoints.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use heighttower::bigreal::PrecisionPolicy as CorePolicy;
use heighttower::certify as core_certify;
use heighttower::error::Error as CoreError;
use heighttower::heights as core_heights;
use heighttower::poly::IntPolynomial;
use heighttower::primes as core_primes;
use heighttower::report;
use heighttower::tower as core_tower;
use heighttower::{
    ConstructionParams as CoreParams, Enclosure as CoreEnclosure, IntervalRule,
    PrimalityMethod, PrimalityStatus, PrimalityVerdict as CoreVerdict,
    TowerLevel as CoreLevel,
};

use std::collections::BTreeSet;
use std::str::FromStr;

fn to_py_err(e: CoreError) -> PyErr {
    match e {
        CoreError::Domain(_) | CoreError::InvalidParams(_) | CoreError::Parse(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn big_from_py(value: &Bound<'_, PyAny>) -> PyResult<rug::Integer> {
    if !value.is_instance_of::<pyo3::types::PyInt>() {
        return Err(PyValueError::new_err("expected an int"));
    }
    let s: String = value.str()?.to_string();
    rug::Integer::from_str(&s).map_err(|_| PyValueError::new_err("bad integer"))
}

fn big_to_py(py: Python<'_>, n: &rug::Integer) -> PyResult<PyObject> {
    let builtins = py.import_bound("builtins")?;
    let obj = builtins.getattr("int")?.call1((n.to_string(),))?;
    Ok(obj.unbind())
}

fn parse_poly(text: &str) -> PyResult<IntPolynomial> {
    IntPolynomial::parse(text).map_err(to_py_err)
}

/// Certified real interval; the true value lies inside [lo, hi].
#[pyclass(name = "Enclosure")]
#[derive(Clone)]
struct PyEnclosure {
    inner: CoreEnclosure,
}

#[pymethods]
impl PyEnclosure {
    /// Lower endpoint, decimal string rounded toward −∞.
    #[getter]
    fn lo(&self) -> String {
        self.inner.decimal_endpoints(30).0
    }

    /// Upper endpoint, decimal string rounded toward +∞.
    #[getter]
    fn hi(&self) -> String {
        self.inner.decimal_endpoints(30).1
    }

    #[getter]
    fn precision_bits(&self) -> u32 {
        self.inner.precision_bits()
    }

    /// Lower endpoint as a float (rounded toward −∞, still a lower bound).
    #[getter]
    fn lo_float(&self) -> f64 {
        use rug::float::Round;
        self.inner.lo().to_f64_round(Round::Down)
    }

    #[getter]
    fn hi_float(&self) -> f64 {
        use rug::float::Round;
        self.inner.hi().to_f64_round(Round::Up)
    }

    #[getter]
    fn width(&self) -> f64 {
        self.inner.width_f64()
    }

    fn contains(&self, value: f64) -> bool {
        self.inner.contains(&value)
    }

    fn overlaps(&self, other: &PyEnclosure) -> bool {
        self.inner.overlaps(&other.inner)
    }

    fn midpoint(&self) -> f64 {
        self.inner.midpoint().to_f64()
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// Primality verdict with the method that produced it.
#[pyclass(name = "PrimalityVerdict")]
#[derive(Clone)]
struct PyVerdict {
    inner: CoreVerdict,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn status(&self) -> &'static str {
        match self.inner.status {
            PrimalityStatus::Composite => "composite",
            PrimalityStatus::ProvablePrime => "provable_prime",
            PrimalityStatus::ProbablePrime => "probable_prime",
        }
    }

    #[getter]
    fn method(&self) -> &'static str {
        match self.inner.method {
            PrimalityMethod::TrialDivision => "trial_division",
            PrimalityMethod::DeterministicMr => "deterministic_mr",
            PrimalityMethod::Bpsw => "bpsw",
        }
    }

    #[getter]
    fn rounds(&self) -> u32 {
        self.inner.rounds
    }

    #[getter]
    fn is_prime(&self) -> bool {
        self.inner.is_prime()
    }

    fn __repr__(&self) -> String {
        format!(
            "PrimalityVerdict(status={}, method={}, rounds={})",
            self.status(),
            self.method(),
            self.rounds()
        )
    }
}

/// Free parameters of a construction run.
#[pyclass(name = "ConstructionParams")]
#[derive(Clone)]
struct PyParams {
    inner: CoreParams,
}

#[pymethods]
impl PyParams {
    /// General variant: p in [e^{d^{1-gamma+epsilon/2}}, 2e^{...}].
    #[staticmethod]
    #[pyo3(signature = (gamma, epsilon, horizon, target_width=None))]
    fn general(gamma: f64, epsilon: f64, horizon: u32, target_width: Option<f64>) -> PyResult<Self> {
        let mut inner = CoreParams::general(gamma, epsilon, horizon);
        if let Some(t) = target_width {
            inner.precision.target_width = t;
        }
        inner.validate().map_err(to_py_err)?;
        Ok(PyParams { inner })
    }

    /// Delta variant (gamma = 1): p in [d^delta, 2 d^delta]. `epsilon`
    /// overrides the witness-metric epsilon (default 1).
    #[staticmethod]
    #[pyo3(signature = (delta, horizon, epsilon=None, target_width=None))]
    fn delta(delta: f64, horizon: u32, epsilon: Option<f64>, target_width: Option<f64>) -> PyResult<Self> {
        let mut inner = CoreParams::delta(delta, horizon);
        inner.metric_epsilon = epsilon;
        if let Some(t) = target_width {
            inner.precision.target_width = t;
        }
        inner.validate().map_err(to_py_err)?;
        Ok(PyParams { inner })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn horizon(&self) -> u32 {
        self.inner.horizon
    }

    #[getter]
    fn variant(&self) -> String {
        match self.inner.rule {
            IntervalRule::General { epsilon } => format!("general(epsilon={epsilon})"),
            IntervalRule::Delta { delta } => format!("delta(delta={delta})"),
        }
    }

    #[getter]
    fn metric_epsilon(&self) -> f64 {
        self.inner.effective_epsilon()
    }

    fn __repr__(&self) -> String {
        format!(
            "ConstructionParams(gamma={}, {}, horizon={})",
            self.inner.gamma,
            self.variant(),
            self.inner.horizon
        )
    }
}

/// One tower level: the primes, their verdicts, and certified logs.
#[pyclass(name = "TowerLevel")]
#[derive(Clone)]
struct PyLevel {
    inner: CoreLevel,
}

#[pymethods]
impl PyLevel {
    #[getter]
    fn index(&self) -> u32 {
        self.inner.index
    }

    #[getter]
    fn d(&self, py: Python<'_>) -> PyResult<PyObject> {
        big_to_py(py, &self.inner.d)
    }

    #[getter]
    fn p(&self, py: Python<'_>) -> PyResult<PyObject> {
        big_to_py(py, &self.inner.p)
    }

    #[getter]
    fn abs_degree(&self, py: Python<'_>) -> PyResult<PyObject> {
        big_to_py(py, &self.inner.abs_degree)
    }

    #[getter]
    fn d_verdict(&self) -> PyVerdict {
        PyVerdict {
            inner: self.inner.d_verdict,
        }
    }

    #[getter]
    fn p_verdict(&self) -> PyVerdict {
        PyVerdict {
            inner: self.inner.p_verdict,
        }
    }

    #[getter]
    fn log_p(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.log_p.clone(),
        }
    }

    #[getter]
    fn log_d(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.log_d.clone(),
        }
    }

    #[getter]
    fn generator_height(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.generator_height.clone(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "TowerLevel(index={}, d={}, p={})",
            self.inner.index, self.inner.d, self.inner.p
        )
    }
}

/// Certified per-level metrics.
#[pyclass(name = "LevelMetrics")]
#[derive(Clone)]
struct PyMetrics {
    inner: core_certify::LevelMetrics,
}

#[pymethods]
impl PyMetrics {
    #[getter]
    fn index(&self) -> u32 {
        self.inner.index
    }

    #[getter]
    fn a(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.a.clone(),
        }
    }

    #[getter]
    fn b(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.b.clone(),
        }
    }

    #[getter]
    fn silverman_floor(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.silverman_floor.clone(),
        }
    }

    #[getter]
    fn f_floor(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.f_floor.clone(),
        }
    }

    #[getter]
    fn witness_f(&self) -> PyEnclosure {
        PyEnclosure {
            inner: self.inner.witness_f.clone(),
        }
    }

    #[getter]
    fn witness_overlap_ok(&self) -> bool {
        self.inner.witness_overlap_ok
    }

    #[getter]
    fn chain_ok(&self) -> bool {
        self.inner.chain_ok
    }
}

fn policy_or_default(
    initial_bits: Option<u32>,
    max_bits: Option<u32>,
    target_width: Option<f64>,
) -> PyResult<CorePolicy> {
    let d = CorePolicy::default();
    CorePolicy::new(
        initial_bits.unwrap_or(d.initial_bits),
        max_bits.unwrap_or(d.max_bits),
        target_width.unwrap_or(d.target_width),
    )
    .map_err(to_py_err)
}

/// Primality verdict for any nonnegative integer.
#[pyfunction]
fn is_prime(n: &Bound<'_, PyAny>) -> PyResult<PyVerdict> {
    let n = big_from_py(n)?;
    Ok(PyVerdict {
        inner: core_primes::is_prime(&n),
    })
}

/// Smallest prime in [lo, hi] outside `exclude`, or None.
#[pyfunction]
#[pyo3(signature = (lo, hi, exclude=vec![]))]
fn find_prime_in_interval(
    py: Python<'_>,
    lo: &Bound<'_, PyAny>,
    hi: &Bound<'_, PyAny>,
    exclude: Vec<Bound<'_, PyAny>>,
) -> PyResult<Option<PyObject>> {
    let lo = big_from_py(lo)?;
    let hi = big_from_py(hi)?;
    let mut ex = BTreeSet::new();
    for e in &exclude {
        ex.insert(big_from_py(e)?);
    }
    match core_primes::find_prime_in_interval(&lo, &hi, &ex) {
        Some(p) => Ok(Some(big_to_py(py, &p)?)),
        None => Ok(None),
    }
}

/// Height of the radical generator p^(1/d): encloses (log p)/d.
#[pyfunction]
#[pyo3(signature = (p, d, initial_bits=None, max_bits=None, target_width=None))]
fn radical_height(
    p: &Bound<'_, PyAny>,
    d: &Bound<'_, PyAny>,
    initial_bits: Option<u32>,
    max_bits: Option<u32>,
    target_width: Option<f64>,
) -> PyResult<PyEnclosure> {
    let p = big_from_py(p)?;
    let d = big_from_py(d)?;
    let policy = policy_or_default(initial_bits, max_bits, target_width)?;
    Ok(PyEnclosure {
        inner: core_heights::radical_height(&p, &d, &policy).map_err(to_py_err)?,
    })
}

/// degree^gamma · h.
#[pyfunction]
fn f_value(degree: &Bound<'_, PyAny>, gamma: f64, h: &PyEnclosure) -> PyResult<PyEnclosure> {
    let degree = big_from_py(degree)?;
    if degree < 1 {
        return Err(PyValueError::new_err("degree must be at least 1"));
    }
    if !gamma.is_finite() {
        return Err(PyValueError::new_err("gamma must be finite"));
    }
    if *h.inner.lo() < 0 {
        return Err(PyValueError::new_err("height enclosure must be nonnegative"));
    }
    Ok(PyEnclosure {
        inner: core_heights::f_value(&degree, gamma, &h.inner),
    })
}

/// Mahler measure of an integer polynomial ("c0,c1,..." or "x^3-2").
#[pyfunction]
#[pyo3(signature = (poly, initial_bits=None, max_bits=None, target_width=None))]
fn mahler_measure(
    poly: &str,
    initial_bits: Option<u32>,
    max_bits: Option<u32>,
    target_width: Option<f64>,
) -> PyResult<PyEnclosure> {
    let f = parse_poly(poly)?;
    let policy = policy_or_default(initial_bits, max_bits, target_width)?;
    Ok(PyEnclosure {
        inner: core_heights::mahler_measure(&f, &policy).map_err(to_py_err)?,
    })
}

/// Weil height from a minimal polynomial: (log M(f)) / deg f.
#[pyfunction]
#[pyo3(signature = (poly, initial_bits=None, max_bits=None, target_width=None))]
fn weil_height_from_minpoly(
    poly: &str,
    initial_bits: Option<u32>,
    max_bits: Option<u32>,
    target_width: Option<f64>,
) -> PyResult<PyEnclosure> {
    let f = parse_poly(poly)?;
    let policy = policy_or_default(initial_bits, max_bits, target_width)?;
    Ok(PyEnclosure {
        inner: core_heights::weil_height_from_minpoly(&f, &policy).map_err(to_py_err)?,
    })
}

/// Eisenstein criterion at prime q.
#[pyfunction]
fn eisenstein_check(poly: &str, q: &Bound<'_, PyAny>) -> PyResult<bool> {
    let f = parse_poly(poly)?;
    let q = big_from_py(q)?;
    core_heights::eisenstein_check(&f, &q).map_err(to_py_err)
}

/// Certified integer bracket for the prime search at degree d.
#[pyfunction]
fn p_interval(
    py: Python<'_>,
    d: &Bound<'_, PyAny>,
    params: &PyParams,
) -> PyResult<(PyObject, PyObject)> {
    let d = big_from_py(d)?;
    let (lo, hi) = core_tower::p_interval(&d, &params.inner).map_err(to_py_err)?;
    Ok((big_to_py(py, &lo)?, big_to_py(py, &hi)?))
}

/// Build the tower levels 1..=horizon.
#[pyfunction]
fn build_tower(params: &PyParams) -> PyResult<Vec<PyLevel>> {
    let levels = core_tower::build_tower(&params.inner).map_err(to_py_err)?;
    Ok(levels.into_iter().map(|inner| PyLevel { inner }).collect())
}

/// Certified metrics for one level.
#[pyfunction]
fn level_metrics(level: &PyLevel, params: &PyParams) -> PyResult<PyMetrics> {
    Ok(PyMetrics {
        inner: core_certify::level_metrics(&level.inner, &params.inner).map_err(to_py_err)?,
    })
}

/// First level with b below eta: returns (reached, index, b).
#[pyfunction]
fn witness_index(params: &PyParams, eta: f64, level_cap: u32) -> PyResult<(bool, u32, PyEnclosure)> {
    match core_certify::witness_index(&params.inner, eta, level_cap).map_err(to_py_err)? {
        core_certify::WitnessOutcome::Reached { index, b } => {
            Ok((true, index, PyEnclosure { inner: b }))
        }
        core_certify::WitnessOutcome::NotReached { best_index, best_b } => {
            Ok((false, best_index, PyEnclosure { inner: best_b }))
        }
    }
}

/// Full certificate as a JSON string (schema version "1").
#[pyfunction]
#[pyo3(signature = (params, eta=0.5))]
fn audit_report_json(params: &PyParams, eta: f64) -> PyResult<String> {
    let r = core_certify::audit_report(&params.inner, eta).map_err(to_py_err)?;
    Ok(report::report_to_json(&r))
}

#[pymodule]
#[pyo3(name = "heighttower")]
fn heighttower_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnclosure>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyLevel>()?;
    m.add_class::<PyMetrics>()?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(find_prime_in_interval, m)?)?;
    m.add_function(wrap_pyfunction!(radical_height, m)?)?;
    m.add_function(wrap_pyfunction!(f_value, m)?)?;
    m.add_function(wrap_pyfunction!(mahler_measure, m)?)?;
    m.add_function(wrap_pyfunction!(weil_height_from_minpoly, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein_check, m)?)?;
    m.add_function(wrap_pyfunction!(p_interval, m)?)?;
    m.add_function(wrap_pyfunction!(build_tower, m)?)?;
    m.add_function(wrap_pyfunction!(level_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(witness_index, m)?)?;
    m.add_function(wrap_pyfunction!(audit_report_json, m)?)?;
    Ok(())
}
