//! Python bindings for the Fermat period toolkit: period evaluation, matrix
//! assembly, certified rank computation, and the verification suites.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use fermat_core::codim as codim_mod;
use fermat_core::combinatorics::{
    enumerate_index_set, enumerate_linear_cycles, linear_cycle_count,
};
use fermat_core::matrix::build_matrix;
use fermat_core::periods;
use fermat_core::rank;
use fermat_core::verify::{
    run_all_ones_suite, run_ci_suite, run_linear_pair_suite, RankStrategy, Report, SuiteConfig,
};
use fermat_core::{
    DegreeVector, Error, ExponentIndex, FermatParams, LinearCycle, PeriodMatrix, Provenance,
    RankResult,
};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn strategy(method: &str) -> PyResult<RankStrategy> {
    match method {
        "exact" => Ok(RankStrategy::Exact),
        "modular" => Ok(RankStrategy::Modular),
        "auto" => Ok(RankStrategy::Auto),
        other => Err(PyValueError::new_err(format!(
            "method must be exact, modular, or auto (got {other:?})"
        ))),
    }
}

fn rank_to_py(py: Python<'_>, result: &RankResult) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(result).expect("serializable");
    json_to_py(py, &value)
}

fn report_to_py(py: Python<'_>, report: &Report) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(report).expect("serializable");
    json_to_py(py, &value)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        serde_json::Value::Number(n) => {
            if let Some(v) = n.as_u64() {
                v.into_pyobject(py)?.into_any().unbind()
            } else if let Some(v) = n.as_i64() {
                v.into_pyobject(py)?.into_any().unbind()
            } else {
                n.as_f64().unwrap().into_pyobject(py)?.into_any().unbind()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn suite_config(
    method: &str,
    primes: usize,
    jobs: usize,
    n: Option<u32>,
    d: Option<u32>,
    degree_cap: u32,
) -> PyResult<SuiteConfig> {
    Ok(SuiteConfig {
        method: strategy(method)?,
        prime_count: primes.max(1),
        jobs,
        filter_n: n,
        filter_d: d,
        all_ones_degree_cap: degree_cap,
    })
}

/// Codimension number C_a of the multiset `a` for parameters (n, d).
#[pyfunction]
fn codim(n: u32, d: u32, a: Vec<u32>) -> u64 {
    codim_mod::codim(n, d, &a)
}

/// Expected rank of the period matrix of a pair of linear cycles meeting in
/// projective dimension m (-1 = disjoint).
#[pyfunction]
fn expected_rank_linear_pair(n: u32, d: u32, m: i64) -> PyResult<u64> {
    codim_mod::expected_rank_linear_pair(n, d, m).map_err(err)
}

/// Expected rank of a complete-intersection period matrix.
#[pyfunction]
fn expected_rank_ci(n: u32, d: u32, degrees: Vec<u32>) -> PyResult<u64> {
    codim_mod::expected_rank_ci(n, d, &degrees).map_err(err)
}

/// Closed form for the all-ones complete intersection.
#[pyfunction]
fn expected_rank_ci_all_ones(n: u32, d: u32) -> u64 {
    codim_mod::expected_rank_ci_all_ones(n, d)
}

/// Number of linear n/2-dimensional cycles inside the Fermat hypersurface.
#[pyfunction]
fn count_linear_cycles(n: u32, d: u32) -> PyResult<u128> {
    Ok(linear_cycle_count(FermatParams::new(n, d).map_err(err)?))
}

/// Canonical linear cycles as (a, b, sign) triples.
#[pyfunction]
fn linear_cycles(n: u32, d: u32) -> PyResult<Vec<(Vec<u32>, Vec<u32>, i8)>> {
    let params = FermatParams::new(n, d).map_err(err)?;
    Ok(enumerate_linear_cycles(params)
        .into_iter()
        .map(|c| (c.a, c.b, c.sign))
        .collect())
}

/// Exponent tuples of the given total degree with entries in [0, d-2].
#[pyfunction]
fn index_set(n: u32, d: u32, total: i64) -> PyResult<Vec<Vec<u32>>> {
    let params = FermatParams::new(n, d).map_err(err)?;
    Ok(enumerate_index_set(params, total).into_iter().map(|i| i.0).collect())
}

/// Period of the linear cycle (a, b) against the form of exponent i.
/// Returns (scalar, coefficients of the normalized value over the power
/// basis of Z[zeta_{2d}]).
#[pyfunction]
fn linear_cycle_period(
    n: u32,
    d: u32,
    a: Vec<u32>,
    b: Vec<u32>,
    i: Vec<u32>,
) -> PyResult<(String, Vec<BigInt>)> {
    let params = FermatParams::new(n, d).map_err(err)?;
    let cycle = LinearCycle::new(a, b).map_err(err)?;
    let value = periods::linear_cycle_period(params, &cycle, &ExponentIndex(i)).map_err(err)?;
    Ok((value.scalar.to_string(), value.normalized.coeffs().to_vec()))
}

/// Complete-intersection period (canonical root sets) at combined exponent i.
#[pyfunction]
fn ci_period(n: u32, d: u32, degrees: Vec<u32>, i: Vec<u32>) -> PyResult<Vec<BigInt>> {
    let params = FermatParams::new(n, d).map_err(err)?;
    let dv = DegreeVector::canonical(params, degrees).map_err(err)?;
    Ok(periods::ci_period(params, &dv, &ExponentIndex(i)).coeffs().to_vec())
}

/// Dense period matrix over Z[zeta_{2d}].
#[pyclass(name = "PeriodMatrix")]
struct PyPeriodMatrix {
    inner: PeriodMatrix,
}

#[pymethods]
impl PyPeriodMatrix {
    /// Matrix of the fixed pair of linear cycles meeting in dimension m.
    #[staticmethod]
    fn linear_pair(n: u32, d: u32, m: i64) -> PyResult<Self> {
        let params = FermatParams::new(n, d).map_err(err)?;
        let inner = build_matrix(params, Provenance::LinearPair { m }).map_err(err)?;
        Ok(PyPeriodMatrix { inner })
    }

    /// Matrix of a complete-intersection cycle with canonical root sets.
    #[staticmethod]
    fn complete_intersection(n: u32, d: u32, degrees: Vec<u32>) -> PyResult<Self> {
        let params = FermatParams::new(n, d).map_err(err)?;
        let dv = DegreeVector::canonical(params, degrees).map_err(err)?;
        let inner =
            build_matrix(params, Provenance::CompleteIntersection { degrees: dv }).map_err(err)?;
        Ok(PyPeriodMatrix { inner })
    }

    /// Matrix of a single linear cycle (a, b).
    #[staticmethod]
    fn single_cycle(n: u32, d: u32, a: Vec<u32>, b: Vec<u32>) -> PyResult<Self> {
        let params = FermatParams::new(n, d).map_err(err)?;
        let inner = build_matrix(params, Provenance::SingleCycle { a, b }).map_err(err)?;
        Ok(PyPeriodMatrix { inner })
    }

    #[staticmethod]
    fn from_json(data: &str) -> PyResult<Self> {
        Ok(PyPeriodMatrix { inner: PeriodMatrix::load_json(data.as_bytes()).map_err(err)? })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn zeta_order(&self) -> u32 {
        self.inner.params.zeta_order()
    }

    /// Coefficients of entry (r, c) over the power basis of Z[zeta_{2d}].
    fn entry(&self, r: usize, c: usize) -> PyResult<Vec<BigInt>> {
        if r >= self.inner.rows() || c >= self.inner.cols() {
            return Err(PyValueError::new_err("entry index out of range"));
        }
        Ok(self.inner.entry(r, c).coeffs().to_vec())
    }

    /// Certified rank over Q(zeta_{2d}).
    #[pyo3(signature = (method = "auto", primes = 3))]
    fn rank(&self, py: Python<'_>, method: &str, primes: usize) -> PyResult<Py<PyAny>> {
        let result = match strategy(method)? {
            RankStrategy::Exact => rank::rank_exact(&self.inner),
            RankStrategy::Modular => rank::rank_modular(&self.inner, primes.max(1)),
            RankStrategy::Auto => rank::rank_auto(&self.inner, primes.max(1)),
        };
        rank_to_py(py, &result)
    }

    fn to_json(&self) -> String {
        String::from_utf8(self.inner.dump_json()).expect("json is utf-8")
    }

    fn to_tsv(&self) -> String {
        String::from_utf8(self.inner.dump_tsv()).expect("tsv is utf-8")
    }

    fn __repr__(&self) -> String {
        format!(
            "PeriodMatrix({}x{} over Z[zeta_{}])",
            self.inner.rows(),
            self.inner.cols(),
            self.inner.params.zeta_order()
        )
    }
}

/// Run the 23-case linear-pair suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (n = None, d = None, method = "auto", primes = 3, jobs = 0))]
fn verify_linear_pairs(
    py: Python<'_>,
    n: Option<u32>,
    d: Option<u32>,
    method: &str,
    primes: usize,
    jobs: usize,
) -> PyResult<Py<PyAny>> {
    let config = suite_config(method, primes, jobs, n, d, 6)?;
    report_to_py(py, &py.detach(|| run_linear_pair_suite(&config)))
}

/// Run the complete-intersection suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (n = None, d = None, method = "auto", primes = 3, jobs = 0))]
fn verify_complete_intersections(
    py: Python<'_>,
    n: Option<u32>,
    d: Option<u32>,
    method: &str,
    primes: usize,
    jobs: usize,
) -> PyResult<Py<PyAny>> {
    let config = suite_config(method, primes, jobs, n, d, 6)?;
    report_to_py(py, &py.detach(|| run_ci_suite(&config)))
}

/// Run the all-ones closed-form suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (n = None, d = None, method = "auto", primes = 3, jobs = 0, degree_cap = 6))]
fn verify_all_ones(
    py: Python<'_>,
    n: Option<u32>,
    d: Option<u32>,
    method: &str,
    primes: usize,
    jobs: usize,
    degree_cap: u32,
) -> PyResult<Py<PyAny>> {
    let config = suite_config(method, primes, jobs, n, d, degree_cap)?;
    report_to_py(py, &py.detach(|| run_all_ones_suite(&config)))
}

#[pymodule]
fn fermat_periods(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPeriodMatrix>()?;
    m.add_function(wrap_pyfunction!(codim, m)?)?;
    m.add_function(wrap_pyfunction!(expected_rank_linear_pair, m)?)?;
    m.add_function(wrap_pyfunction!(expected_rank_ci, m)?)?;
    m.add_function(wrap_pyfunction!(expected_rank_ci_all_ones, m)?)?;
    m.add_function(wrap_pyfunction!(count_linear_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(linear_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(index_set, m)?)?;
    m.add_function(wrap_pyfunction!(linear_cycle_period, m)?)?;
    m.add_function(wrap_pyfunction!(ci_period, m)?)?;
    m.add_function(wrap_pyfunction!(verify_linear_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(verify_complete_intersections, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all_ones, m)?)?;
    Ok(())
}
