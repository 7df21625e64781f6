//! Python bindings for the pairing laboratory.
//!
//! Exposes the two group kinds as classes, pairing evaluation with full
//! operation reports, chain construction, the embedded worked example and
//! the operation-count bench. Structured results cross the boundary as
//! plain dicts/lists mirroring the CLI's JSON schema.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use pairlab_core::bench::{run_bench, BenchFamily, BenchOpts};
use pairlab_core::chain::{self, Policy};
use pairlab_core::ec::EllipticCurve as EcCurve;
use pairlab_core::ec_pairings::{self, EcPairingOpts};
use pairlab_core::field::Field;
use pairlab_core::golden;
use pairlab_core::hec_pairings::{self, HecPairingOpts};
use pairlab_core::jacobian::HyperellipticCurve;
use pairlab_core::poly::Poly;
use pairlab_core::report::PairingReport;
use pairlab_core::verify;

fn to_py_err(e: pairlab_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Convert any serializable report into Python objects via its JSON shape.
fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    match v {
        serde_json::Value::Null => Ok(py.None()),
        serde_json::Value::Bool(b) => b.into_py_any(py),
        serde_json::Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

fn report_to_py<T: serde::Serialize>(py: Python<'_>, report: &T) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(report)
        .map_err(|e| PyValueError::new_err(format!("serialization: {e}")))?;
    json_to_py(py, &value)
}

fn parse_policy(s: &str) -> PyResult<Policy> {
    match s {
        "binary" => Ok(Policy::Binary),
        "naf" => Ok(Policy::Naf),
        other => Err(PyValueError::new_err(format!("unknown policy {other:?}"))),
    }
}

/// Short-Weierstrass curve y^2 = x^3 + a4 x + a6 over F_{p^k}.
///
/// Points are strings: `x,y` coordinates (k comma-separated residues per
/// coordinate) or `inf`.
#[pyclass]
struct EllipticCurve {
    curve: EcCurve,
}

#[pymethods]
impl EllipticCurve {
    #[new]
    #[pyo3(signature = (p, a4, a6, k=1, modulus=None))]
    fn new(
        p: u64,
        a4: Vec<u64>,
        a6: Vec<u64>,
        k: usize,
        modulus: Option<Vec<u64>>,
    ) -> PyResult<Self> {
        let field = Field::extension(p, k, modulus).map_err(to_py_err)?;
        let a4 = field.element_from_coeffs(&a4).map_err(to_py_err)?;
        let a6 = field.element_from_coeffs(&a6).map_err(to_py_err)?;
        Ok(EllipticCurve {
            curve: EcCurve::new(field, a4, a6).map_err(to_py_err)?,
        })
    }

    fn add(&self, p: &str, q: &str) -> PyResult<String> {
        let pp = self.curve.parse_point(p).map_err(to_py_err)?;
        let qq = self.curve.parse_point(q).map_err(to_py_err)?;
        Ok(self.curve.format_point(&self.curve.add(&pp, &qq)))
    }

    fn neg(&self, p: &str) -> PyResult<String> {
        let pp = self.curve.parse_point(p).map_err(to_py_err)?;
        Ok(self.curve.format_point(&self.curve.neg(&pp)))
    }

    fn scalar_mul(&self, n: i64, p: &str) -> PyResult<String> {
        let pp = self.curve.parse_point(p).map_err(to_py_err)?;
        Ok(self
            .curve
            .format_point(&self.curve.scalar_mul(n as i128, &pp)))
    }

    /// alg: "weil", "weil2", "tate" or "tate2". Returns the CLI's JSON
    /// report as a dict.
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (alg, m, p, q, seed=1, normalized=false, chain="naf"))]
    fn pairing(
        &self,
        py: Python<'_>,
        alg: &str,
        m: u64,
        p: &str,
        q: &str,
        seed: u64,
        normalized: bool,
        chain: &str,
    ) -> PyResult<Py<PyAny>> {
        let pp = self.curve.parse_point(p).map_err(to_py_err)?;
        let qq = self.curve.parse_point(q).map_err(to_py_err)?;
        let opts = EcPairingOpts {
            policy: parse_policy(chain)?,
            normalized,
            seed,
            check_preconditions: true,
        };
        let res = match alg {
            "weil" => ec_pairings::miller_weil(&self.curve, &pp, &qq, m, &opts),
            "weil2" => ec_pairings::squared_weil(&self.curve, &pp, &qq, m, &opts),
            "tate" => ec_pairings::miller_tate(&self.curve, &pp, &qq, m, &opts),
            "tate2" => ec_pairings::squared_tate(&self.curve, &pp, &qq, m, &opts),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown algorithm {other:?}"
                )))
            }
        }
        .map_err(to_py_err)?;
        report_to_py(py, &PairingReport::from_ec(alg, m, &res))
    }
}

/// Genus-2 Jacobian of y^2 = f(x) over F_p in Mumford representation.
///
/// Divisors are strings `a0,a1,..;b0,b1,..` (constant terms first).
#[pyclass]
struct Jacobian {
    curve: HyperellipticCurve,
}

#[pymethods]
impl Jacobian {
    #[new]
    fn new(p: u64, f: Vec<u64>) -> PyResult<Self> {
        let field = Field::prime(p).map_err(to_py_err)?;
        let fx = Poly::from_u64s(&field, &f);
        Ok(Jacobian {
            curve: HyperellipticCurve::new(field, fx).map_err(to_py_err)?,
        })
    }

    fn add(&self, d1: &str, d2: &str) -> PyResult<String> {
        let a = self.curve.parse_divisor(d1).map_err(to_py_err)?;
        let b = self.curve.parse_divisor(d2).map_err(to_py_err)?;
        Ok(self.curve.add(&a, &b).to_display())
    }

    fn neg(&self, d: &str) -> PyResult<String> {
        let a = self.curve.parse_divisor(d).map_err(to_py_err)?;
        Ok(self.curve.neg(&a).to_display())
    }

    fn scalar_mul(&self, n: i64, d: &str) -> PyResult<String> {
        let a = self.curve.parse_divisor(d).map_err(to_py_err)?;
        Ok(self.curve.scalar_mul(n as i128, &a).to_display())
    }

    /// alg: "tate2" (deterministic squared pairing) or "tate-std"
    /// (randomized baseline).
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (alg, m, d, e, seed=1, alt_chain=false))]
    fn pairing(
        &self,
        py: Python<'_>,
        alg: &str,
        m: u64,
        d: &str,
        e: &str,
        seed: u64,
        alt_chain: bool,
    ) -> PyResult<Py<PyAny>> {
        let dd = self.curve.parse_divisor(d).map_err(to_py_err)?;
        let ee = self.curve.parse_divisor(e).map_err(to_py_err)?;
        let opts = HecPairingOpts {
            alt_chain,
            seed,
            check_preconditions: true,
        };
        let res = match alg {
            "tate2" => hec_pairings::squared_tate_hec(&self.curve, &dd, &ee, m, &opts),
            "tate-std" => hec_pairings::standard_tate_hec(&self.curve, &dd, &ee, m, &opts),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown algorithm {other:?}"
                )))
            }
        }
        .map_err(to_py_err)?;
        report_to_py(py, &PairingReport::from_hec(alg, m, &res))
    }
}

/// Addition-subtraction chain for m as a list of step dicts.
#[pyfunction]
#[pyo3(signature = (m, policy="naf"))]
fn build_chain(py: Python<'_>, m: u64, policy: &str) -> PyResult<Py<PyAny>> {
    let steps = chain::build_chain(m, parse_policy(policy)?).map_err(to_py_err)?;
    report_to_py(py, &steps)
}

/// Run the embedded genus-2 worked example; returns the list of checks.
#[pyfunction]
#[pyo3(signature = (seed=7))]
fn genus2_example(py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
    let checks = golden::run_worked_example(seed).map_err(to_py_err)?;
    report_to_py(py, &checks)
}

/// Paired operation-count bench; family is "ec-weil", "ec-tate" or "hec".
#[pyfunction]
#[pyo3(name = "bench", signature = (family, trials=2, m=pairlab_core::bench::BENCH_ORDER, div_weight=None, seed=1))]
fn bench_counts(
    py: Python<'_>,
    family: &str,
    trials: usize,
    m: u64,
    div_weight: Option<f64>,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let family = match family {
        "ec-weil" => BenchFamily::EcWeil,
        "ec-tate" => BenchFamily::EcTate,
        "hec" => BenchFamily::Hec,
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    let report = run_bench(
        family,
        &BenchOpts {
            trials,
            m,
            div_weight,
            seed,
        },
    )
    .map_err(to_py_err)?;
    report_to_py(py, &report)
}

/// Run named property suites; property=None runs all of them.
#[pyfunction]
#[pyo3(signature = (property=None, samples=50, seed=1))]
fn run_properties(
    py: Python<'_>,
    property: Option<&str>,
    samples: usize,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let reports = verify::run_properties(property, samples, seed).map_err(to_py_err)?;
    report_to_py(py, &reports)
}

#[pymodule]
fn pairlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<EllipticCurve>()?;
    m.add_class::<Jacobian>()?;
    m.add_function(wrap_pyfunction!(build_chain, m)?)?;
    m.add_function(wrap_pyfunction!(genus2_example, m)?)?;
    m.add_function(wrap_pyfunction!(bench_counts, m)?)?;
    m.add_function(wrap_pyfunction!(run_properties, m)?)?;
    Ok(())
}
