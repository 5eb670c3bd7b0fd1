//! Python bindings. Certificates and reports cross the boundary as plain
//! dicts and lists built from their JSON form.

use num_bigint::BigInt;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use k3lat::correspondence::{self, CorrespondenceCertificate, Outcome};
use k3lat::{discriminant, embeddings, fibration, names, rational_forms, reproduction};

fn err(e: k3lat::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(xs) => {
            let list = PyList::empty(py);
            for x in xs {
                list.append(to_py(py, x)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn serde_to_py<T: serde::Serialize>(py: Python<'_>, x: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// An integral symmetric bilinear lattice.
#[pyclass(name = "Lattice", module = "pyk3lat", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLattice {
    inner: k3lat::Lattice,
}

#[pymethods]
impl PyLattice {
    /// `Lattice("T(2,2,2)")` or `Lattice(gram=[[..]], name="L")`.
    #[new]
    #[pyo3(signature = (spec=None, gram=None, name="L"))]
    fn new(spec: Option<&str>, gram: Option<Vec<Vec<BigInt>>>, name: &str) -> PyResult<Self> {
        let inner = match (spec, gram) {
            (Some(s), None) => names::parse(s).map_err(err)?,
            (None, Some(rows)) => {
                let m = k3lat::IntMatrix::from_rows(rows).map_err(err)?;
                k3lat::Lattice::new(name, m).map_err(err)?
            }
            _ => return Err(PyValueError::new_err("give exactly one of a name or gram=")),
        };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn twisted(k: i64, m: i64, n: i64) -> PyResult<Self> {
        Ok(Self {
            inner: k3lat::lattice::twisted_t(k, m, n).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<BigInt>> {
        self.inner.gram().to_rows()
    }

    fn determinant(&self) -> BigInt {
        self.inner.determinant()
    }

    /// `(s_plus, s_minus, s_zero)`.
    fn signature(&self) -> (usize, usize, usize) {
        let s = self.inner.signature();
        (s.s_plus, s.s_minus, s.s_zero)
    }

    fn is_even(&self) -> bool {
        self.inner.is_even()
    }

    fn is_unimodular(&self) -> bool {
        self.inner.is_unimodular()
    }

    fn twist(&self, m: BigInt) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.twist_big(&m).map_err(err)?,
        })
    }

    fn direct_sum(&self, other: &PyLattice) -> Self {
        Self {
            inner: self.inner.direct_sum(&other.inner),
        }
    }

    fn discriminant_group(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        serde_to_py(py, &discriminant::discriminant_group(&self.inner).map_err(err)?)
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self {
            inner: k3lat::Lattice::from_json(&v).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?})", self.inner.name())
    }

    fn __eq__(&self, other: &PyLattice) -> bool {
        self.inner.gram() == other.inner.gram()
    }
}

/// Rational equivalence certificate as a dict; `verdict` holds the answer.
#[pyfunction]
fn q_equivalent(py: Python<'_>, a: &PyLattice, b: &PyLattice) -> PyResult<Py<PyAny>> {
    serde_to_py(py, &rational_forms::q_equivalent(&a.inner, &b.inner).map_err(err)?)
}

#[pyfunction]
fn hilbert_symbol(a: i64, b: i64, place: &str) -> PyResult<i8> {
    let place: rational_forms::Place = place.parse().map_err(err)?;
    Ok(rational_forms::hilbert_symbol_int(&BigInt::from(a), &BigInt::from(b), place))
}

#[pyfunction]
fn genus_certificate(py: Python<'_>, a: &PyLattice, b: &PyLattice) -> PyResult<Py<PyAny>> {
    serde_to_py(py, &discriminant::genus_certificate(&a.inner, &b.inner).map_err(err)?)
}

#[pyfunction]
fn same_genus(a: &PyLattice, b: &PyLattice) -> PyResult<bool> {
    discriminant::same_genus(&a.inner, &b.inner).map_err(err)
}

/// Primitive embedding of T(k,m,n) into the K3 lattice, as a dict.
#[pyfunction]
fn embed_t_in_lambda(py: Python<'_>, k: i64, m: i64, n: i64) -> PyResult<Py<PyAny>> {
    let map = embeddings::embed_t_in_lambda(k, m, n).map_err(err)?;
    let mut v = map.to_json();
    v["primitive"] = Value::Bool(map.is_isometric_embedding() && map.is_primitive().map_err(err)?);
    to_py(py, &v)
}

/// The saturated image of T(k,m,n) in U³.
#[pyfunction]
fn saturate_phi(k: i64, m: i64, n: i64) -> PyResult<PyLattice> {
    let s = embeddings::saturate_phi(k, m, n).map_err(err)?;
    Ok(PyLattice {
        inner: s.saturation.lattice,
    })
}

fn outcome_to_py<T>(py: Python<'_>, o: Outcome<T>, f: impl FnOnce(T) -> PyResult<Py<PyAny>>) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    d.set_item("outcome", o.label())?;
    match o {
        Outcome::Found(x) => d.set_item("witness", f(x)?)?,
        Outcome::Refuted(why) | Outcome::Unknown(why) => d.set_item("reason", why)?,
    }
    Ok(d.into_any().unbind())
}

#[pyfunction]
fn admits_shioda_inose(py: Python<'_>, l: &PyLattice) -> PyResult<Py<PyAny>> {
    let o = correspondence::admits_shioda_inose(&l.inner).map_err(err)?;
    outcome_to_py(py, o, |m| to_py(py, &m.to_json()))
}

#[pyfunction]
fn kummer_halving(py: Python<'_>, l: &PyLattice) -> PyResult<Py<PyAny>> {
    let o = correspondence::kummer_halving(&l.inner).map_err(err)?;
    outcome_to_py(py, o, |d| serde_to_py(py, &d))
}

/// JSON text of the chain certificate between X(k,m,n) and X(k2,m2,n2).
#[pyfunction]
fn correspondence_chain(left: (i64, i64, i64), right: (i64, i64, i64)) -> PyResult<String> {
    let c = correspondence::correspondence_chain(left.0, left.1, left.2, right.0, right.1, right.2).map_err(err)?;
    Ok(c.to_json_string())
}

#[pyfunction]
fn jacobian_baseline() -> PyResult<String> {
    Ok(correspondence::jacobian_baseline().map_err(err)?.to_json_string())
}

/// Parses and re-checks every link; raises on a bad certificate.
#[pyfunction]
fn verify_certificate(text: &str) -> PyResult<bool> {
    CorrespondenceCertificate::from_json_verified(text).map_err(err)?;
    Ok(true)
}

/// Divisor checks on the shipped curve configuration.
#[pyfunction]
fn fibration_report(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let g = fibration::CurveGraph::shipped();
    serde_to_py(py, &fibration::configuration_report(&g).map_err(err)?)
}

/// Dynkin type of a set of (−2)-curves in the shipped configuration.
#[pyfunction]
fn dynkin_type(py: Python<'_>, curves: Vec<String>) -> PyResult<Py<PyAny>> {
    let g = fibration::CurveGraph::shipped();
    serde_to_py(py, &fibration::dynkin_type(&g, &curves).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (id, bounds=None))]
fn run_criterion(py: Python<'_>, id: u8, bounds: Option<[i64; 3]>) -> PyResult<Py<PyAny>> {
    if !(1..=9).contains(&id) {
        return Err(PyKeyError::new_err(format!("no check {id}")));
    }
    let mut cfg = reproduction::SweepConfig::default();
    if let Some(b) = bounds {
        cfg = cfg.with_grid(b);
    }
    let r = py.detach(|| reproduction::run_criterion(id, &cfg)).map_err(err)?;
    serde_to_py(py, &r)
}

#[pymodule]
fn pyk3lat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(q_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(genus_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(same_genus, m)?)?;
    m.add_function(wrap_pyfunction!(embed_t_in_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(saturate_phi, m)?)?;
    m.add_function(wrap_pyfunction!(admits_shioda_inose, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_halving, m)?)?;
    m.add_function(wrap_pyfunction!(correspondence_chain, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(fibration_report, m)?)?;
    m.add_function(wrap_pyfunction!(dynkin_type, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}
