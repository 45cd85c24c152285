//! Python bindings. Records come back as plain dicts; exact integers that
//! may exceed 64 bits are returned as Python `int`.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyInt, PyList};
use serde::Serialize;
use serde_json::Value;

use linkhom::alexander::alexander_data;
use linkhom::classify::{classify_link, find_twins, LinkRecord};
use linkhom::covers::cover_record;
use linkhom::decompose::{find_decompositions, preferred_decomposition, render_polynomial};
use linkhom::torsion::homology as link_homology;
use linkhom::weights::milnor_number as link_milnor_number;

/// Fields serialized as decimal strings that should come back as ints.
const BIG_FIELDS: &[&str] = &["mu", "torsion_order", "delta_one", "delta_minus_one", "torsion"];

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn big<'py>(py: Python<'py>, x: &BigInt) -> PyResult<Bound<'py, PyAny>> {
    py.get_type::<PyInt>().call1((x.to_string(),))
}

fn to_py<'py>(py: Python<'py>, v: &Value, as_int: bool) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (_, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) if as_int => py.get_type::<PyInt>().call1((s.as_str(),))?,
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item, as_int)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item, BIG_FIELDS.contains(&k.as_str()))?)?;
            }
            dict.into_any()
        }
    })
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(err)?, false)
}

/// Weights `w` and degree `d`; `d` defaults to `sum(w) - 1`.
#[pyclass(name = "WeightSystem", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyWeightSystem {
    inner: linkhom::WeightSystem,
}

#[pymethods]
impl PyWeightSystem {
    #[new]
    #[pyo3(signature = (weights, degree=None))]
    fn new(weights: Vec<u64>, degree: Option<u64>) -> PyResult<Self> {
        linkhom::WeightSystem::new(&weights, degree).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn degree(&self) -> u64 {
        self.inner.degree()
    }

    #[getter]
    fn link_dimension(&self) -> usize {
        self.inner.link_dimension()
    }

    fn is_coprime(&self) -> bool {
        self.inner.is_coprime()
    }

    fn __repr__(&self) -> String {
        format!("WeightSystem({:?}, degree={})", self.inner.weights(), self.inner.degree())
    }
}

fn system(weights: Vec<u64>, degree: Option<u64>) -> PyResult<linkhom::WeightSystem> {
    linkhom::WeightSystem::new(&weights, degree).map_err(err)
}

/// Accepts either a `WeightSystem` or a list of weights.
#[derive(FromPyObject)]
enum SystemArg {
    Ws(PyWeightSystem),
    Weights(Vec<u64>),
}

impl SystemArg {
    fn resolve(self, degree: Option<u64>) -> PyResult<linkhom::WeightSystem> {
        match self {
            SystemArg::Ws(ws) if degree.is_none() => Ok(ws.inner),
            SystemArg::Ws(ws) => system(ws.inner.weights().to_vec(), degree),
            SystemArg::Weights(w) => system(w, degree),
        }
    }
}

/// Full link record as a dict.
#[pyfunction]
#[pyo3(signature = (ws, degree=None))]
fn classify<'py>(py: Python<'py>, ws: SystemArg, degree: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let ws = ws.resolve(degree)?;
    let rec = py.detach(|| classify_link(&ws)).map_err(err)?;
    to_dict(py, &rec)
}

#[pyfunction]
#[pyo3(signature = (ws, degree=None))]
fn milnor_number<'py>(py: Python<'py>, ws: SystemArg, degree: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    big(py, &link_milnor_number(&ws.resolve(degree)?).map_err(err)?)
}

/// `(rank, torsion)` with torsion as invariant factors `d_1 | d_2 | ...`.
#[pyfunction]
#[pyo3(signature = (ws, degree=None))]
fn homology<'py>(py: Python<'py>, ws: SystemArg, degree: Option<u64>) -> PyResult<(u64, Vec<Bound<'py, PyAny>>)> {
    let ws = ws.resolve(degree)?;
    let h = py.detach(|| link_homology(&ws)).map_err(err)?;
    Ok((h.rank, h.torsion.iter().map(|t| big(py, t)).collect::<PyResult<_>>()?))
}

/// Betti number and `Δ(±1)`.
#[pyfunction]
#[pyo3(signature = (ws, degree=None))]
fn alexander<'py>(py: Python<'py>, ws: SystemArg, degree: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let a = alexander_data(&ws.resolve(degree)?).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("betti", a.betti)?;
    dict.set_item("delta_one", big(py, &a.delta_one)?)?;
    dict.set_item("delta_minus_one", big(py, &a.delta_minus_one)?)?;
    dict.set_item("form", to_dict(py, &a.form)?)?;
    Ok(dict)
}

/// Preferred decomposition, or all of them with `all=True`.
#[pyfunction]
#[pyo3(signature = (ws, degree=None, all=false))]
fn decompose<'py>(py: Python<'py>, ws: SystemArg, degree: Option<u64>, all: bool) -> PyResult<Bound<'py, PyList>> {
    let ws = ws.resolve(degree)?;
    let decs = if all { find_decompositions(&ws) } else { preferred_decomposition(&ws).into_iter().collect() };
    let out = PyList::empty(py);
    for d in &decs {
        let dict = PyDict::new(py);
        dict.set_item("label", d.label())?;
        dict.set_item("polynomial", render_polynomial(d, &ws))?;
        dict.set_item("blocks", to_dict(py, &d.blocks())?)?;
        out.append(dict)?;
    }
    Ok(out)
}

/// Branched cover `z^p + f` as a dict.
#[pyfunction]
#[pyo3(signature = (ws, p, degree=None))]
fn cover<'py>(py: Python<'py>, ws: SystemArg, p: u64, degree: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let rec = cover_record(&ws.resolve(degree)?, p).map_err(err)?;
    to_dict(py, &rec)
}

/// Twin groups among a list of weight systems (weights lists or
/// `(weights, degree)` pairs). Unclassifiable entries are skipped.
#[pyfunction]
fn twins<'py>(py: Python<'py>, systems: Vec<SystemArg>) -> PyResult<Bound<'py, PyAny>> {
    let systems: Vec<_> = systems.into_iter().map(|s| s.resolve(None)).collect::<PyResult<_>>()?;
    let records: Vec<LinkRecord> = py.detach(|| systems.iter().filter_map(|ws| classify_link(ws).ok()).collect());
    to_dict(py, &find_twins(&records))
}

#[pymodule(name = "linkhom")]
fn linkhom_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeightSystem>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(milnor_number, m)?)?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(alexander, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(twins, m)?)?;
    Ok(())
}
