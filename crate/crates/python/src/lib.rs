//! Python bindings for the exact field, permutation groups, orbit census and
//! the check runner.

use std::collections::BTreeMap;

use g20_links::census::{orbit_census, Surface};
use g20_links::cyclo::FieldElement;
use g20_links::groups::{self, orbit_and_stabilizer, FiniteGroup, Permutation};
use g20_links::projgeo::ProjPoint;
use g20_links::report;
use pyo3::exceptions::{PyKeyError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

fn value_err(e: g20_links::Error) -> PyErr {
    match e {
        g20_links::Error::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        g20_links::Error::UnknownCheckId(_) => PyKeyError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Element of Q(ζ₂₀) in the power basis 1, ζ, …, ζ⁷.
#[pyclass(name = "FieldElement", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyField(FieldElement);

#[pymethods]
impl PyField {
    /// Coefficients as ints or strings like "3/4"; shorter lists are padded.
    #[new]
    #[pyo3(signature = (coeffs = Vec::new()))]
    fn new(coeffs: Vec<String>) -> PyResult<Self> {
        FieldElement::from_strings(&coeffs).map(PyField).map_err(value_err)
    }

    #[staticmethod]
    fn integer(n: i64) -> Self {
        PyField(FieldElement::from_integer(n))
    }

    #[staticmethod]
    fn zeta() -> Self {
        PyField(FieldElement::zeta())
    }

    #[staticmethod]
    fn zeta5() -> Self {
        PyField(FieldElement::zeta5())
    }

    #[staticmethod]
    fn i() -> Self {
        PyField(FieldElement::i())
    }

    fn coeffs(&self) -> Vec<String> {
        self.0.to_strings()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn galois(&self, k: i64) -> PyResult<Self> {
        self.0.galois_apply(k).map(PyField).map_err(value_err)
    }

    fn conj(&self) -> Self {
        PyField(self.0.conj())
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inv().map(PyField).map_err(value_err)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        PyField(self.0.pow(e))
    }

    fn __add__(&self, o: &Self) -> Self {
        PyField(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyField(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyField(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(PyField).map_err(value_err)
    }

    fn __neg__(&self) -> Self {
        PyField(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FieldElement({})", self.0)
    }
}

/// Permutation of the five coordinates; letter j moves x_{j-1}.
#[pyclass(name = "Permutation", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPerm(Permutation);

#[pymethods]
impl PyPerm {
    #[new]
    fn new(cycles: &str) -> PyResult<Self> {
        Permutation::parse(cycles).map(PyPerm).map_err(value_err)
    }

    /// self ∘ other
    fn compose(&self, other: &Self) -> Self {
        PyPerm(self.0.compose(&other.0))
    }

    fn __mul__(&self, other: &Self) -> Self {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        PyPerm(self.0.inverse())
    }

    fn order(&self) -> usize {
        self.0.order()
    }

    fn images(&self) -> Vec<u8> {
        self.0.images().to_vec()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Permutation('{}')", self.0)
    }
}

fn group_of(gens: &[String]) -> PyResult<FiniteGroup> {
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    FiniteGroup::parse(&refs).map_err(value_err)
}

/// Elements of the group generated by the given cycle strings.
#[pyfunction]
fn closure(generators: Vec<String>) -> PyResult<Vec<PyPerm>> {
    Ok(group_of(&generators)?.elements().iter().cloned().map(PyPerm).collect())
}

#[pyfunction]
fn g20_generators() -> Vec<String> {
    groups::g20().generators().iter().map(ToString::to_string).collect()
}

/// Orbit (as point strings) and stabilizer order of a point under a group.
#[pyfunction]
fn orbit(generators: Vec<String>, point: Vec<PyField>) -> PyResult<(Vec<String>, usize)> {
    let g = group_of(&generators)?;
    let p = ProjPoint::new(point.into_iter().map(|x| x.0).collect()).map_err(value_err)?;
    let (orb, stab) = orbit_and_stabilizer(&g, &p);
    Ok((orb.iter().map(ToString::to_string).collect(), stab.order()))
}

/// Orbit lengths below `bound` on "clebsch" or "quadric" under G20.
#[pyfunction]
#[pyo3(signature = (surface, bound = 8))]
fn census(surface: &str, bound: usize) -> PyResult<BTreeMap<usize, usize>> {
    let s = match surface {
        "clebsch" => Surface::clebsch(),
        "quadric" => Surface::quadric(),
        other => return Err(PyValueError::new_err(format!("unknown surface {other}"))),
    };
    Ok(orbit_census(&s, &groups::g20(), bound).map_err(value_err)?.lengths())
}

#[pyfunction]
fn list_checks() -> Vec<(String, String)> {
    report::catalog()
        .iter()
        .map(|c| (c.id.to_string(), c.statement.to_string()))
        .collect()
}

/// Runs checks and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (ids = vec!["all".to_string()], jobs = 1))]
fn run_checks(py: Python<'_>, ids: Vec<String>, jobs: usize) -> PyResult<String> {
    let report = py.detach(|| report::run_checks(&ids, jobs, false)).map_err(value_err)?;
    Ok(report.to_json())
}

#[pymodule]
fn g20_links_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyPerm>()?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(g20_generators, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(list_checks, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
