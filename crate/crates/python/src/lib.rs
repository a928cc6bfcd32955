//! Python bindings for `risklens-core`.
//!
//! Value types (`RiskAttitude`, `ExtendedCdf`, `LotteryKernel`) are
//! classes; reports come back as plain dicts built from their JSON form.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use risklens_core as core;

create_exception!(risklens, NotLessRiskAverse, PyValueError);

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::NotLessRiskAverse(v) => NotLessRiskAverse::new_err(v.to_string()),
        core::Error::Numerical(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// Report → dict through the json module.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(
    name = "RiskAttitude",
    module = "risklens",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyRiskAttitude(core::RiskAttitude);

#[pymethods]
impl PyRiskAttitude {
    #[new]
    fn new(alternatives: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        core::RiskAttitude::new(alternatives, values)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn alternatives(&self) -> Vec<f64> {
        self.0.alternatives().to_vec()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RiskAttitude({:?}, {:?})",
            self.0.alternatives(),
            self.0.values()
        )
    }
}

#[pyclass(name = "ExtendedCdf", module = "risklens", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyExtendedCdf(core::ExtendedCdf);

#[pymethods]
impl PyExtendedCdf {
    /// `atoms` are `(at, mass)` pairs, `uniform` are `(from, to, mass)`.
    #[new]
    #[pyo3(signature = (neg_inf_mass = 0.0, atoms = Vec::new(), uniform = Vec::new()))]
    fn new(
        neg_inf_mass: f64,
        atoms: Vec<(f64, f64)>,
        uniform: Vec<(f64, f64, f64)>,
    ) -> PyResult<Self> {
        core::ExtendedCdf::new(neg_inf_mass, atoms, uniform)
            .map(Self)
            .map_err(err)
    }

    /// All mass at `-∞`.
    #[staticmethod]
    fn unavailable() -> Self {
        Self(core::ExtendedCdf::unavailable())
    }

    #[staticmethod]
    fn degenerate(at: f64) -> PyResult<Self> {
        core::ExtendedCdf::degenerate(at).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn neg_inf_mass(&self) -> f64 {
        self.0.neg_inf_mass()
    }

    #[getter]
    fn atoms(&self) -> Vec<(f64, f64)> {
        self.0.atoms().iter().map(|a| (a.at, a.mass)).collect()
    }

    fn cdf(&self, k: f64) -> f64 {
        self.0.cdf(k)
    }

    /// `χ(ℓ) = ∫ max{ℓ, k} F(dk)`.
    fn chi(&self, ell: f64) -> f64 {
        self.0.chi_eval(ell)
    }

    fn __repr__(&self) -> String {
        format!(
            "ExtendedCdf.from_json({:?})",
            self.to_json().unwrap_or_default()
        )
    }
}

#[pyclass(
    name = "LotteryKernel",
    module = "risklens",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyLotteryKernel(core::LotteryKernel);

#[pymethods]
impl PyLotteryKernel {
    /// `kernels` maps each alternative to its lottery.
    #[new]
    fn new(alternatives: Vec<f64>, kernels: Vec<(f64, PyExtendedCdf)>) -> PyResult<Self> {
        let entries = kernels.into_iter().map(|(x, g)| (x, g.0)).collect();
        core::LotteryKernel::new(alternatives, entries)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn alternatives(&self) -> Vec<f64> {
        self.0.alternatives().to_vec()
    }

    /// `x ↦ ∫ v dG_x`.
    fn effective(&self, v: &PyRiskAttitude) -> PyResult<PyRiskAttitude> {
        self.0.effective(&v.0).map(PyRiskAttitude).map_err(err)
    }
}

#[pyfunction]
fn effective_utility(v: &PyRiskAttitude, f: &PyExtendedCdf) -> PyRiskAttitude {
    PyRiskAttitude(core::effective_utility(&v.0, &f.0))
}

/// Dict with keys `F` (an `ExtendedCdf`), `alpha`, `beta`, `lambda`,
/// `concentrated`. Raises `NotLessRiskAverse` with the violating triple.
#[pyfunction]
#[pyo3(signature = (u, v, tol = 1e-9))]
fn identify_f<'py>(
    py: Python<'py>,
    u: &PyRiskAttitude,
    v: &PyRiskAttitude,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let id = core::identify_f(&u.0, &v.0, tol).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("F", PyExtendedCdf(id.f).into_pyobject(py)?)?;
    d.set_item("alpha", id.alpha)?;
    d.set_item("beta", id.beta)?;
    d.set_item("lambda", id.lambda)?;
    d.set_item("concentrated", id.concentrated)?;
    Ok(d.into_any())
}

#[pyfunction]
#[pyo3(signature = (u, v, tol = 1e-9))]
fn less_risk_averse(u: &PyRiskAttitude, v: &PyRiskAttitude, tol: f64) -> PyResult<bool> {
    core::less_risk_averse_crossratio(&u.0, &v.0, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (u, v, trials = 500, seed = 0, tol = 1e-9))]
fn less_risk_averse_oracle<'py>(
    py: Python<'py>,
    u: &PyRiskAttitude,
    v: &PyRiskAttitude,
    trials: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = core::less_risk_averse_oracle(&u.0, &v.0, trials, seed, tol).map_err(err)?;
    to_py(py, &r)
}

/// Checks `α u + β = χ_F ∘ v` for some `α > 0`.
#[pyfunction]
#[pyo3(signature = (u, v, f, tol = 1e-9))]
fn verify_representation<'py>(
    py: Python<'py>,
    u: &PyRiskAttitude,
    v: &PyRiskAttitude,
    f: &PyExtendedCdf,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = core::OoRepresentation {
        v: v.0.clone(),
        f: f.0.clone(),
        alpha: 1.0,
        beta: 0.0,
    };
    to_py(
        py,
        &core::verify_representation(&u.0, &rep, tol).map_err(err)?,
    )
}

#[pyfunction]
fn construct_v(u: &PyRiskAttitude, f: &PyExtendedCdf) -> PyResult<PyRiskAttitude> {
    core::construct_v_prop2(&u.0, &f.0)
        .map(PyRiskAttitude)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (v, f, f_hat, tol = 1e-9))]
fn mcs_part_a<'py>(
    py: Python<'py>,
    v: &PyRiskAttitude,
    f: &PyExtendedCdf,
    f_hat: &PyExtendedCdf,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &core::mcs_part_a_check(&v.0, &f.0, &f_hat.0, tol).map_err(err)?,
    )
}

#[pyfunction]
fn cara_effective_rho(sigma: f64, lam: f64, x0: f64) -> PyResult<f64> {
    let spec = core::CaraSpec::new(sigma, lam, x0).map_err(err)?;
    Ok(core::cara_effective_rho(&spec))
}

#[pyfunction]
#[pyo3(signature = (sigma, lam, x0, lo, n = 4001))]
fn cara_numeric_check<'py>(
    py: Python<'py>,
    sigma: f64,
    lam: f64,
    x0: f64,
    lo: f64,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = core::CaraSpec::new(sigma, lam, x0).map_err(err)?;
    to_py(
        py,
        &core::cara_numeric_check(&spec, &core::CaraGrid { lo, n }).map_err(err)?,
    )
}

/// Dict with `decomposable` and either `decomposition` or `failure`.
/// With `withhold_top`, the top alternative's lottery is ignored.
#[pyfunction]
#[pyo3(signature = (kernel, tol = 1e-9, withhold_top = false))]
fn decompose<'py>(
    py: Python<'py>,
    kernel: &PyLotteryKernel,
    tol: f64,
    withhold_top: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let d = pyo3::types::PyDict::new(py);
    let found = if withhold_top {
        core::decompose_withheld_top(&kernel.0, tol)
    } else {
        core::decompose(&kernel.0, tol)
    };
    match found {
        Ok(dec) => {
            d.set_item("decomposable", true)?;
            d.set_item("decomposition", to_py(py, &dec)?)?;
        }
        Err(failure) => {
            d.set_item("decomposable", false)?;
            d.set_item("failure", to_py(py, &failure)?)?;
            d.set_item("message", failure.to_string())?;
        }
    }
    Ok(d.into_any())
}

/// Sampled risk-reduction check compared with decomposability.
#[pyfunction]
#[pyo3(signature = (kernel, samples = 500, seed = 0, tol = 1e-6))]
fn check_kernel<'py>(
    py: Python<'py>,
    kernel: &PyLotteryKernel,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &core::theorem3_agreement(&kernel.0, samples, seed, tol).map_err(err)?,
    )
}

#[pymodule]
fn risklens(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRiskAttitude>()?;
    m.add_class::<PyExtendedCdf>()?;
    m.add_class::<PyLotteryKernel>()?;
    m.add("NotLessRiskAverse", m.py().get_type::<NotLessRiskAverse>())?;
    m.add_function(wrap_pyfunction!(effective_utility, m)?)?;
    m.add_function(wrap_pyfunction!(identify_f, m)?)?;
    m.add_function(wrap_pyfunction!(less_risk_averse, m)?)?;
    m.add_function(wrap_pyfunction!(less_risk_averse_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(verify_representation, m)?)?;
    m.add_function(wrap_pyfunction!(construct_v, m)?)?;
    m.add_function(wrap_pyfunction!(mcs_part_a, m)?)?;
    m.add_function(wrap_pyfunction!(cara_effective_rho, m)?)?;
    m.add_function(wrap_pyfunction!(cara_numeric_check, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(check_kernel, m)?)?;
    Ok(())
}
