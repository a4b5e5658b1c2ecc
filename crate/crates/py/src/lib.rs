use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use fgl_core::chromatic::{kn_group_law, kn_p_series};
use fgl_core::formal_group::{fgl_honda, fgl_multiplicative, special_lubin_tate, FormalGroupLaw};
use fgl_core::lubin_tate::{period_valuations, LtTower};
use fgl_core::padic::descriptor::{FieldDescriptor, PrecisionProfile};
use fgl_core::padic::scalar::fmt_q;
use fgl_core::padic::FieldCtx;
use fgl_core::ring::{Valued, Q};
use fgl_core::suites::run_suite as core_run_suite;
use fgl_core::thh::orientation_composite;
use fgl_core::Error;
use rand::SeedableRng;

fn err(e: Error) -> PyErr {
    if e.is_precision() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A local field given by a descriptor, built at the working precision of a profile.
#[pyclass(name = "Field", frozen)]
struct PyField {
    desc: FieldDescriptor,
    profile: PrecisionProfile,
    ctx: Arc<FieldCtx>,
}

impl PyField {
    fn make(desc: FieldDescriptor, n_digits: i64, degree: usize) -> PyResult<Self> {
        let profile = PrecisionProfile::new(desc.p, n_digits, degree).map_err(err)?;
        let ctx = desc.build(profile.working_cap()).map_err(err)?;
        Ok(PyField { desc, profile, ctx })
    }
}

#[pymethods]
impl PyField {
    /// `Q_p`.
    #[staticmethod]
    #[pyo3(signature = (p, n_digits = 64, degree = 40))]
    fn qp(p: u64, n_digits: i64, degree: usize) -> PyResult<Self> {
        Self::make(FieldDescriptor::qp(p), n_digits, degree)
    }

    /// From descriptor JSON text.
    #[staticmethod]
    #[pyo3(signature = (text, n_digits = 64, degree = 40))]
    fn from_json(text: &str, n_digits: i64, degree: usize) -> PyResult<Self> {
        Self::make(FieldDescriptor::parse(text).map_err(err)?, n_digits, degree)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.desc.p
    }

    #[getter]
    fn e(&self) -> usize {
        self.ctx.e
    }

    #[getter]
    fn f(&self) -> usize {
        self.ctx.f
    }

    #[getter]
    fn label(&self) -> String {
        self.ctx.label.clone()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.profile.trunc_degree
    }

    #[getter]
    fn n_digits(&self) -> i64 {
        self.profile.n_digits
    }

    /// Valuations of the period, different and twist.
    fn period_valuations(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let (r, _) = period_valuations(&self.ctx).map_err(err)?;
        to_py(py, &serde_json::to_value(&r).unwrap())
    }

    /// Run a certificate suite; returns the report as a dict.
    #[pyo3(signature = (name, timing = false))]
    fn certify(&self, py: Python<'_>, name: &str, timing: bool) -> PyResult<Py<PyAny>> {
        let r = core_run_suite(name, &self.desc, &self.profile, timing).map_err(err)?;
        to_py(py, &serde_json::to_value(&r).unwrap())
    }

    /// The orientation composite with its certificates.
    fn orient(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let t = LtTower::new(&self.ctx, self.profile.trunc_degree).map_err(err)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0e1e);
        let (chain, certs) = orientation_composite(&t, Q::from_integer(self.profile.n_digits), &mut rng).map_err(err)?;
        to_py(py, &chain.to_json(&certs))
    }

    fn __repr__(&self) -> String {
        format!("Field({}, p={}, e={}, f={})", self.ctx.label, self.desc.p, self.ctx.e, self.ctx.f)
    }
}

/// A one-dimensional formal group law with its logarithm and exponential.
#[pyclass(name = "FormalGroupLaw", frozen)]
struct PyLaw {
    law: FormalGroupLaw,
    n: Q,
}

fn ords(s: &fgl_core::series::Series<fgl_core::padic::Elem>) -> Vec<Option<String>> {
    s.coeffs().iter().map(|c| c.ord().map(|q| fmt_q(&q))).collect()
}

#[pymethods]
impl PyLaw {
    #[staticmethod]
    fn multiplicative(field: &PyField) -> PyResult<Self> {
        let law = fgl_multiplicative(&field.ctx, field.profile.trunc_degree).map_err(err)?;
        Ok(PyLaw { law, n: Q::from_integer(field.profile.n_digits) })
    }

    /// The Lubin-Tate law with `[π](T) = πT + T^q`.
    #[staticmethod]
    fn lubin_tate(field: &PyField) -> PyResult<Self> {
        let law = special_lubin_tate(&field.ctx, field.profile.trunc_degree).map_err(err)?;
        Ok(PyLaw { law, n: Q::from_integer(field.profile.n_digits) })
    }

    #[staticmethod]
    fn honda(field: &PyField) -> PyResult<Self> {
        let law = fgl_honda(&field.ctx, field.profile.trunc_degree).map_err(err)?;
        Ok(PyLaw { law, n: Q::from_integer(field.profile.n_digits) })
    }

    #[getter]
    fn label(&self) -> String {
        self.law.label.clone()
    }

    /// `ord_p` of each log coefficient (None for zero).
    fn log_valuations(&self) -> Vec<Option<String>> {
        ords(&self.law.log)
    }

    fn exp_valuations(&self) -> Vec<Option<String>> {
        ords(&self.law.exp)
    }

    /// `ord_p` of each coefficient of `[p]`.
    fn p_series_valuations(&self) -> PyResult<Vec<Option<String>>> {
        let p = self.law.proto().ctx().p;
        Ok(ords(&self.law.p_series(p).map_err(err)?))
    }

    fn is_integral(&self) -> bool {
        self.law.integrality().passed()
    }

    /// Axioms and log/exp inversion certificates.
    fn certificates(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let mut c = self.law.axioms(fgl_core::formal_group::DIRECT_LIMIT, self.n);
        c.push(self.law.log_exp_inverse(self.n));
        c.push(self.law.integrality());
        to_py(py, &serde_json::to_value(&c).unwrap())
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.law.to_json(&[]))
    }

    fn __repr__(&self) -> String {
        format!("FormalGroupLaw({}, D={})", self.law.label, self.law.degree())
    }
}

/// The k(n) law and its `[p]`-series with certificates.
#[pyfunction]
#[pyo3(signature = (p, n, degree = None, n_digits = 64))]
fn kn_law(py: Python<'_>, p: u64, n: u32, degree: Option<usize>, n_digits: i64) -> PyResult<Py<PyAny>> {
    let q = (p as usize).checked_pow(n).ok_or_else(|| PyValueError::new_err("p^n overflows"))?;
    let d = degree.unwrap_or(q + 3);
    let pr = PrecisionProfile::new(p, n_digits, d).map_err(err)?;
    let qp = FieldCtx::qp(p, pr.working_cap());
    let prec = Q::from_integer(n_digits);
    let (f, mut certs) = kn_group_law(&qp, n, d, prec).map_err(err)?;
    let s = kn_p_series(&f, p, q, prec).map_err(err)?;
    certs.extend(s.certificates.iter().cloned());
    let v = serde_json::json!({"law": f.to_json(&[]), "p_series": s.integral.to_json(), "certificates": certs});
    to_py(py, &v)
}

#[pymodule]
fn fgl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyLaw>()?;
    m.add_function(wrap_pyfunction!(kn_law, m)?)?;
    Ok(())
}
