//! Python bindings. Field elements cross the boundary as their integer encodings.

use std::sync::Arc;

use a1lab::curves::{contact_certificate, pushforward};
use a1lab::dp::{self, expected_cusp_count};
use a1lab::experiments::{self, CensusConfig, SelftestOptions, SigmaChoice};
use a1lab::{BoundarySpec, CurveParams, Error, FamilySpec, Fe, FiberParams, GaloisField, SigmaMode};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(a1lab_py, A1labError, PyException);

fn py_err(e: Error) -> PyErr {
    A1labError::new_err(format!("{}: {}", e.kind(), e))
}

fn enc(v: &[Fe]) -> Vec<u64> {
    v.iter().map(|c| c.encoding()).collect()
}

#[pyclass(name = "Field", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(GaloisField);

impl PyField {
    fn el(&self, n: u64) -> PyResult<Fe> {
        self.0.element(n).map_err(py_err)
    }

    fn els(&self, v: &[u64]) -> PyResult<Vec<Fe>> {
        v.iter().map(|&n| self.el(n)).collect()
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, k, seed = experiments::FIELD_SEED))]
    fn new(p: u64, k: usize, seed: u64) -> PyResult<Self> {
        GaloisField::new(p, k, seed).map(PyField).map_err(py_err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.characteristic()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    fn header(&self) -> String {
        self.0.header()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.0.add(self.el(a)?, self.el(b)?).encoding())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.0.sub(self.el(a)?, self.el(b)?).encoding())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.0.mul(self.el(a)?, self.el(b)?).encoding())
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        self.0.inv(self.el(a)?).map(Fe::encoding).map_err(py_err)
    }

    fn pow(&self, a: u64, e: u64) -> PyResult<u64> {
        Ok(self.0.pow(self.el(a)?, e).encoding())
    }

    fn frobenius(&self, a: u64) -> PyResult<u64> {
        Ok(self.0.frobenius(self.el(a)?).encoding())
    }

    fn pth_root(&self, a: u64) -> PyResult<u64> {
        Ok(self.0.pth_root(self.el(a)?).encoding())
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.header())
    }
}

#[pyclass(name = "Boundary", frozen)]
struct PyBoundary(Arc<BoundarySpec>);

#[pymethods]
impl PyBoundary {
    /// `sigma` is `"random"`, `"special"` or a list of σ_1..σ_{p-1} encodings.
    #[new]
    #[pyo3(signature = (field, sigma = None, seed = 0))]
    fn new(field: &PyField, sigma: Option<&Bound<'_, PyAny>>, seed: u64) -> PyResult<Self> {
        let mode = match sigma {
            None => SigmaMode::Random(seed),
            Some(obj) => match obj.extract::<String>() {
                Ok(s) if s == "random" => SigmaMode::Random(seed),
                Ok(s) if s == "special" => SigmaMode::Special,
                Ok(s) => return Err(py_err(Error::InvalidInput(format!("unknown sigma `{}`", s)))),
                Err(_) => SigmaMode::Explicit(field.els(&obj.extract::<Vec<u64>>()?)?),
            },
        };
        BoundarySpec::new(&field.0, mode)
            .map(|b| PyBoundary(Arc::new(b)))
            .map_err(py_err)
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    #[getter]
    fn sigma(&self) -> Vec<u64> {
        enc(self.0.sigma())
    }

    #[getter]
    fn is_special(&self) -> bool {
        self.0.is_special()
    }

    fn delta_at(&self, x: [u64; 3]) -> PyResult<u64> {
        let f = PyField(self.0.field().clone());
        let pt = [f.el(x[0])?, f.el(x[1])?, f.el(x[2])?];
        Ok(self.0.delta_at(&pt).encoding())
    }

    fn pushforward(&self, v: u64, w: u64) -> PyResult<[u64; 3]> {
        let f = PyField(self.0.field().clone());
        Ok(pushforward(&self.0, f.el(v)?, f.el(w)?).map(Fe::encoding))
    }

    /// Distinct roots of the p-form in the base field.
    fn cusp_census(&self) -> PyResult<usize> {
        self.0.boundary_cusp_census().map(|c| c.count).map_err(py_err)
    }

    fn encode(&self) -> String {
        self.0.encode()
    }

    fn __repr__(&self) -> String {
        format!("Boundary({})", self.0.encode())
    }
}

#[pyclass(name = "Curve", frozen)]
struct PyCurve(CurveParams);

#[pymethods]
impl PyCurve {
    /// Random parameters when `a`, `vroot`, `wroot` are all omitted.
    #[new]
    #[pyo3(signature = (boundary, d, m, a = None, vroot = None, wroot = None, seed = 0))]
    fn new(
        boundary: &PyBoundary,
        d: usize,
        m: usize,
        a: Option<Vec<u64>>,
        vroot: Option<Vec<u64>>,
        wroot: Option<Vec<u64>>,
        seed: u64,
    ) -> PyResult<Self> {
        let b = boundary.0.clone();
        let f = PyField(b.field().clone());
        let params = match (a, vroot, wroot) {
            (None, None, None) => CurveParams::random(b, d, m, false, &mut ChaCha8Rng::seed_from_u64(seed)),
            (Some(a), Some(v), Some(w)) => CurveParams::new(b, d, m, f.els(&a)?, f.els(&v)?, f.els(&w)?),
            _ => Err(Error::InvalidInput("give all of a, vroot, wroot or none".into())),
        };
        params.map(PyCurve).map_err(py_err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn a(&self) -> Vec<u64> {
        enc(self.0.a())
    }

    /// Coefficient encodings of `x0, x1, x2`, lowest degree first.
    fn coordinates(&self) -> PyResult<Vec<Vec<u64>>> {
        let built = self.0.build().map_err(py_err)?;
        Ok(built.x.0.iter().map(|u| enc(u.coeffs())).collect())
    }

    fn eval(&self, t: u64) -> PyResult<[u64; 3]> {
        let built = self.0.build().map_err(py_err)?;
        let f = PyField(self.0.field().clone());
        Ok(built.x.eval(f.el(t)?).map(Fe::encoding))
    }

    /// Checks `Δ(x(t)) = 1`; returns the certificate detail.
    fn contact(&self) -> PyResult<String> {
        let built = self.0.build().map_err(py_err)?;
        contact_certificate(self.0.boundary(), &built.x)
            .map(|c| c.detail)
            .map_err(py_err)
    }
}

#[pyclass(name = "Family", frozen)]
struct PyFamily(Arc<FamilySpec>);

#[pymethods]
impl PyFamily {
    /// The `m = d - p` family with randomly sampled fixed roots.
    #[new]
    #[pyo3(signature = (boundary, d, seed = 0))]
    fn new(boundary: &PyBoundary, d: usize, seed: u64) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FamilySpec::sample(boundary.0.clone(), d, &mut rng)
            .map(|s| PyFamily(Arc::new(s)))
            .map_err(py_err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn gradient_check(&self) -> PyResult<String> {
        self.0.gradient_check().map(|c| c.detail).map_err(py_err)
    }

    #[pyo3(signature = (seed = 0, degenerate = false))]
    fn fiber(&self, seed: u64, degenerate: bool) -> PyFiber {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PyFiber(if degenerate {
            FiberParams::degenerate(self.0.clone(), &mut rng)
        } else {
            FiberParams::random(self.0.clone(), &mut rng)
        })
    }

    /// A fiber meeting every genericity condition; `None` if sampling gives up.
    #[pyo3(signature = (seed = 0))]
    fn general_fiber(&self, seed: u64) -> Option<PyFiber> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        dp::sample_general_fiber(&self.0, &mut rng).ok().map(|g| PyFiber(g.fiber))
    }
}

#[pyclass(name = "Fiber", frozen)]
struct PyFiber(FiberParams);

#[pymethods]
impl PyFiber {
    #[getter]
    fn pi(&self) -> u64 {
        self.0.pi().encoding()
    }

    fn psi(&self) -> String {
        self.0.psi().to_string()
    }

    /// Checks that `Ψ` vanishes on the fiber's parameterization.
    fn psi_pullback(&self) -> PyResult<String> {
        self.0.psi_pullback_zero().map(|c| c.detail).map_err(py_err)
    }

    /// Distinct cusp parameters, `None` when `π = 0`.
    fn cusp_count(&self) -> PyResult<Option<usize>> {
        Ok(self.0.cusp_polynomial().map_err(py_err)?.map(|c| c.count))
    }

    fn curve(&self) -> PyCurve {
        PyCurve(self.0.curve_params())
    }
}

#[pyfunction]
#[pyo3(name = "delta_identity")]
fn py_delta_identity(p: u64, d: usize) -> PyResult<String> {
    dp::delta_identity(p, d).map(|c| c.detail).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "expected_cusp_count")]
fn py_expected_cusp_count(p: u64, d: usize) -> usize {
    expected_cusp_count(p, d)
}

/// Runs the identity suites; returns `(passed, failed)`.
#[pyfunction]
#[pyo3(signature = (p = None, seed = 0))]
fn selftest(py: Python<'_>, p: Option<u64>, seed: u64) -> PyResult<(usize, usize)> {
    let opts = SelftestOptions { p, sigma: None, seed };
    let report = py
        .detach(|| experiments::run_selftest(&opts))
        .map_err(py_err)?;
    Ok((report.summary.passed, report.summary.failed))
}

/// Runs the cusp census and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (p_list, d_max = 10, trials = 40, ext_bits = 12, seed = 0, sigma = "random"))]
fn cusp_census(
    py: Python<'_>,
    p_list: Vec<u64>,
    d_max: usize,
    trials: usize,
    ext_bits: u32,
    seed: u64,
    sigma: &str,
) -> PyResult<String> {
    let config = CensusConfig {
        p_list,
        ext_bits,
        d_max,
        trials,
        seed,
        sigma: sigma.parse::<SigmaChoice>().map_err(py_err)?,
        threads: None,
    };
    let report = py.detach(|| experiments::run_census(&config)).map_err(py_err)?;
    Ok(report.to_json())
}

#[pymodule]
fn a1lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("A1labError", m.py().get_type::<A1labError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyBoundary>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyFiber>()?;
    m.add_function(wrap_pyfunction!(py_delta_identity, m)?)?;
    m.add_function(wrap_pyfunction!(py_expected_cusp_count, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_census, m)?)?;
    Ok(())
}
