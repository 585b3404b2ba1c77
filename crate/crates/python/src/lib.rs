//! Python bindings: `Field`, `PointSet`, and the counting, transform and
//! isotropic-subspace operations. Exact rationals cross the boundary as
//! strings; structured reports as dicts.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ffphi_core::counting::{BoundCase, NuMethod, DEFAULT_PAIR_BUDGET};
use ffphi_core::{self as core, FieldElem, FieldSpec, DEFAULT_POINT_CAP};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Field", frozen, skip_from_py_object, module = "ffphi")]
#[derive(Clone)]
struct PyField {
    inner: Arc<FieldSpec>,
}

impl PyField {
    fn elem(&self, i: u64) -> PyResult<FieldElem> {
        self.inner.try_elem(i).map_err(err)
    }

    fn vector(&self, xs: Vec<u64>) -> PyResult<Vec<FieldElem>> {
        xs.into_iter().map(|x| self.elem(x)).collect()
    }
}

#[pymethods]
impl PyField {
    /// `Field("3^2")`, `Field("9")` or `Field(9)`.
    #[new]
    fn new(q: &Bound<'_, PyAny>) -> PyResult<Self> {
        let spec = if let Ok(n) = q.extract::<u64>() {
            FieldSpec::from_order(n)
        } else {
            FieldSpec::parse(&q.extract::<String>()?)
        };
        Ok(PyField {
            inner: Arc::new(spec.map_err(err)?),
        })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.inner.ell()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.add(self.elem(a)?, self.elem(b)?).index())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.mul(self.elem(a)?, self.elem(b)?).index())
    }

    fn neg(&self, a: u64) -> PyResult<u32> {
        Ok(self.inner.neg(self.elem(a)?).index())
    }

    fn inv(&self, a: u64) -> PyResult<Option<u32>> {
        Ok(self.inner.inv(self.elem(a)?).map(FieldElem::index))
    }

    fn eta(&self, a: u64) -> PyResult<i32> {
        Ok(self.inner.eta(self.elem(a)?))
    }

    fn trace(&self, a: u64) -> PyResult<u32> {
        Ok(self.inner.trace(self.elem(a)?))
    }

    fn norm(&self, v: Vec<u64>) -> PyResult<u32> {
        Ok(self.inner.norm(&self.vector(v)?).index())
    }

    fn sqrt_minus_one(&self) -> Option<u32> {
        self.inner.sqrt_minus_one().map(FieldElem::index)
    }

    fn sum_two_squares_minus_one(&self) -> (u32, u32) {
        let (a, b) = self.inner.sum_two_squares_minus_one();
        (a.index(), b.index())
    }

    /// `G_a` as `(coefficients, denominator exponent)` in the power basis of `Z[zeta_p]`.
    fn gauss_sum(&self, a: u64) -> PyResult<(Vec<String>, u32)> {
        let g = core::gauss_sum(&self.inner, self.elem(a)?).map_err(err)?;
        Ok((
            g.coeffs().iter().map(i128::to_string).collect(),
            g.den_exp(),
        ))
    }

    fn verify_gauss_square(&self) -> bool {
        core::verify_gauss_square(&self.inner)
    }

    fn phi(&self, x: Vec<u64>, y: Vec<u64>) -> PyResult<u32> {
        core::phi(&self.inner, &self.vector(x)?, &self.vector(y)?)
            .map(FieldElem::index)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.inner.designation())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "PointSet", frozen, skip_from_py_object, module = "ffphi")]
#[derive(Clone)]
struct PyPointSet {
    inner: core::PointSet,
}

#[pymethods]
impl PyPointSet {
    #[new]
    fn new(field: &PyField, n: usize, points: Vec<Vec<u64>>) -> PyResult<Self> {
        let pts: Vec<Vec<FieldElem>> = points
            .into_iter()
            .map(|p| {
                if p.len() != n {
                    return Err(PyValueError::new_err(format!(
                        "point of length {} in F_q^{n}",
                        p.len()
                    )));
                }
                field.vector(p)
            })
            .collect::<PyResult<_>>()?;
        let codes = pts.iter().map(|p| core::pointset::encode(&field.inner, p));
        let inner = core::PointSet::from_codes(field.inner.clone(), n, codes).map_err(err)?;
        Ok(PyPointSet { inner })
    }

    #[staticmethod]
    fn random(field: &PyField, n: usize, size: usize, seed: u64) -> PyResult<Self> {
        let sets = core::counting::sample_sets(&field.inner, n, size, 1, seed).map_err(err)?;
        Ok(PyPointSet {
            inner: sets.into_iter().next().expect("one sample"),
        })
    }

    #[staticmethod]
    fn full(field: &PyField, n: usize) -> PyResult<Self> {
        let inner = core::PointSet::full(field.inner.clone(), n, DEFAULT_POINT_CAP).map_err(err)?;
        Ok(PyPointSet { inner })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyPointSet {
            inner: core::PointSet::read(path).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyPointSet {
            inner: core::PointSet::parse(text).map_err(err)?,
        })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        self.inner.write(path).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn points(&self) -> Vec<Vec<u32>> {
        self.inner
            .iter()
            .map(|x| x.iter().map(|e| e.index()).collect())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "PointSet(q={}, n={}, size={})",
            self.inner.field().designation(),
            self.inner.dim(),
            self.inner.len()
        )
    }
}

fn elem_of(e: &core::PointSet, t: u64) -> PyResult<FieldElem> {
    e.field().try_elem(t).map_err(err)
}

#[pyfunction]
fn nu_brute(e: &PyPointSet, t: u64) -> PyResult<u64> {
    core::nu_brute(&e.inner, elem_of(&e.inner, t)?, DEFAULT_PAIR_BUDGET).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (e, t, cap = DEFAULT_POINT_CAP))]
fn nu_fourier(e: &PyPointSet, t: u64, cap: u64) -> PyResult<u64> {
    core::nu_fourier(&e.inner, elem_of(&e.inner, t)?, cap).map_err(err)
}

/// `[nu(0), ..., nu(q-1)]` by the double loop.
#[pyfunction]
fn nu_profile(e: &PyPointSet) -> PyResult<Vec<u64>> {
    Ok(core::nu_profile_brute(&e.inner, DEFAULT_PAIR_BUDGET)
        .map_err(err)?
        .counts)
}

#[pyfunction]
#[pyo3(signature = (e, cap = DEFAULT_POINT_CAP))]
fn phi_image(e: &PyPointSet, cap: u64) -> PyResult<Vec<u32>> {
    Ok(core::phi_image(&e.inner, cap, DEFAULT_PAIR_BUDGET)
        .map_err(err)?
        .into_iter()
        .map(FieldElem::index)
        .collect())
}

/// `sum_m |E^(m)|^2` as an exact rational string.
#[pyfunction]
#[pyo3(signature = (e, cap = DEFAULT_POINT_CAP))]
fn plancherel_sum(e: &PyPointSet, cap: u64) -> PyResult<String> {
    let t = core::dft(&e.inner, cap).map_err(err)?;
    Ok(core::plancherel_sum(&t).to_string())
}

#[pyfunction]
#[pyo3(signature = (e, cap = DEFAULT_POINT_CAP))]
fn inversion_check(e: &PyPointSet, cap: u64) -> PyResult<bool> {
    let t = core::dft(&e.inner, cap).map_err(err)?;
    Ok(core::inversion_check(&e.inner, &t))
}

#[pyfunction]
fn bound_thm_main1(size: u64, q: u32) -> PyResult<String> {
    Ok(core::bound_thm_main1(size, q).map_err(err)?.to_string())
}

/// `case` is `"A"`, `"B"` or `"part2"`.
#[pyfunction]
fn bound_thm_main22(size: u64, q: u32, d: usize, case: &str) -> PyResult<String> {
    let case = match case {
        "A" | "a" => BoundCase::A,
        "B" | "b" => BoundCase::B,
        "part2" | "part-2" => BoundCase::Part2,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown bound case '{other}'"
            )))
        }
    };
    Ok(core::bound_thm_main22(size, q, d, case)
        .map_err(err)?
        .to_string())
}

#[pyfunction]
#[pyo3(signature = (field, n, cap = DEFAULT_POINT_CAP))]
fn verify_s0_ft<'py>(
    py: Python<'py>,
    field: &PyField,
    n: usize,
    cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &core::verify_s0_ft(&field.inner, n, cap).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (field, d, cap = DEFAULT_POINT_CAP))]
fn verify_rt_ft<'py>(
    py: Python<'py>,
    field: &PyField,
    d: usize,
    cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &core::verify_rt_ft(&field.inner, d, cap).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (field, d, sizes, samples, seed, method = "fourier", plant = false, cap = DEFAULT_POINT_CAP))]
#[allow(clippy::too_many_arguments)]
fn threshold_experiment<'py>(
    py: Python<'py>,
    field: &PyField,
    d: usize,
    sizes: Vec<usize>,
    samples: usize,
    seed: u64,
    method: &str,
    plant: bool,
    cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let method = match method {
        "brute" => NuMethod::Brute,
        "fourier" => NuMethod::Fourier,
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    let cfg = core::ThresholdConfig {
        field: field.inner.clone(),
        d,
        sizes,
        samples,
        seed,
        cap,
        method,
        plant,
    };
    let report = py
        .detach(|| core::threshold_experiment(&cfg))
        .map_err(err)?;
    to_dict(py, &report)
}

/// Basis vectors of the explicit maximal totally isotropic subspace.
#[pyfunction]
fn max_isotropic_construct(field: &PyField, n: usize) -> PyResult<Vec<Vec<u32>>> {
    let h = core::max_isotropic_construct(n, &field.inner).map_err(err)?;
    Ok(h.basis()
        .iter()
        .map(|v| v.iter().map(|x| x.index()).collect())
        .collect())
}

#[pyfunction]
#[pyo3(signature = (field, n, cap = DEFAULT_POINT_CAP))]
fn max_isotropic_brute(field: &PyField, n: usize, cap: u64) -> PyResult<usize> {
    core::max_isotropic_brute(n, &field.inner, cap).map_err(err)
}

/// `(points, info)` where `info` holds the claim tag and expected size.
#[pyfunction]
fn sharpness_set<'py>(
    py: Python<'py>,
    field: &PyField,
    d: usize,
) -> PyResult<(PyPointSet, Bound<'py, PyDict>)> {
    let s = core::sharpness_set(&field.inner, d).map_err(err)?;
    let info = PyDict::new(py);
    info.set_item("claim", format!("{:?}", s.claim))?;
    info.set_item("expected_size", s.expected_size)?;
    info.set_item("h_dim", s.h.dim())?;
    Ok((PyPointSet { inner: s.points }, info))
}

/// Builds the sharpness set for `(field, d)` and runs both null checks.
#[pyfunction]
#[pyo3(signature = (field, d, seed = 0))]
fn verify_null<'py>(
    py: Python<'py>,
    field: &PyField,
    d: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let s = core::sharpness_set(&field.inner, d).map_err(err)?;
    let v = py.detach(|| core::verify_null(&s, seed)).map_err(err)?;
    to_dict(py, &v)
}

#[pymodule]
#[pyo3(name = "ffphi")]
fn ffphi_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyPointSet>()?;
    m.add_function(wrap_pyfunction!(nu_brute, m)?)?;
    m.add_function(wrap_pyfunction!(nu_fourier, m)?)?;
    m.add_function(wrap_pyfunction!(nu_profile, m)?)?;
    m.add_function(wrap_pyfunction!(phi_image, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_sum, m)?)?;
    m.add_function(wrap_pyfunction!(inversion_check, m)?)?;
    m.add_function(wrap_pyfunction!(bound_thm_main1, m)?)?;
    m.add_function(wrap_pyfunction!(bound_thm_main22, m)?)?;
    m.add_function(wrap_pyfunction!(verify_s0_ft, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rt_ft, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(max_isotropic_construct, m)?)?;
    m.add_function(wrap_pyfunction!(max_isotropic_brute, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_set, m)?)?;
    m.add_function(wrap_pyfunction!(verify_null, m)?)?;
    m.add("DEFAULT_POINT_CAP", DEFAULT_POINT_CAP)?;
    Ok(())
}
