//! Python bindings. Exact rationals cross the boundary as
//! `fractions.Fraction`, multiplicities as `int`, `Fraction`, strings such as
//! `"3/2"`, or `"inf"`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use orbicalc_cli::SpecDocument;
use orbicalc_core::mordell::{self, Sign};
use orbicalc_core::restrict;
use orbicalc_core::symdiff::{self, EnumerationLimits};
use orbicalc_core::{
    ArrangementComponent, BaseMode, Error, FiberComponent, FibrationData, Multiplicity,
    OrbifoldDivisor, OrbifoldP1Triple, PlaneArrangementPair, Variant,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

/// Accepts an int, a `Fraction`-like object with integer parts, or a string.
fn to_mult(obj: &Bound<'_, PyAny>) -> PyResult<Multiplicity> {
    if let Ok(s) = obj.extract::<String>() {
        return s.parse().map_err(err);
    }
    if let Ok(n) = obj.extract::<BigInt>() {
        return Multiplicity::new(BigRational::from_integer(n)).map_err(err);
    }
    let numer: BigInt = obj.getattr("numerator")?.extract()?;
    let denom: BigInt = obj.getattr("denominator")?.extract()?;
    Multiplicity::new(BigRational::new(numer, denom)).map_err(err)
}

/// `int` for integers, `Fraction` otherwise, `float('inf')` for infinity.
fn from_mult<'py>(py: Python<'py>, m: &Multiplicity) -> PyResult<Bound<'py, PyAny>> {
    match m.finite_value() {
        None => Ok(f64::INFINITY.into_pyobject(py)?.into_any()),
        Some(v) if v.is_integer() => Ok(v.numer().clone().into_pyobject(py)?.into_any()),
        Some(v) => fraction(py, v),
    }
}

fn divisor_dict<'py>(py: Python<'py>, d: &OrbifoldDivisor) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for (label, m) in d.iter() {
        out.set_item(label, from_mult(py, m)?)?;
    }
    Ok(out)
}

/// A compact curve orbifold `(C | Δ)`.
#[pyclass(name = "CurveOrbifold", module = "orbicalc", frozen)]
struct PyCurve(orbicalc_core::CurveOrbifold);

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (genus, marks))]
    fn new(genus: u32, marks: BTreeMap<String, Bound<'_, PyAny>>) -> PyResult<Self> {
        let mut d = OrbifoldDivisor::new();
        for (label, m) in &marks {
            d.insert(label.clone(), to_mult(m)?);
        }
        Ok(PyCurve(orbicalc_core::CurveOrbifold::new(genus, d)))
    }

    /// `(P^1 | m_1, ..., m_k)` with marks labelled `P1..Pk`.
    #[staticmethod]
    fn rational(mults: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let ms = mults.iter().map(to_mult).collect::<PyResult<Vec<_>>>()?;
        Ok(PyCurve(orbicalc_core::CurveOrbifold::rational_with(ms)))
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    fn marks<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        divisor_dict(py, self.0.marks())
    }

    fn canonical_degree<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.canonical_degree())
    }

    /// `"-inf"`, `"0"` or `"1"`.
    fn kappa(&self) -> String {
        self.0.kappa().to_string()
    }

    fn is_special(&self) -> bool {
        self.0.is_special()
    }

    fn is_rational(&self) -> bool {
        self.0.is_rational()
    }

    fn __repr__(&self) -> String {
        format!("CurveOrbifold(genus={}, marks={})", self.0.genus(), self.0.marks())
    }
}

/// `(P^2 | Δ)` for an arrangement given by degrees and multiplicities.
#[pyclass(name = "PlanePair", module = "orbicalc", frozen)]
struct PyPlane(PlaneArrangementPair);

#[pymethods]
impl PyPlane {
    /// `components` is a list of `(label, degree, multiplicity)`.
    #[new]
    fn new(components: Vec<(String, u32, Bound<'_, PyAny>)>) -> PyResult<Self> {
        let comps = components
            .iter()
            .map(|(label, degree, m)| {
                Ok(ArrangementComponent { label: label.clone(), degree: *degree, mult: to_mult(m)? })
            })
            .collect::<PyResult<Vec<_>>>()?;
        PlaneArrangementPair::new(comps).map(PyPlane).map_err(err)
    }

    #[staticmethod]
    fn lines(mults: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let ms = mults.iter().map(to_mult).collect::<PyResult<Vec<_>>>()?;
        Ok(PyPlane(PlaneArrangementPair::lines(ms)))
    }

    fn anticanonical_degree<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.anticanonical_degree())
    }

    fn is_fano(&self) -> bool {
        self.0.is_fano()
    }

    fn family_dimension<'py>(&self, py: Python<'py>, degree: u64) -> PyResult<Bound<'py, PyDict>> {
        let fd = self.0.family_dimension(degree).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("degree", fd.degree)?;
        out.set_item("parameters", fd.parameters)?;
        out.set_item("conditions", fd.conditions)?;
        out.set_item("expected_dim", fd.expected_dim)?;
        out.set_item("identity_holds", fd.identity_holds)?;
        if let Some(pc) = &fd.period_count {
            out.set_item("period", pc.period)?;
            out.set_item("periods", pc.periods)?;
            out.set_item("computed", pc.computed)?;
            out.set_item("naive_3n_minus_1", pc.alternative_3n_minus_1)?;
        }
        Ok(out)
    }
}

/// Fibre data of a fibration over a curve or surface.
#[pyclass(name = "Fibration", module = "orbicalc", frozen)]
struct PyFibration(FibrationData);

#[pymethods]
impl PyFibration {
    /// `fibers` maps each base label to a list of `(t, multiplicity)`.
    #[new]
    fn new(fibers: BTreeMap<String, Vec<(u64, Bound<'_, PyAny>)>>) -> PyResult<Self> {
        let mut data = Vec::new();
        for (label, parts) in &fibers {
            let comps = parts
                .iter()
                .map(|(t, m)| FiberComponent::new(*t, to_mult(m)?).map_err(err))
                .collect::<PyResult<Vec<_>>>()?;
            data.push((label.clone(), comps));
        }
        FibrationData::new(data).map(PyFibration).map_err(err)
    }

    #[pyo3(signature = (label, mode = "inf"))]
    fn base_multiplicity<'py>(&self, py: Python<'py>, label: &str, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let mode: BaseMode = mode.parse().map_err(err)?;
        from_mult(py, &self.0.base_multiplicity(label, mode).map_err(err)?)
    }

    #[pyo3(signature = (mode = "inf"))]
    fn orbifold_base<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyDict>> {
        let mode: BaseMode = mode.parse().map_err(err)?;
        divisor_dict(py, &self.0.orbifold_base(mode).map_err(err)?)
    }
}

/// A parsed spec document; gives access to declarations that need polynomials.
#[pyclass(name = "Spec", module = "orbicalc", frozen)]
struct PySpec(SpecDocument);

#[pymethods]
impl PySpec {
    /// Raises `ValueError` listing every diagnostic on a parse failure.
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        orbicalc_cli::parse(source).map(PySpec).map_err(|ds| {
            let lines: Vec<String> = ds.iter().map(ToString::to_string).collect();
            PyValueError::new_err(lines.join("\n"))
        })
    }

    fn names(&self) -> Vec<String> {
        self.0.decls.iter().map(|d| d.name().to_string()).collect()
    }

    fn curve(&self, name: &str) -> PyResult<PyCurve> {
        let decl = self.0.curve(name).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyCurve(decl.to_curve()))
    }

    fn plane(&self, name: &str) -> PyResult<PyPlane> {
        let decl = self.0.plane(name).map_err(|e| PyValueError::new_err(e.to_string()))?;
        decl.to_pair().map(PyPlane).map_err(err)
    }

    fn fibration(&self, name: &str) -> PyResult<PyFibration> {
        let decl = self.0.fibration(name).map_err(|e| PyValueError::new_err(e.to_string()))?;
        decl.to_data().map(PyFibration).map_err(err)
    }

    /// The arrangement restricted to a parametrized curve, as an orbifold on `P^1`.
    #[pyo3(signature = (curve, against, variant = "Z"))]
    fn restrict(&self, curve: &str, against: &str, variant: &str) -> PyResult<PyCurve> {
        let variant: Variant = variant.parse().map_err(err)?;
        let lookup = |e: orbicalc_cli::document::LookupError| PyValueError::new_err(e.to_string());
        let c = self.0.paramcurve(curve).map_err(lookup)?.to_curve().map_err(err)?;
        let arr = self.0.plane(against).map_err(lookup)?.to_divisor().map_err(err)?;
        let r = restrict::restriction(&c, &arr, variant).map_err(err)?;
        Ok(PyCurve(r.orbifold))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

fn triple(p: u32, q: u32, r: u32) -> PyResult<OrbifoldP1Triple> {
    OrbifoldP1Triple::new(p, q, r).map_err(err)
}

/// Non-classical rational points `a/b` of `(P^1 | (p, q, r))` as `(a, b, c)`.
#[pyfunction]
#[pyo3(signature = (p, q, r, max_a, max_b, sign = "minus", shards = 1))]
fn search_points(
    p: u32,
    q: u32,
    r: u32,
    max_a: u64,
    max_b: u64,
    sign: &str,
    shards: u32,
) -> PyResult<Vec<(BigInt, BigInt, BigInt)>> {
    let sign: Sign = sign.parse().map_err(err)?;
    let pts = mordell::search_points_sharded(&triple(p, q, r)?, max_a, max_b, sign, shards).map_err(err)?;
    Ok(pts.iter().map(|x| (x.a().clone().into(), x.b().clone().into(), x.c(sign))).collect())
}

/// Coprime `(alpha, beta, gamma)` with `alpha^p + beta^r = gamma^q`.
#[pyfunction]
fn search_classical(p: u32, q: u32, r: u32, max_alpha: u64, max_beta: u64) -> PyResult<Vec<(BigInt, BigInt, BigInt)>> {
    let ws = mordell::search_classical(&triple(p, q, r)?, max_alpha, max_beta).map_err(err)?;
    Ok(ws.into_iter().map(|w| (w.alpha, w.beta, w.gamma)).collect())
}

#[pyfunction]
fn is_p_full(n: BigInt, p: u32) -> PyResult<bool> {
    mordell::is_p_full(&n, p).map_err(err)
}

#[pyfunction]
fn enumerate_p_full(limit: u64, p: u32) -> PyResult<Vec<u64>> {
    mordell::enumerate_p_full(limit, p).map_err(err)
}

#[pyfunction]
fn density_report<'py>(py: Python<'py>, limit: u64, p: u32) -> PyResult<Bound<'py, PyDict>> {
    let r = mordell::density_report(limit, p).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("count", r.count)?;
    out.set_item("ratio", r.ratio)?;
    out.set_item("slope", r.slope)?;
    out.set_item("checkpoints", PyList::new(py, &r.checkpoints)?)?;
    Ok(out)
}

/// Exhaustive positive-floor check; returns `(threshold, multi_indices, counterexamples)`.
#[pyfunction]
#[pyo3(signature = (p, q, mults, extra = 1))]
fn check_positive_floor(
    p: u32,
    q: u32,
    mults: Vec<Bound<'_, PyAny>>,
    extra: u32,
) -> PyResult<(u64, u128, Vec<Vec<u64>>)> {
    let ms = mults.iter().map(to_mult).collect::<PyResult<Vec<_>>>()?;
    let r = symdiff::check_positive_floor(p, q, &ms, extra, EnumerationLimits::default()).map_err(err)?;
    let ces = r.counterexamples.iter().map(|j| j.occupancy()).collect();
    Ok((r.threshold, r.multi_indices, ces))
}

/// Runs the command-line front-end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = orbicalc_cli::run(std::iter::once("orbicalc".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn orbicalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyPlane>()?;
    m.add_class::<PyFibration>()?;
    m.add_class::<PySpec>()?;
    m.add_function(wrap_pyfunction!(search_points, m)?)?;
    m.add_function(wrap_pyfunction!(search_classical, m)?)?;
    m.add_function(wrap_pyfunction!(is_p_full, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_p_full, m)?)?;
    m.add_function(wrap_pyfunction!(density_report, m)?)?;
    m.add_function(wrap_pyfunction!(check_positive_floor, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
