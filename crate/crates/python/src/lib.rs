//! Python bindings. Points cross the boundary as `(x, y)` tuples.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use coniccurv::bench;
use coniccurv::energy::{self as subdiv, ExactParametric, FourPoint};
use coniccurv::{self as cc, PlanePoint};

fn pts(v: &[(f64, f64)]) -> Vec<PlanePoint> {
    v.iter().map(|&(x, y)| PlanePoint::new(x, y)).collect()
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fixed<const N: usize>(v: &[(f64, f64)]) -> PyResult<[PlanePoint; N]> {
    pts(v).try_into().map_err(|_| value_err(format!("expected exactly {N} points, got {}", v.len())))
}

#[pyclass(name = "CurvatureRecord", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCurvatureRecord {
    index: usize,
    kappa_left: f64,
    kappa_right: f64,
    kappa_avg: f64,
    sign: i8,
    status: String,
    reduced: bool,
}

#[pymethods]
impl PyCurvatureRecord {
    fn signed_kappa(&self) -> f64 {
        self.sign as f64 * self.kappa_avg
    }

    fn __repr__(&self) -> String {
        format!(
            "CurvatureRecord(index={}, kappa_avg={:?}, sign={}, status='{}')",
            self.index, self.kappa_avg, self.sign, self.status
        )
    }
}

impl From<cc::CurvatureRecord> for PyCurvatureRecord {
    fn from(r: cc::CurvatureRecord) -> Self {
        PyCurvatureRecord {
            index: r.index,
            kappa_left: r.kappa_left,
            kappa_right: r.kappa_right,
            kappa_avg: r.kappa_avg,
            sign: r.sign,
            status: r.status.as_str().to_string(),
            reduced: r.reduced,
        }
    }
}

#[pyclass(name = "CornerReport", get_all, frozen)]
struct PyCornerReport {
    corner_index: usize,
    corner_alpha: f64,
    local_maxima: Vec<usize>,
    records: Vec<PyCurvatureRecord>,
}

#[pymethods]
impl PyCornerReport {
    fn __repr__(&self) -> String {
        format!("CornerReport(corner_index={}, local_maxima={:?})", self.corner_index, self.local_maxima)
    }
}

/// Tangent line `(a, b, c)` at the middle of five points.
#[pyfunction]
fn pascal_tangent(points: Vec<(f64, f64)>) -> PyResult<(f64, f64, f64)> {
    let line = cc::pascal_tangent(&fixed::<5>(&points)?).map_err(value_err)?;
    let [a, b, c] = line.coefficients();
    Ok((a, b, c))
}

#[pyfunction]
fn circle_curvature(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64)) -> PyResult<f64> {
    let [a, b, c] = fixed::<3>(&[p1, p2, p3])?;
    coniccurv::reference::circle_curvature(a, b, c).map_err(value_err)
}

/// ConicCurv at the centre of seven samples.
#[pyfunction]
fn coniccurv_at(window: Vec<(f64, f64)>) -> PyResult<PyCurvatureRecord> {
    Ok(cc::coniccurv_at(&fixed::<7>(&window)?).into())
}

#[pyfunction]
#[pyo3(signature = (points, closed = false, assume_convex = false, strict = false))]
fn curvature_profile(
    points: Vec<(f64, f64)>,
    closed: bool,
    assume_convex: bool,
    strict: bool,
) -> PyResult<Vec<PyCurvatureRecord>> {
    let pl = cc::Polyline::new(pts(&points), closed).map_err(value_err)?;
    let small_pieces = if strict { cc::SmallPiecePolicy::Strict } else { cc::SmallPiecePolicy::Reduced };
    let opts = cc::ProfileOptions { assume_convex, small_pieces };
    Ok(cc::curvature_profile(&pl, opts).into_iter().map(Into::into).collect())
}

/// Convex pieces as `(start_index, end_index, turn_sign)`.
#[pyfunction]
#[pyo3(signature = (points, closed = false))]
fn split_convex(points: Vec<(f64, f64)>, closed: bool) -> PyResult<Vec<(usize, usize, i8)>> {
    let pl = cc::Polyline::new(pts(&points), closed).map_err(value_err)?;
    let pieces = cc::split_convex(&pl).map_err(value_err)?;
    Ok(pieces.into_iter().map(|p| (p.start_index, p.end_index, p.turn_sign)).collect())
}

/// Corner of an L-curve given `(alpha, residual_norm, solution_norm)` rows;
/// use `float('nan')` for unknown alphas.
#[pyfunction]
#[pyo3(signature = (samples, assume_convex = true, all_maxima = true))]
fn find_corner(samples: Vec<(f64, f64, f64)>, assume_convex: bool, all_maxima: bool) -> PyResult<PyCornerReport> {
    let samples: Vec<cc::LCurveSample> = samples
        .into_iter()
        .map(|(alpha, residual_norm, solution_norm)| cc::LCurveSample { alpha, residual_norm, solution_norm })
        .collect();
    let r = cc::find_corner(&samples, cc::CornerOptions { assume_convex, all_maxima }).map_err(value_err)?;
    Ok(PyCornerReport {
        corner_index: r.corner_index,
        corner_alpha: r.corner_alpha,
        local_maxima: r.local_maxima,
        records: r.records.into_iter().map(Into::into).collect(),
    })
}

/// Relative errors per benchmark curve as dicts.
#[pyfunction]
fn run_table2(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    bench::run_table2()
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("curve", r.curve)?;
            d.set_item("circle", r.circle)?;
            d.set_item("poly4", r.poly4)?;
            d.set_item("conic", r.conic)?;
            d.set_item("coniccurv", r.coniccurv)?;
            Ok(d)
        })
        .collect()
}

fn order_dict<'py>(py: Python<'py>, r: &bench::OrderExperimentResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("h", r.records.iter().map(|x| x.h).collect::<Vec<_>>())?;
    d.set_item("cond", r.records.iter().map(|x| x.cond).collect::<Vec<_>>())?;
    d.set_item("re", r.records.iter().map(|x| x.re).collect::<Vec<_>>())?;
    d.set_item("cond_slope", r.cond_slope)?;
    d.set_item("re_slope", r.re_slope)?;
    Ok(d)
}

/// `{"conic": {...}, "coniccurv": {...}}` with per-level data and slopes.
#[pyfunction]
fn run_order_experiment(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let (conic, cc) = bench::run_order_experiment();
    let d = PyDict::new(py);
    d.set_item("conic", order_dict(py, &conic)?)?;
    d.set_item("coniccurv", order_dict(py, &cc)?)?;
    Ok(d)
}

/// `(S, E)` after `levels` refinements. Pass three control points for the
/// 4-point scheme, or a benchmark curve name and parameter range for exact
/// refinement.
#[pyfunction]
#[pyo3(signature = (control = None, levels = 4, curve = None, t0 = 1.0, t1 = 2.0))]
fn energy(
    control: Option<Vec<(f64, f64)>>,
    levels: usize,
    curve: Option<String>,
    t0: f64,
    t1: f64,
) -> PyResult<(f64, f64)> {
    let report = match (control, curve) {
        (Some(c), None) => subdiv::energy(&fixed::<3>(&c)?, &FourPoint, levels),
        (None, Some(name)) => {
            let curve = bench::bench_curve(&name).ok_or_else(|| value_err(format!("unknown curve `{name}`")))?;
            let scheme = ExactParametric::new(|t| curve.position(t), vec![t0, 0.5 * (t0 + t1), t1]);
            let c = scheme.control_points();
            subdiv::energy(&[c[0], c[1], c[2]], &scheme, levels)
        }
        _ => return Err(value_err("pass exactly one of `control` or `curve`")),
    }
    .map_err(value_err)?;
    Ok((report.s, report.e))
}

#[pymodule]
fn coniccurv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurvatureRecord>()?;
    m.add_class::<PyCornerReport>()?;
    m.add_function(wrap_pyfunction!(pascal_tangent, m)?)?;
    m.add_function(wrap_pyfunction!(circle_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(coniccurv_at, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_profile, m)?)?;
    m.add_function(wrap_pyfunction!(split_convex, m)?)?;
    m.add_function(wrap_pyfunction!(find_corner, m)?)?;
    m.add_function(wrap_pyfunction!(run_table2, m)?)?;
    m.add_function(wrap_pyfunction!(run_order_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    Ok(())
}
