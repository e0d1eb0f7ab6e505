//! Benchmark curves and the accuracy / convergence-order experiments.

use serde::{Deserialize, Serialize};

use crate::estimator::{coniccurv_at, curvature_profile, CurvatureStatus, ProfileOptions};
use crate::linalg::singular_values_2x2;
use crate::projective::{Line, PlanePoint};
use crate::reference::{circle_curvature, conic5_curvature, conic5_fit, poly4_curvature};
use crate::tangent::{pascal_construction, pascal_tangent, Polyline};

/// Position, first and second derivative at a parameter value.
pub type Jet = (PlanePoint, PlanePoint, PlanePoint);

/// Parametric test curve with hand-derived derivatives.
#[derive(Clone, Copy)]
pub struct BenchCurve {
    pub name: &'static str,
    pub jet: fn(f64) -> Jet,
    pub t_values: [f64; 5],
}

impl std::fmt::Debug for BenchCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BenchCurve").field("name", &self.name).field("t_values", &self.t_values).finish()
    }
}

impl BenchCurve {
    pub fn position(&self, t: f64) -> PlanePoint {
        (self.jet)(t).0
    }

    pub fn exact_curvature(&self, t: f64) -> f64 {
        let (_, d1, d2) = (self.jet)(t);
        d1.wedge(d2).abs() / d1.dot(d1).powf(1.5)
    }

    pub fn samples(&self) -> [PlanePoint; 5] {
        self.t_values.map(|t| self.position(t))
    }

    /// The five samples plus one extrapolated parameter on each side.
    pub fn extended_samples(&self) -> [PlanePoint; 7] {
        let t = self.t_values;
        let ts = [2.0 * t[0] - t[1], t[0], t[1], t[2], t[3], t[4], 2.0 * t[4] - t[3]];
        ts.map(|s| self.position(s))
    }
}

fn pt(x: f64, y: f64) -> PlanePoint {
    PlanePoint::new(x, y)
}

fn polynomial(t: f64) -> Jet {
    let s = 1.0 - t;
    (pt(t, (1.0 - s.powi(5)) / 5.0), pt(1.0, s.powi(4)), pt(0.0, -4.0 * s.powi(3)))
}

fn witch(t: f64) -> Jet {
    let q = 1.0 + t * t;
    (pt(t, 1.0 / q), pt(1.0, -2.0 * t / (q * q)), pt(0.0, (6.0 * t * t - 2.0) / (q * q * q)))
}

fn folium(t: f64) -> Jet {
    let q = 1.0 + t.powi(3);
    (
        pt(3.0 * t / q, 3.0 * t * t / q),
        pt(3.0 * (1.0 - 2.0 * t.powi(3)) / (q * q), 3.0 * t * (2.0 - t.powi(3)) / (q * q)),
        pt(
            18.0 * t * t * (t.powi(3) - 2.0) / q.powi(3),
            6.0 * (t.powi(6) - 7.0 * t.powi(3) + 1.0) / q.powi(3),
        ),
    )
}

fn bicorn(t: f64) -> Jet {
    let (s, c) = t.sin_cos();
    let g = (4.0 * c - c * c) / (2.0 - c).powi(2);
    (
        pt(s, c * c / (2.0 - c)),
        pt(c, -s * g),
        pt(-s, -c * g + 8.0 * s * s / (2.0 - c).powi(3)),
    )
}

fn tear_drop(t: f64) -> Jet {
    let (s, c) = t.sin_cos();
    (
        pt(c, s * (1.0 - c) / 2.0),
        pt(-s, (c - (2.0 * t).cos()) / 2.0),
        pt(-c, (-s + 2.0 * (2.0 * t).sin()) / 2.0),
    )
}

fn exponential(t: f64) -> Jet {
    let u = t - 0.5;
    let y = (-2.0 * u * u).exp();
    (pt(t, y), pt(1.0, -4.0 * u * y), pt(0.0, (16.0 * u * u - 4.0) * y))
}

fn ellipse(t: f64) -> Jet {
    let (s, c) = t.sin_cos();
    (pt(5.0 * c, 2.0 * s), pt(-5.0 * s, 2.0 * c), pt(-5.0 * c, -2.0 * s))
}

/// Graph of `(1 - t^4)^{1/4}` used by the order experiment.
fn quartic_circle(t: f64) -> Jet {
    let w = 1.0 - t.powi(4);
    (
        pt(t, w.powf(0.25)),
        pt(1.0, -t.powi(3) * w.powf(-0.75)),
        pt(0.0, -3.0 * t * t * w.powf(-1.75)),
    )
}

pub fn bench_curves() -> [BenchCurve; 7] {
    [
        BenchCurve { name: "Polynomial", jet: polynomial, t_values: [0.0, 0.1, 0.2, 0.3, 0.4] },
        BenchCurve { name: "Witch of Agnesi", jet: witch, t_values: [-2.25, -2.0, -1.5, -1.0, -0.75] },
        BenchCurve { name: "Folium of Descartes", jet: folium, t_values: [-0.1, 0.1, 0.3, 0.5, 0.7] },
        BenchCurve { name: "Bicorn", jet: bicorn, t_values: [0.139, 0.278, 0.417, 0.556, 0.626] },
        BenchCurve { name: "Tear Drop", jet: tear_drop, t_values: [1.867, 1.934, 2.0, 2.034, 2.067] },
        BenchCurve { name: "Exponential", jet: exponential, t_values: [0.2, 0.4, 0.5, 0.8, 0.9] },
        BenchCurve { name: "Ellipse", jet: ellipse, t_values: [0.539, 0.843, 1.222, 1.6, 1.904] },
    ]
}

pub fn bench_curve(name: &str) -> Option<BenchCurve> {
    let key = name.to_ascii_lowercase().replace([' ', '-', '_'], "");
    bench_curves().into_iter().find(|c| {
        let n = c.name.to_ascii_lowercase().replace(' ', "");
        n == key || n.split("of").next() == Some(key.as_str())
    })
}

pub fn order_curve() -> BenchCurve {
    BenchCurve { name: "Quartic circle", jet: quartic_circle, t_values: [0.0; 5] }
}

/// Relative errors at `t_3` for one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub curve: String,
    pub circle: f64,
    pub poly4: f64,
    pub conic: f64,
    pub coniccurv: f64,
}

fn rel_err(est: f64, exact: f64) -> f64 {
    ((est - exact) / exact).abs()
}

/// ConicCurv built from the five samples alone, tangents at `P2..P4` taken
/// from the boundary-reordered 5-point stencils. Every reordering recovers the
/// unique conic through the five samples, so this equals the Conic method.
pub fn coniccurv_five_point(p: &[PlanePoint; 5]) -> Option<f64> {
    let pl = Polyline::open(p.to_vec()).ok()?;
    let opts = ProfileOptions { assume_convex: true, ..Default::default() };
    let r = curvature_profile(&pl, opts)[2];
    (r.status == CurvatureStatus::Ok).then_some(r.kappa_avg)
}

pub fn table2_row(curve: &BenchCurve) -> Table2Row {
    let p = curve.samples();
    let exact = curve.exact_curvature(curve.t_values[2]);
    let circle = circle_curvature(p[1], p[2], p[3]).unwrap_or(0.0);
    let poly4 = poly4_curvature(&p).unwrap_or(f64::NAN);
    let conic = conic5_fit(&p)
        .ok()
        .and_then(|(c, _)| conic5_curvature(&c, p[2]).ok())
        .unwrap_or(f64::NAN);
    let cc = coniccurv_at(&curve.extended_samples()).kappa_avg;
    Table2Row {
        curve: curve.name.to_string(),
        circle: rel_err(circle, exact),
        poly4: rel_err(poly4, exact),
        conic: rel_err(conic, exact),
        coniccurv: rel_err(cc, exact),
    }
}

pub fn run_table2() -> Vec<Table2Row> {
    bench_curves().iter().map(table2_row).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub k: usize,
    pub h: f64,
    pub cond: f64,
    pub re: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderExperimentResult {
    pub records: Vec<OrderRecord>,
    pub cond_slope: f64,
    pub re_slope: f64,
}

pub const ORDER_CENTER: f64 = 0.7093;
pub const ORDER_LEVELS: usize = 8;
/// First level entering the slope fits.
pub const ORDER_FIT_FROM: usize = 2;

pub fn order_step(k: usize) -> f64 {
    0.4 / ((k + 2) as f64).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn uniform(curve: &BenchCurve, center: f64, h: f64, n: usize) -> Vec<PlanePoint> {
    (0..n)
        .map(|i| {
            let s = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            curve.position(center + h * s)
        })
        .collect()
}

fn line_condition(l1: Line, l2: Line) -> f64 {
    let [a1, b1, _] = l1.coefficients();
    let [a2, b2, _] = l2.coefficients();
    let (smax, smin) = singular_values_2x2(a1, b1, a2, b2);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

fn fit(records: Vec<OrderRecord>) -> OrderExperimentResult {
    let tail = &records[ORDER_FIT_FROM..];
    let h: Vec<f64> = tail.iter().map(|r| r.h).collect();
    let cond: Vec<f64> = tail.iter().map(|r| r.cond).collect();
    let re: Vec<f64> = tail.iter().map(|r| r.re).collect();
    OrderExperimentResult {
        cond_slope: loglog_slope(&h, &cond),
        re_slope: loglog_slope(&h, &re),
        records,
    }
}

/// Conic (5 points) and ConicCurv (7 points) on shrinking intervals around
/// `t_3`; returns `(conic, coniccurv)`.
pub fn run_order_experiment() -> (OrderExperimentResult, OrderExperimentResult) {
    let curve = order_curve();
    let exact = curve.exact_curvature(ORDER_CENTER);
    let centre = curve.position(ORDER_CENTER);
    let mut conic = Vec::new();
    let mut cc = Vec::new();
    for k in 0..ORDER_LEVELS {
        let h = order_step(k);

        let p5: [PlanePoint; 5] = uniform(&curve, ORDER_CENTER, h, 5).try_into().expect("five points");
        let (c, cond) = conic5_fit(&p5).expect("order samples are in general position");
        let kc = conic5_curvature(&c, centre).expect("regular point");
        conic.push(OrderRecord { k, h, cond, re: rel_err(kc, exact) });

        let p7: [PlanePoint; 7] = uniform(&curve, ORDER_CENTER, h, 7).try_into().expect("seven points");
        let constructions: Vec<_> = (0..3)
            .map(|s| {
                let st: [PlanePoint; 5] = p7[s..s + 5].try_into().expect("five points");
                pascal_construction(&st).expect("order samples are in general position")
            })
            .collect();
        // a_i and b_{i-1} solve the same system; the max over all is the max
        // over the nine distinct ones.
        let mut cond_cc: f64 = 0.0;
        for c in &constructions {
            for (l1, l2) in c.meets {
                cond_cc = cond_cc.max(line_condition(l1, l2));
            }
        }
        for w in constructions.windows(2) {
            cond_cc = cond_cc.max(line_condition(w[0].tangent, w[1].tangent));
        }
        let kcc = coniccurv_at(&p7).kappa_avg;
        cc.push(OrderRecord { k, h, cond: cond_cc, re: rel_err(kcc, exact) });
    }
    (fit(conic), fit(cc))
}

/// Angular tangent error of the five-point Pascal construction at
/// `center` for each level `h_k`; returns `(h, error)` pairs and the fitted
/// slope over `k >= 2`.
pub fn run_tangent_order(curve: &BenchCurve, center: f64) -> (Vec<(f64, f64)>, f64) {
    let (_, d, _) = (curve.jet)(center);
    let d = d * (1.0 / d.norm());
    let rows: Vec<(f64, f64)> = (0..ORDER_LEVELS)
        .map(|k| {
            let h = order_step(k);
            let p: [PlanePoint; 5] = uniform(curve, center, h, 5).try_into().expect("five points");
            let r = pascal_tangent(&p).map(|l| l.direction()).unwrap_or(PlanePoint::new(f64::NAN, f64::NAN));
            (h, r.wedge(d).abs().min(1.0).asin())
        })
        .collect();
    let tail = &rows[ORDER_FIT_FROM..];
    let h: Vec<f64> = tail.iter().map(|r| r.0).collect();
    let e: Vec<f64> = tail.iter().map(|r| r.1).collect();
    (rows.clone(), loglog_slope(&h, &e))
}
