//! Comparison estimators: osculating circle, quartic interpolant, 5-point conic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{spectral_condition, SmallMatrix};
use crate::projective::{is_collinear, signed_area, PlanePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("points are collinear")]
    CollinearPoints,
    #[error("interpolant has zero speed at the middle node")]
    ZeroSpeed,
    #[error("conic system is singular")]
    SingularSystem,
    #[error("conic gradient vanishes at the evaluation point")]
    SingularPoint,
}

/// Inverse circumradius. Collinear points give `Err(CollinearPoints)`;
/// callers treat that as zero curvature.
pub fn circle_curvature(p1: PlanePoint, p2: PlanePoint, p3: PlanePoint) -> Result<f64, ReferenceError> {
    if is_collinear(p1, p2, p3) {
        return Err(ReferenceError::CollinearPoints);
    }
    let prod = p1.distance(p2) * p2.distance(p3) * p1.distance(p3);
    Ok(4.0 * signed_area(p1, p2, p3).abs() / prod)
}

/// Chebyshev nodes `cos((5 - 2j) pi / 10)`, `j = -2..=2`, ascending.
pub fn chebyshev_nodes() -> [f64; 5] {
    let c = |j: i32| ((5 - 2 * j) as f64 * std::f64::consts::PI / 10.0).cos();
    let mut u = [c(-2), c(-1), c(0), c(1), c(2)];
    u[2] = 0.0;
    u
}

/// Degree-4 parametric interpolant in monomial form, `q(u) = sum c_k u^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly4Interpolant {
    pub nodes: [f64; 5],
    pub cx: [f64; 5],
    pub cy: [f64; 5],
}

impl Poly4Interpolant {
    pub fn new(p: &[PlanePoint; 5]) -> Self {
        let nodes = chebyshev_nodes();
        let mut cx = [0.0; 5];
        let mut cy = [0.0; 5];
        for j in 0..5 {
            // Lagrange basis polynomial for node j, built factor by factor.
            let mut coef = [0.0; 5];
            coef[0] = 1.0;
            let mut denom = 1.0;
            let mut deg = 0;
            for (m, &um) in nodes.iter().enumerate() {
                if m == j {
                    continue;
                }
                for k in (0..=deg).rev() {
                    coef[k + 1] += coef[k];
                    coef[k] *= -um;
                }
                deg += 1;
                denom *= nodes[j] - um;
            }
            for k in 0..5 {
                cx[k] += p[j].x * coef[k] / denom;
                cy[k] += p[j].y * coef[k] / denom;
            }
        }
        Poly4Interpolant { nodes, cx, cy }
    }

    pub fn eval(&self, u: f64) -> PlanePoint {
        let h = |c: &[f64; 5]| c.iter().rev().fold(0.0, |acc, &v| acc * u + v);
        PlanePoint::new(h(&self.cx), h(&self.cy))
    }

    /// Curvature magnitude at `u = 0`.
    pub fn curvature_at_middle(&self) -> Result<f64, ReferenceError> {
        let (x1, y1) = (self.cx[1], self.cy[1]);
        let (x2, y2) = (2.0 * self.cx[2], 2.0 * self.cy[2]);
        let speed2 = x1 * x1 + y1 * y1;
        let scale = self.cx.iter().chain(&self.cy).fold(0.0f64, |m, v| m.max(v.abs()));
        if !(speed2.sqrt() > 1e-13 * scale) {
            return Err(ReferenceError::ZeroSpeed);
        }
        Ok((x1 * y2 - y1 * x2).abs() / speed2.powf(1.5))
    }
}

pub fn poly4_curvature(p: &[PlanePoint; 5]) -> Result<f64, ReferenceError> {
    Poly4Interpolant::new(p).curvature_at_middle()
}

/// `a x^2 + b xy + c y^2 + d x + e y + f = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicitConic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl ImplicitConic {
    pub fn eval(&self, p: PlanePoint) -> f64 {
        let (x, y) = (p.x, p.y);
        self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.f
    }

    pub fn coefficients(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// The same conic in coordinates where `origin` maps to zero, expressed
    /// back in the original frame (inverse of a translation by `-origin`).
    fn untranslate(shifted: [f64; 5], origin: PlanePoint) -> ImplicitConic {
        let [a, b, c, d, e] = shifted;
        let (h, k) = (origin.x, origin.y);
        ImplicitConic {
            a,
            b,
            c,
            d: d - 2.0 * a * h - b * k,
            e: e - b * h - 2.0 * c * k,
            f: a * h * h + b * h * k + c * k * k - d * h - e * k + 1.0,
        }
    }
}

fn conic_system(p: &[PlanePoint; 5], origin: PlanePoint) -> SmallMatrix {
    let rows: Vec<Vec<f64>> = p
        .iter()
        .map(|&q| {
            let (x, y) = (q.x - origin.x, q.y - origin.y);
            vec![x * x, x * y, y * y, x, y]
        })
        .collect();
    SmallMatrix::from_rows(&rows).expect("five finite rows of length five")
}

/// Conic through five points with the normalization `f = 1`. When the conic
/// passes through the origin the system is singular; it is then solved in a
/// frame centred at the centroid (and, failing that, at a point offset by the
/// point spread) and translated back. The condition number belongs to the
/// system actually solved.
pub fn conic5_fit(p: &[PlanePoint; 5]) -> Result<(ImplicitConic, f64), ReferenceError> {
    let centroid = p.iter().fold(PlanePoint::default(), |acc, &q| acc + q) * 0.2;
    let spread = p.iter().map(|&q| q.distance(centroid)).fold(0.0, f64::max);
    let origins = [
        PlanePoint::default(),
        centroid,
        centroid + PlanePoint::new(spread, 0.5 * spread),
    ];
    for origin in origins {
        let m = conic_system(p, origin);
        if let Ok(s) = m.solve(&[-1.0; 5]) {
            let conic = ImplicitConic::untranslate([s[0], s[1], s[2], s[3], s[4]], origin);
            return Ok((conic, spectral_condition(&m)));
        }
    }
    Err(ReferenceError::SingularSystem)
}

pub fn conic5_curvature(conic: &ImplicitConic, at: PlanePoint) -> Result<f64, ReferenceError> {
    let ImplicitConic { a, b, c, d, e, .. } = *conic;
    let fx = 2.0 * a * at.x + b * at.y + d;
    let fy = b * at.x + 2.0 * c * at.y + e;
    let (fxx, fxy, fyy) = (2.0 * a, b, 2.0 * c);
    let g2 = fx * fx + fy * fy;
    let scale = a.abs() + b.abs() + c.abs() + d.abs() + e.abs();
    if !(g2.sqrt() > 1e-14 * scale) {
        return Err(ReferenceError::SingularPoint);
    }
    Ok((fx * fx * fyy - 2.0 * fx * fy * fxy + fy * fy * fxx).abs() / g2.powf(1.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y)
    }

    fn on_circle(r: f64, deg: f64) -> PlanePoint {
        let t = deg.to_radians();
        p(r * t.cos(), r * t.sin())
    }

    #[test]
    fn circle_examples() {
        let k = circle_curvature(on_circle(1.0, 10.0), on_circle(1.0, 80.0), on_circle(1.0, 200.0)).unwrap();
        assert!((k - 1.0).abs() < 1e-14);
        let k = circle_curvature(on_circle(5.0, 0.0), on_circle(5.0, 30.0), on_circle(5.0, 45.0)).unwrap();
        assert!((k - 0.2).abs() < 1e-14);
        assert_eq!(
            circle_curvature(p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0)),
            Err(ReferenceError::CollinearPoints)
        );
    }

    #[test]
    fn nodes_ascend() {
        let u = chebyshev_nodes();
        assert!(u.windows(2).all(|w| w[0] < w[1]));
        assert!((u[0] + 0.9510565162951535).abs() < 1e-15);
        assert!((u[3] - 0.5877852522924731).abs() < 1e-15);
        assert_eq!(u[2], 0.0);
    }

    #[test]
    fn poly4_examples() {
        let line = [0.0, 1.0, 2.0, 3.0, 4.0].map(|t| p(t, 2.0 * t - 1.0));
        assert!(poly4_curvature(&line).unwrap() < 1e-15);
        let pts = [0.3, 1.1, 2.0, 2.4, 3.9].map(|t: f64| p(t.cos(), t.sin() * 3.0));
        let q = Poly4Interpolant::new(&pts);
        for (j, &u) in q.nodes.iter().enumerate() {
            assert!(q.eval(u).distance(pts[j]) < 1e-12);
        }
        assert_eq!(poly4_curvature(&[p(1.0, 1.0); 5]), Err(ReferenceError::ZeroSpeed));
    }

    #[test]
    fn conic5_recovers_circle() {
        let pts = [0.0, 50.0, 130.0, 200.0, 300.0].map(|d| on_circle(2.0, d));
        let (c, cond) = conic5_fit(&pts).unwrap();
        let s = c.a;
        let expected = [1.0, 0.0, 1.0, 0.0, 0.0, -4.0];
        for (got, want) in c.coefficients().iter().zip(expected) {
            assert!((got / s - want).abs() < 1e-12);
        }
        assert!(cond >= 1.0 && cond.is_finite());
        assert!((conic5_curvature(&c, pts[1]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn conic5_through_origin_recenters() {
        let f = |t: f64| p(t, t * t + 0.5 * t);
        let pts = [-1.0, -0.5, 0.0, 0.5, 1.0].map(f);
        let (c, _) = conic5_fit(&pts).unwrap();
        for q in pts {
            assert!(c.eval(q).abs() < 1e-12);
        }
        // y = x^2 + x/2 has curvature 2/(1+1/4)^{3/2} at the origin.
        let k = conic5_curvature(&c, p(0.0, 0.0)).unwrap();
        assert!((k - 2.0 / 1.25f64.powf(1.5)).abs() < 1e-10);
    }

    #[test]
    fn conic5_ellipse_curvature() {
        let f = |t: f64| p(5.0 * t.cos(), 2.0 * t.sin());
        let pts = [0.698, 0.873, 1.222, 1.396, 1.571].map(f);
        let (c, _) = conic5_fit(&pts).unwrap();
        let t: f64 = 1.222;
        let exact = 10.0 / (25.0 * t.sin().powi(2) + 4.0 * t.cos().powi(2)).powf(1.5);
        assert!(((conic5_curvature(&c, f(t)).unwrap() - exact) / exact).abs() < 1e-10);
        let unit = c.a / (1.0 / 25.0);
        assert!((c.c / unit - 0.25).abs() < 1e-10 && (c.f / unit + 1.0).abs() < 1e-10);
    }

    #[test]
    fn unit_circle_gradient() {
        let c = ImplicitConic { a: 1.0, b: 0.0, c: 1.0, d: 0.0, e: 0.0, f: -1.0 };
        assert!((conic5_curvature(&c, p(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(conic5_curvature(&c, p(0.0, 0.0)), Err(ReferenceError::SingularPoint));
    }
}
