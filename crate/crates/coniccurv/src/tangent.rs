//! Tangent lines from five samples via Pascal's theorem.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::projective::{join, meet, Line, PlanePoint, ProjPoint, ProjectiveError, EPS_INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TangentError {
    #[error("degenerate five-point configuration: {0}")]
    DegenerateConfiguration(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolylineError {
    #[error("polyline needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} is not finite")]
    NonFinite(usize),
    #[error("points {0} and {1} coincide")]
    RepeatedPoint(usize, usize),
}

/// Ordered planar samples, open or closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<PlanePoint>,
    closed: bool,
}

impl Polyline {
    pub fn new(points: Vec<PlanePoint>, closed: bool) -> Result<Self, PolylineError> {
        let n = points.len();
        if n < 3 {
            return Err(PolylineError::TooFewPoints(n));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(PolylineError::NonFinite(i));
        }
        for i in 1..n {
            if points[i] == points[i - 1] {
                return Err(PolylineError::RepeatedPoint(i - 1, i));
            }
        }
        if closed && points[0] == points[n - 1] {
            return Err(PolylineError::RepeatedPoint(n - 1, 0));
        }
        Ok(Polyline { points, closed })
    }

    pub fn open(points: Vec<PlanePoint>) -> Result<Self, PolylineError> {
        Self::new(points, false)
    }

    pub fn closed(points: Vec<PlanePoint>) -> Result<Self, PolylineError> {
        Self::new(points, true)
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points, closed: self.closed }
    }

    pub fn map(&self, f: impl Fn(PlanePoint) -> PlanePoint) -> Polyline {
        Polyline {
            points: self.points.iter().map(|&p| f(p)).collect(),
            closed: self.closed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangentStatus {
    Ok,
    Degenerate,
    NotEstimated,
}

/// One tangent line per sample. `reduced[i]` marks stencils that had to
/// reach outside the sample's convex piece.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    pub lines: Vec<Option<Line>>,
    pub status: Vec<TangentStatus>,
    pub reduced: Vec<bool>,
}

impl TangentField {
    pub fn not_estimated(n: usize) -> Self {
        TangentField {
            lines: vec![None; n],
            status: vec![TangentStatus::NotEstimated; n],
            reduced: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Intermediate objects of the Pascal construction, kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PascalConstruction {
    pub a: ProjPoint,
    pub b: ProjPoint,
    pub c: ProjPoint,
    /// The line pairs intersected to obtain `a`, `b` and `c`.
    pub meets: [(Line, Line); 3],
    pub tangent: Line,
}

pub fn pascal_construction(p: &[PlanePoint; 5]) -> Result<PascalConstruction, TangentError> {
    use TangentError::DegenerateConfiguration as D;
    let j = |u: PlanePoint, v: PlanePoint| join(u, v).map_err(|_| D("repeated sample"));
    let m = |l1: Line, l2: Line| meet(l1, l2).map_err(|_| D("identical lines"));

    let (l12, l34) = (j(p[0], p[1])?, j(p[2], p[3])?);
    let a = m(l12, l34)?;
    let (l23, l45) = (j(p[1], p[2])?, j(p[3], p[4])?);
    let b = m(l23, l45)?;
    let l15 = j(p[0], p[4])?;
    let lab = a.join(b).map_err(|_| D("a and b coincide"))?;
    let c = m(l15, lab)?;
    let tangent = c.join(p[2].embed()).map_err(|e| match e {
        ProjectiveError::CoincidentPoints => D("c coincides with the target"),
        ProjectiveError::IdenticalLines => D("identical lines"),
    })?;
    let [ta, tb, tc] = tangent.coefficients();
    if ta.hypot(tb) <= EPS_INF * tc.abs() {
        return Err(D("tangent is the line at infinity"));
    }
    Ok(PascalConstruction {
        a,
        b,
        c,
        meets: [(l12, l34), (l23, l45), (l15, lab)],
        tangent,
    })
}

/// Tangent at `p[2]` of the conic through the five points. The construction
/// runs in a frame centred at `p[2]` and scaled to the stencil radius, so the
/// result does not depend on where the samples sit in the plane.
pub fn pascal_tangent(p: &[PlanePoint; 5]) -> Result<Line, TangentError> {
    let o = p[2];
    let s = p.iter().map(|q| q.distance(o)).fold(0.0, f64::max);
    if !(s > 0.0 && s.is_finite()) {
        return Err(TangentError::DegenerateConfiguration("repeated sample"));
    }
    let local = p.map(|q| (q - o) * (1.0 / s));
    let [a, b, c] = pascal_construction(&local)?.tangent.coefficients();
    Line::from_coefficients(a, b, c * s - a * o.x - b * o.y)
        .ok_or(TangentError::DegenerateConfiguration("tangent is not finite"))
}

/// Indices (into a run of `m >= 5` samples) of the stencil for sample `l`;
/// the target always sits in the middle slot.
pub fn stencil(m: usize, l: usize, closed: bool) -> [usize; 5] {
    debug_assert!(m >= 5 && l < m);
    if closed {
        let w = |d: isize| (l as isize + d).rem_euclid(m as isize) as usize;
        return [w(-2), w(-1), l, w(1), w(2)];
    }
    match l {
        0 => [1, 2, 0, 3, 4],
        1 => [0, 2, 1, 3, 4],
        _ if l == m - 1 => [m - 5, m - 4, m - 1, m - 3, m - 2],
        _ if l == m - 2 => [m - 5, m - 4, m - 2, m - 3, m - 1],
        _ => [l - 2, l - 1, l, l + 1, l + 2],
    }
}

pub(crate) fn tangent_from_stencil(points: &[PlanePoint], idx: [usize; 5]) -> Option<Line> {
    pascal_tangent(&idx.map(|i| points[i])).ok()
}

/// Tangents for a whole polyline treated as a single piece.
pub fn tangent_field(pl: &Polyline) -> TangentField {
    let pts = pl.points();
    let n = pts.len();
    if n < 5 {
        return TangentField::not_estimated(n);
    }
    let mut field = TangentField::not_estimated(n);
    for l in 0..n {
        let line = tangent_from_stencil(pts, stencil(n, l, pl.is_closed()));
        field.status[l] = if line.is_some() { TangentStatus::Ok } else { TangentStatus::Degenerate };
        field.lines[l] = line;
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::signed_area;
    use crate::projective::{normalize, Affine};

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y)
    }

    fn angle_to(line: Line, d: PlanePoint) -> f64 {
        let u = line.direction();
        let d = d * (1.0 / d.norm());
        u.wedge(d).abs().asin()
    }

    #[test]
    fn parabola_vertex_tangent_is_horizontal() {
        let pts = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|x| p(x, x * x));
        let r = pascal_tangent(&pts).unwrap();
        let [a, b, c] = r.coefficients();
        assert!(a.abs() < 1e-15 && c.abs() < 1e-15 && (b.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circle_tangent_is_perpendicular_to_radius() {
        let pts = [10.0f64, 40.0, 60.0, 100.0, 140.0].map(|d| {
            let t = d.to_radians();
            p(t.cos(), t.sin())
        });
        let r = pascal_tangent(&pts).unwrap();
        let [a, b, _] = r.coefficients();
        let n = p(a, b) * (1.0 / a.hypot(b));
        assert!((n.dot(pts[2]).abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn witch_tangent_close_to_analytic() {
        let f = |t: f64| p(t, 1.0 / (1.0 + t * t));
        let df = |t: f64| p(1.0, -2.0 * t / (1.0 + t * t).powi(2));
        let pts = [-2.25, -2.0, -1.5, -1.0, -0.75].map(f);
        let r = pascal_tangent(&pts).unwrap();
        assert!(angle_to(r, df(-1.5)) <= 1e-3);
    }

    #[test]
    fn closed_circle_field() {
        let pts: Vec<_> = (0..8)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 8.0;
                p(t.cos(), t.sin())
            })
            .collect();
        let pl = Polyline::closed(pts.clone()).unwrap();
        let f = tangent_field(&pl);
        for (line, q) in f.lines.iter().zip(&pts) {
            let [a, b, _] = line.unwrap().coefficients();
            let n = p(a, b) * (1.0 / a.hypot(b));
            assert!((n.dot(*q).abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn open_five_point_arc() {
        let f = |t: f64| p(5.0 * t.cos(), 2.0 * t.sin());
        let ts = [0.698, 0.873, 1.222, 1.396, 1.571];
        let pl = Polyline::open(ts.map(f).to_vec()).unwrap();
        let field = tangent_field(&pl);
        assert!(field.status.iter().all(|s| *s == TangentStatus::Ok));
        for (i, &t) in ts.iter().enumerate() {
            let d = p(-5.0 * t.sin(), 2.0 * t.cos());
            assert!(angle_to(field.lines[i].unwrap(), d) < 1e-10, "index {i}");
            assert!(field.lines[i].unwrap().distance_to(pl.points()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_stencils_cover_every_index() {
        for m in 5..12 {
            for l in 0..m {
                let s = stencil(m, l, false);
                assert_eq!(s[2], l);
                let mut sorted = s;
                sorted.sort();
                assert!(sorted.windows(2).all(|w| w[0] < w[1]));
                assert!(sorted[4] - sorted[0] == 4);
            }
        }
    }

    #[test]
    fn pascal_hexagon_is_collinear() {
        let f = |t: f64| p(3.0 * t.cos() + 0.5, 1.5 * t.sin() - 0.2);
        let q: Vec<_> = [0.1, 0.9, 1.7, 2.6, 3.9, 5.1].into_iter().map(f).collect();
        let line = |i: usize, j: usize| join(q[i], q[j]).unwrap();
        let pt = |l1, l2| match normalize(meet(l1, l2).unwrap()) {
            Affine::Finite(v) => v,
            Affine::AtInfinity => panic!("proper intersection expected"),
        };
        let a = pt(line(0, 1), line(3, 4));
        let b = pt(line(1, 2), line(4, 5));
        let c = pt(line(2, 3), line(5, 0));
        let scale = (a - b).norm() * (c - b).norm();
        assert!(signed_area(a, b, c).abs() / scale < 1e-12);
    }

    #[test]
    fn collinear_stencil_is_degenerate() {
        let pts = [0.0, 1.0, 2.0, 3.0, 4.0].map(|x| p(x, 2.0 * x));
        assert!(pascal_tangent(&pts).is_err());
    }

    #[test]
    fn polyline_validation() {
        assert_eq!(Polyline::open(vec![p(0.0, 0.0), p(1.0, 0.0)]), Err(PolylineError::TooFewPoints(2)));
        assert_eq!(
            Polyline::open(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.0)]),
            Err(PolylineError::RepeatedPoint(1, 2))
        );
        assert_eq!(
            Polyline::open(vec![p(0.0, 0.0), p(f64::NAN, 0.0), p(1.0, 0.0)]),
            Err(PolylineError::NonFinite(1))
        );
    }
}
