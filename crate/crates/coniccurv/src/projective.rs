//! Points, homogeneous triples and the join/meet primitives.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative threshold below which the third component of a homogeneous point
/// marks it as improper (at infinity).
pub const EPS_INF: f64 = 1e-12;

/// Relative threshold for collinearity: `|2 area| <= EPS_COL * |A-B| |C-B|`.
pub const EPS_COL: f64 = 1e-12;

/// Cross products of unit triples whose norm falls below this are treated as
/// zero (identical lines, coincident projective points).
const EPS_CROSS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("cannot join coincident points")]
    CoincidentPoints,
    #[error("cannot meet identical lines")]
    IdenticalLines,
}

/// A point (or vector) of the affine plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    pub fn dot(self, other: PlanePoint) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn wedge(self, other: PlanePoint) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: PlanePoint) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lift to homogeneous coordinates `(x, y, 1)`.
    pub fn embed(self) -> ProjPoint {
        ProjPoint(Triple([self.x, self.y, 1.0]))
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }
}

impl Mul<PlanePoint> for f64 {
    type Output = PlanePoint;
    fn mul(self, p: PlanePoint) -> PlanePoint {
        p * self
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for PlanePoint {
    fn from((x, y): (f64, f64)) -> Self {
        PlanePoint::new(x, y)
    }
}

/// Raw homogeneous triple. Which object it denotes is carried by the
/// [`Line`] and [`ProjPoint`] wrappers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triple(pub [f64; 3]);

impl Triple {
    pub fn cross(self, o: Triple) -> Triple {
        let [a1, b1, c1] = self.0;
        let [a2, b2, c2] = o.0;
        Triple([b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2])
    }

    pub fn dot(self, o: Triple) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm(self) -> f64 {
        let [a, b, c] = self.0;
        a.hypot(b).hypot(c)
    }

    /// Scaled to unit Euclidean norm; `None` for the zero triple.
    pub fn unit(self) -> Option<Triple> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(Triple(self.0.map(|v| v / n)))
        } else {
            None
        }
    }

    fn cross_unit(self, o: Triple) -> Option<Triple> {
        let (u, v) = (self.unit()?, o.unit()?);
        let w = u.cross(v);
        if w.norm() <= EPS_CROSS {
            return None;
        }
        w.unit()
    }
}

/// Homogeneous line `a x + b y + c = 0`, stored with unit norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line(pub Triple);

/// Homogeneous point, stored with unit norm; may be improper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint(pub Triple);

/// Result of dehomogenizing a projective point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Affine {
    Finite(PlanePoint),
    AtInfinity,
}

impl Line {
    pub fn coefficients(self) -> [f64; 3] {
        self.0 .0
    }

    pub fn from_coefficients(a: f64, b: f64, c: f64) -> Option<Line> {
        Triple([a, b, c]).unit().map(Line)
    }

    /// Direction vector `(-b, a)`, unit length when the line is proper.
    pub fn direction(self) -> PlanePoint {
        let [a, b, _] = self.0 .0;
        let n = a.hypot(b);
        PlanePoint::new(-b / n, a / n)
    }

    /// Line through `p` with direction `d`.
    pub fn through(p: PlanePoint, d: PlanePoint) -> Option<Line> {
        Line::from_coefficients(-d.y, d.x, d.y * p.x - d.x * p.y)
    }

    /// Signed residual `<L, (x, y, 1)>` with `(a, b)` scaled to unit length.
    pub fn distance_to(self, p: PlanePoint) -> f64 {
        let [a, b, c] = self.0 .0;
        (a * p.x + b * p.y + c) / a.hypot(b)
    }
}

impl ProjPoint {
    pub fn coordinates(self) -> [f64; 3] {
        self.0 .0
    }

    pub fn is_improper(self) -> bool {
        let [a, b, c] = self.0 .0;
        c.abs() <= EPS_INF * a.hypot(b)
    }

    /// Line through two projective points; either may be improper.
    pub fn join(self, other: ProjPoint) -> Result<Line, ProjectiveError> {
        self.0
            .cross_unit(other.0)
            .map(Line)
            .ok_or(ProjectiveError::CoincidentPoints)
    }
}

/// Line through two distinct affine points.
pub fn join(p: PlanePoint, q: PlanePoint) -> Result<Line, ProjectiveError> {
    if p == q {
        return Err(ProjectiveError::CoincidentPoints);
    }
    p.embed().join(q.embed())
}

/// Intersection of two lines, possibly an improper point.
pub fn meet(l1: Line, l2: Line) -> Result<ProjPoint, ProjectiveError> {
    l1.0
        .cross_unit(l2.0)
        .map(ProjPoint)
        .ok_or(ProjectiveError::IdenticalLines)
}

pub fn normalize(t: ProjPoint) -> Affine {
    if t.is_improper() {
        return Affine::AtInfinity;
    }
    let [a, b, c] = t.0 .0;
    Affine::Finite(PlanePoint::new(a / c, b / c))
}

/// Half the wedge of the edge vectors; positive for counterclockwise order.
pub fn signed_area(p1: PlanePoint, p2: PlanePoint, p3: PlanePoint) -> f64 {
    (p2 - p1).wedge(p3 - p1) / 2.0
}

pub fn rotate90(v: PlanePoint) -> PlanePoint {
    PlanePoint::new(-v.y, v.x)
}

/// Scale-invariant collinearity test for the triple `(a, b, c)` around `b`.
pub fn is_collinear(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> bool {
    let area2 = (a - b).wedge(c - b).abs();
    area2 <= EPS_COL * (a - b).norm() * (c - b).norm()
}
