//! Splitting into convex pieces, collinear triples and inflection points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::projective::{is_collinear, rotate90, Line, PlanePoint};
use crate::tangent::Polyline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ConvexityError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("tangent directions have no bisector")]
    DegenerateBisector,
}

/// Inclusive index range of a convex run of samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexPiece {
    pub start_index: usize,
    pub end_index: usize,
    pub turn_sign: i8,
}

impl ConvexPiece {
    pub fn len(&self) -> usize {
        self.end_index - self.start_index + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start_index <= i && i <= self.end_index
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflectionInsertion {
    /// Index of the edge's first vertex.
    pub edge_index: usize,
    pub position: PlanePoint,
    pub tangent: Line,
}

/// Orientation of the turn at `b`: +1 left, -1 right, 0 collinear.
pub fn turn_sign(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> i8 {
    if is_collinear(a, b, c) {
        return 0;
    }
    let s = (a - b).dot(rotate90(c - b));
    if s > 0.0 {
        1
    } else if s < 0.0 {
        -1
    } else {
        0
    }
}

/// Turn sign at every vertex; open ends get 0.
pub fn turn_signs(pl: &Polyline) -> Vec<i8> {
    let pts = pl.points();
    let n = pts.len();
    (0..n)
        .map(|i| {
            if pl.is_closed() {
                turn_sign(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n])
            } else if i == 0 || i == n - 1 {
                0
            } else {
                turn_sign(pts[i - 1], pts[i], pts[i + 1])
            }
        })
        .collect()
}

/// Vertices whose incident triple is collinear.
pub fn mark_collinear(pl: &Polyline) -> Vec<usize> {
    let pts = pl.points();
    let n = pts.len();
    let range = if pl.is_closed() { 0..n } else { 1..n.saturating_sub(1) };
    range
        .filter(|&i| {
            let (a, c) = (pts[(i + n - 1) % n], pts[(i + 1) % n]);
            is_collinear(a, pts[i], c)
        })
        .collect()
}

/// Greedy left-to-right split into convex pieces. Adjacent pieces share the
/// inflection edge; a zero (collinear) sign never starts a new piece.
pub fn split_convex(pl: &Polyline) -> Result<Vec<ConvexPiece>, ConvexityError> {
    let pts = pl.points();
    let n = pts.len();
    if n < 3 {
        return Err(ConvexityError::TooFewPoints(n));
    }
    let signs = turn_signs(pl);
    if pl.is_closed() {
        let first = signs.iter().copied().find(|&s| s != 0).unwrap_or(1);
        if signs.iter().all(|&s| s == 0 || s == first) {
            return Ok(vec![ConvexPiece { start_index: 0, end_index: n - 1, turn_sign: first }]);
        }
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut sign = 0i8;
    for (i, &s) in signs.iter().enumerate().take(n - 1).skip(1) {
        if s == 0 || s == sign {
            continue;
        }
        if sign == 0 {
            sign = s;
            continue;
        }
        pieces.push(ConvexPiece { start_index: start, end_index: i, turn_sign: sign });
        start = i - 1;
        sign = s;
    }
    pieces.push(ConvexPiece {
        start_index: start,
        end_index: n - 1,
        turn_sign: if sign == 0 { 1 } else { sign },
    });
    Ok(pieces)
}

/// Midpoint of edge `(edge_index, edge_index + 1)` with the bisector of the
/// acute angle between the two tangents as its tangent.
pub fn insert_inflection_midpoint(
    pl: &Polyline,
    edge_index: usize,
    left_tangent: Line,
    right_tangent: Line,
) -> Result<InflectionInsertion, ConvexityError> {
    let pts = pl.points();
    if edge_index + 1 >= pts.len() {
        return Err(ConvexityError::EdgeOutOfRange(edge_index));
    }
    let (p, q) = (pts[edge_index], pts[edge_index + 1]);
    bisector_insertion(p, q, left_tangent.direction(), right_tangent.direction())
        .map(|(position, tangent)| InflectionInsertion { edge_index, position, tangent })
}

fn bisector_insertion(
    p: PlanePoint,
    q: PlanePoint,
    left: PlanePoint,
    right: PlanePoint,
) -> Result<(PlanePoint, Line), ConvexityError> {
    let unit = |v: PlanePoint| v * (1.0 / v.norm());
    let edge = q - p;
    let mut u = unit(left);
    if u.dot(edge) < 0.0 {
        u = -u;
    }
    let mut v = unit(right);
    let uv = u.dot(v);
    if uv < 0.0 || (uv == 0.0 && v.dot(edge) < 0.0) {
        v = -v;
    }
    let d = u + v;
    if !(d.norm() > 1e-12) {
        return Err(ConvexityError::DegenerateBisector);
    }
    let mid = (p + q) * 0.5;
    let line = Line::through(mid, unit(d)).ok_or(ConvexityError::DegenerateBisector)?;
    Ok((mid, line))
}
