//! Rational-conic curvature formulas and the ConicCurv estimator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convexity::{
    insert_inflection_midpoint, mark_collinear, split_convex, turn_sign, ConvexPiece, InflectionInsertion,
};
use crate::projective::{meet, normalize, signed_area, Affine, Line, PlanePoint, EPS_COL};
use crate::tangent::{stencil, tangent_from_stencil, Polyline, TangentField, TangentStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("tangent triangle is degenerate")]
    DegenerateTriangle,
    #[error("middle sample lies outside the tangent triangle")]
    NonConvexConfiguration,
    #[error("tangent lines are parallel")]
    ImproperApex,
    #[error("samples are collinear with the chord")]
    ZeroChordArea,
}

/// Conic through `pi`, `pj`, `pk`, tangent to `pi q` and `pk q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicSpec {
    pub pi: PlanePoint,
    pub pj: PlanePoint,
    pub pk: PlanePoint,
    pub q: PlanePoint,
    pub omega_sq: f64,
}

impl ConicSpec {
    pub fn new(pi: PlanePoint, pj: PlanePoint, pk: PlanePoint, q: PlanePoint) -> Result<Self, CurvatureError> {
        let omega_sq = conic_weight_sq(pi, pj, pk, q)?;
        if !(omega_sq > 0.0) || !omega_sq.is_finite() {
            return Err(CurvatureError::ZeroChordArea);
        }
        Ok(ConicSpec { pi, pj, pk, q, omega_sq })
    }

    /// Barycentric coordinates `(u, v, w)` of `pj` with respect to `pi, q, pk`.
    pub fn barycentric(&self) -> (f64, f64, f64) {
        barycentric(self.pi, self.pj, self.pk, self.q)
    }
}

fn triangle_degenerate(pi: PlanePoint, pk: PlanePoint, q: PlanePoint) -> bool {
    let area2 = 2.0 * signed_area(pi, pk, q).abs();
    !(area2 > EPS_COL * (pk - pi).norm() * (q - pi).norm())
}

fn barycentric(pi: PlanePoint, pj: PlanePoint, pk: PlanePoint, q: PlanePoint) -> (f64, f64, f64) {
    let a = signed_area(pi, pk, q);
    (
        signed_area(pj, pk, q) / a,
        signed_area(pj, pi, pk) / a,
        signed_area(pj, q, pi) / a,
    )
}

/// Squared middle weight of the rational quadratic through `pj`.
pub fn conic_weight_sq(pi: PlanePoint, pj: PlanePoint, pk: PlanePoint, q: PlanePoint) -> Result<f64, CurvatureError> {
    if triangle_degenerate(pi, pk, q) {
        return Err(CurvatureError::DegenerateTriangle);
    }
    let (u, v, w) = barycentric(pi, pj, pk, q);
    if !(u > 0.0 && w > 0.0) {
        return Err(CurvatureError::NonConvexConfiguration);
    }
    Ok(v * v / (4.0 * u * w))
}

/// Signed curvature at `pi` of the conic of [`ConicSpec`]; its sign follows
/// the area orientation and carries no meaning on its own.
pub fn conic_curvature_at(pi: PlanePoint, pj: PlanePoint, pk: PlanePoint, q: PlanePoint) -> Result<f64, CurvatureError> {
    if !q.is_finite() {
        return Err(CurvatureError::ImproperApex);
    }
    if triangle_degenerate(pi, pk, q) {
        return Err(CurvatureError::DegenerateTriangle);
    }
    let chord = signed_area(pj, pi, pk);
    if !(2.0 * chord.abs() > EPS_COL * (pi - pj).norm() * (pk - pj).norm()) {
        return Err(CurvatureError::ZeroChordArea);
    }
    let d = (q - pi).norm();
    let num = 4.0 * signed_area(pi, pk, q) * signed_area(pj, pk, q) * signed_area(pj, q, pi);
    Ok(num / (chord * chord * d * d * d))
}

/// Implicit conic equation evaluated at `x`; zero on the conic.
pub fn implicit_residual(x: PlanePoint, spec: &ConicSpec) -> f64 {
    let ConicSpec { pi, pj, pk, q, .. } = *spec;
    let s = signed_area(x, pi, pk);
    let c = signed_area(pj, pi, pk);
    s * s * signed_area(pj, q, pi) * signed_area(pj, pk, q) - c * c * signed_area(x, pk, q) * signed_area(x, q, pi)
}

pub fn rational_conic_point(spec: &ConicSpec, t: f64) -> PlanePoint {
    let omega = spec.omega_sq.sqrt();
    let (b0, b1, b2) = ((1.0 - t) * (1.0 - t), 2.0 * t * (1.0 - t) * omega, t * t);
    (spec.pi * b0 + spec.q * b1 + spec.pk * b2) * (1.0 / (b0 + b1 + b2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureStatus {
    Ok,
    ForcedZero,
    OneSided,
    Degenerate,
    NotEstimated,
}

impl CurvatureStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CurvatureStatus::Ok => "Ok",
            CurvatureStatus::ForcedZero => "ForcedZero",
            CurvatureStatus::OneSided => "OneSided",
            CurvatureStatus::Degenerate => "Degenerate",
            CurvatureStatus::NotEstimated => "NotEstimated",
        }
    }

    pub fn is_estimated(self) -> bool {
        matches!(self, CurvatureStatus::Ok | CurvatureStatus::OneSided | CurvatureStatus::ForcedZero)
    }
}

/// Curvature estimate at one sample. Magnitudes are non-negative; unavailable
/// sides are 0 and the status says which case applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRecord {
    pub index: usize,
    pub kappa_left: f64,
    pub kappa_right: f64,
    pub kappa_avg: f64,
    pub sign: i8,
    pub status: CurvatureStatus,
    /// Some tangent came from a stencil reaching outside the convex piece.
    pub reduced: bool,
}

impl CurvatureRecord {
    fn empty(index: usize, sign: i8, status: CurvatureStatus) -> Self {
        CurvatureRecord {
            index,
            kappa_left: 0.0,
            kappa_right: 0.0,
            kappa_avg: 0.0,
            sign,
            status,
            reduced: false,
        }
    }

    pub fn signed_kappa(&self) -> f64 {
        self.sign as f64 * self.kappa_avg
    }

    fn from_sides(index: usize, sign: i8, left: Option<f64>, right: Option<f64>) -> Self {
        let mut r = CurvatureRecord::empty(index, sign, CurvatureStatus::Degenerate);
        match (left, right) {
            (Some(l), Some(k)) => {
                r.kappa_left = l;
                r.kappa_right = k;
                r.kappa_avg = (l + k) / 2.0;
                r.status = CurvatureStatus::Ok;
            }
            (Some(l), None) => {
                r.kappa_left = l;
                r.kappa_avg = l;
                r.status = CurvatureStatus::OneSided;
            }
            (None, Some(k)) => {
                r.kappa_right = k;
                r.kappa_avg = k;
                r.status = CurvatureStatus::OneSided;
            }
            (None, None) => {}
        }
        r
    }
}

/// Curvature magnitude at `pi` of the conic through `pi`, `pk`, `middle`
/// with tangents `ri` at `pi` and `rk` at `pk`. With `trust_convex` the data
/// is taken to be convex as stated and a middle sample outside the tangent
/// triangle is not rejected.
fn side_curvature(
    pi: PlanePoint,
    pk: PlanePoint,
    middle: PlanePoint,
    ri: Line,
    rk: Line,
    trust_convex: bool,
) -> Result<f64, CurvatureError> {
    // Work in the frame with origin `pi` and unit chord.
    let s = (pk - pi).norm();
    let to_local = |l: Line| {
        let [a, b, c] = l.coefficients();
        Line::from_coefficients(a, b, (c + a * pi.x + b * pi.y) / s)
    };
    let local = |x: PlanePoint| (x - pi) * (1.0 / s);
    let (Some(li), Some(lk)) = (to_local(ri), to_local(rk)) else {
        return Err(CurvatureError::ImproperApex);
    };
    let q = match meet(li, lk).map(normalize) {
        Ok(Affine::Finite(q)) => q,
        _ => return Err(CurvatureError::ImproperApex),
    };
    let (o, m, k) = (PlanePoint::default(), local(middle), local(pk));
    if !trust_convex {
        conic_weight_sq(o, m, k, q)?;
    }
    let kappa = conic_curvature_at(o, m, k, q)?.abs() / s;
    if kappa.is_finite() {
        Ok(kappa)
    } else {
        Err(CurvatureError::DegenerateTriangle)
    }
}

/// ConicCurv at the centre of seven consecutive samples.
pub fn coniccurv_at(window: &[PlanePoint; 7]) -> CurvatureRecord {
    let (prev, centre, next) = (window[2], window[3], window[4]);
    let sign = turn_sign(prev, centre, next);
    if sign == 0 {
        return CurvatureRecord::empty(3, 0, CurvatureStatus::ForcedZero);
    }
    let r = |l: usize| tangent_from_stencil(window, [l - 2, l - 1, l, l + 1, l + 2]);
    let (r_prev, r_centre, r_next) = (r(2), r(3), r(4));
    let Some(rc) = r_centre else {
        return CurvatureRecord::empty(3, sign, CurvatureStatus::Degenerate);
    };
    let left = r_prev.and_then(|rp| side_curvature(centre, prev, next, rc, rp, false).ok());
    let right = r_next.and_then(|rn| side_curvature(centre, next, prev, rc, rn, false).ok());
    CurvatureRecord::from_sides(3, sign, left, right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SmallPiecePolicy {
    /// Borrow a 5-point stencil from the parent polyline and flag the point.
    #[default]
    Reduced,
    /// Leave points of short pieces unestimated.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProfileOptions {
    /// Treat the whole polyline as one convex piece: no splitting, and side
    /// conics are evaluated even when a sample falls outside its tangent
    /// triangle.
    pub assume_convex: bool,
    pub small_pieces: SmallPiecePolicy,
}

#[derive(Debug, Clone)]
struct PieceTangents {
    piece: ConvexPiece,
    cyclic: bool,
    lines: Vec<Option<Line>>,
    reduced: Vec<bool>,
}

impl PieceTangents {
    fn at(&self, i: usize) -> Option<(Line, bool)> {
        let l = i - self.piece.start_index;
        self.lines[l].map(|line| (line, self.reduced[l]))
    }

    fn is_interior(&self, i: usize) -> bool {
        self.cyclic || (self.piece.start_index < i && i < self.piece.end_index)
    }
}

fn pieces_for(pl: &Polyline, assume_convex: bool) -> (Vec<ConvexPiece>, bool) {
    let n = pl.len();
    let pieces = if assume_convex {
        let sign = crate::convexity::turn_signs(pl).into_iter().find(|&s| s != 0).unwrap_or(1);
        vec![ConvexPiece { start_index: 0, end_index: n - 1, turn_sign: sign }]
    } else {
        split_convex(pl).expect("polyline has at least 3 points")
    };
    let cyclic = pl.is_closed() && pieces.len() == 1;
    (pieces, cyclic)
}

fn piece_tangents(pl: &Polyline, pieces: &[ConvexPiece], cyclic: bool, policy: SmallPiecePolicy) -> Vec<PieceTangents> {
    let pts = pl.points();
    let n = pts.len();
    pieces
        .iter()
        .map(|&piece| {
            let m = piece.len();
            let local = &pts[piece.start_index..=piece.end_index];
            let mut lines = vec![None; m];
            let mut reduced = vec![false; m];
            for l in 0..m {
                if m >= 5 {
                    lines[l] = tangent_from_stencil(local, stencil(m, l, cyclic));
                } else if policy == SmallPiecePolicy::Reduced && n >= 5 {
                    let i = piece.start_index + l;
                    lines[l] = tangent_from_stencil(pts, stencil(n, i, pl.is_closed()));
                    reduced[l] = true;
                }
            }
            PieceTangents { piece, cyclic, lines, reduced }
        })
        .collect()
}

fn records_from_pieces(
    pl: &Polyline,
    tangents: &[PieceTangents],
    forced_zero: &[usize],
    trust_convex: bool,
) -> Vec<CurvatureRecord> {
    let pts = pl.points();
    let n = pts.len();
    let closed = pl.is_closed();
    let mut zero = vec![false; n];
    for &i in forced_zero {
        zero[i] = true;
    }
    let wrap = |i: usize, d: isize| (i as isize + d).rem_euclid(n as isize) as usize;

    // For each index: the pieces containing it, in order.
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, t) in tangents.iter().enumerate() {
        for i in t.piece.start_index..=t.piece.end_index {
            owners[i].push(k);
        }
    }

    (0..n)
        .map(|i| {
            let sign_here = if closed || (i > 0 && i + 1 < n) {
                turn_sign(pts[wrap(i, -1)], pts[i], pts[wrap(i, 1)])
            } else {
                owners[i].first().map(|&k| tangents[k].piece.turn_sign).unwrap_or(1)
            };
            if zero[i] {
                return CurvatureRecord::empty(i, 0, CurvatureStatus::ForcedZero);
            }
            let interior: Vec<&PieceTangents> =
                owners[i].iter().map(|&k| &tangents[k]).filter(|t| t.is_interior(i)).collect();
            if !interior.is_empty() {
                let (ip, inx) = (wrap(i, -1), wrap(i, 1));
                let full = interior
                    .iter()
                    .find(|t| t.at(ip).is_some() && t.at(i).is_some() && t.at(inx).is_some())
                    .or_else(|| interior.iter().find(|t| t.at(i).is_some()));
                let Some(t) = full else {
                    return CurvatureRecord::empty(i, sign_here, CurvatureStatus::NotEstimated);
                };
                let (rc, red_c) = t.at(i).expect("checked above");
                let mut reduced = red_c;
                let left = t.at(ip).and_then(|(rp, red)| {
                    reduced |= red;
                    side_curvature(pts[i], pts[ip], pts[inx], rc, rp, trust_convex).ok()
                });
                let right = t.at(inx).and_then(|(rn, red)| {
                    reduced |= red;
                    side_curvature(pts[i], pts[inx], pts[ip], rc, rn, trust_convex).ok()
                });
                let mut rec = CurvatureRecord::from_sides(i, sign_here, left, right);
                if t.at(ip).is_none() && t.at(inx).is_none() {
                    rec.status = CurvatureStatus::NotEstimated;
                }
                rec.reduced = reduced;
                return rec;
            }
            // Endpoint of every piece that holds it: one conic only.
            let Some(&k) = owners[i].first() else {
                return CurvatureRecord::empty(i, sign_here, CurvatureStatus::NotEstimated);
            };
            let t = &tangents[k];
            let (pk, middle, at_start) = if i == t.piece.start_index {
                (i + 1, i + 2, true)
            } else {
                (i - 1, i - 2, false)
            };
            let (Some((ri, red_i)), Some((rk, red_k))) = (t.at(i), t.at(pk)) else {
                return CurvatureRecord::empty(i, sign_here, CurvatureStatus::NotEstimated);
            };
            let side = side_curvature(pts[i], pts[pk], pts[middle], ri, rk, trust_convex).ok();
            let mut rec = if at_start {
                CurvatureRecord::from_sides(i, sign_here, None, side)
            } else {
                CurvatureRecord::from_sides(i, sign_here, side, None)
            };
            rec.reduced = red_i || red_k;
            rec
        })
        .collect()
}

/// Curvature at every sample of the polyline.
pub fn curvature_profile(pl: &Polyline, options: ProfileOptions) -> Vec<CurvatureRecord> {
    let (pieces, cyclic) = pieces_for(pl, options.assume_convex);
    let tangents = piece_tangents(pl, &pieces, cyclic, options.small_pieces);
    records_from_pieces(pl, &tangents, &mark_collinear(pl), options.assume_convex)
}

/// One tangent per sample, taken from a piece in which the sample is interior
/// when there is one.
pub fn piecewise_tangent_field(pl: &Polyline, options: ProfileOptions) -> TangentField {
    let (pieces, cyclic) = pieces_for(pl, options.assume_convex);
    let tangents = piece_tangents(pl, &pieces, cyclic, options.small_pieces);
    let n = pl.len();
    let mut field = TangentField::not_estimated(n);
    for i in 0..n {
        let mut holders: Vec<&PieceTangents> = tangents.iter().filter(|t| t.piece.contains(i)).collect();
        holders.sort_by_key(|t| !t.is_interior(i));
        if let Some((line, red)) = holders.iter().find_map(|t| t.at(i)) {
            field.lines[i] = Some(line);
            field.status[i] = TangentStatus::Ok;
            field.reduced[i] = red;
        } else if holders.iter().any(|t| t.piece.len() >= 5) {
            field.status[i] = TangentStatus::Degenerate;
        }
    }
    field
}

/// Result of the inflection-insertion variant of the pipeline.
#[derive(Debug, Clone)]
pub struct InflectedProfile {
    /// Input samples with the inserted midpoints spliced in.
    pub polyline: Polyline,
    /// Records indexed into `polyline`.
    pub records: Vec<CurvatureRecord>,
    pub insertions: Vec<InflectionInsertion>,
    /// Positions of the inserted points in `polyline`.
    pub inserted_indices: Vec<usize>,
}

/// Pipeline variant that inserts a midpoint with a bisector tangent on every
/// inflection edge instead of sharing the edge between pieces.
pub fn curvature_profile_with_inflections(pl: &Polyline, options: ProfileOptions) -> InflectedProfile {
    let (pieces, cyclic) = pieces_for(pl, false);
    let tangents = piece_tangents(pl, &pieces, cyclic, options.small_pieces);
    let pts = pl.points();

    let mut insertions = Vec::new();
    for w in tangents.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let e0 = b.piece.start_index;
        let (Some((lt, _)), Some((rt, _))) = (a.at(e0), b.at(e0 + 1)) else {
            continue;
        };
        if let Ok(ins) = insert_inflection_midpoint(pl, e0, lt, rt) {
            insertions.push(ins);
        }
    }
    if insertions.is_empty() {
        return InflectedProfile {
            polyline: pl.clone(),
            records: records_from_pieces(pl, &tangents, &mark_collinear(pl), false),
            insertions,
            inserted_indices: Vec::new(),
        };
    }

    // Splice midpoints in and shift indices.
    let mut points = Vec::with_capacity(pts.len() + insertions.len());
    let mut map = vec![0usize; pts.len()];
    let mut inserted_indices = Vec::new();
    let mut next = insertions.iter().peekable();
    for (i, &p) in pts.iter().enumerate() {
        map[i] = points.len();
        points.push(p);
        if next.peek().is_some_and(|ins| ins.edge_index == i) {
            let ins = next.next().expect("peeked");
            inserted_indices.push(points.len());
            points.push(ins.position);
        }
    }
    let aug = Polyline::new(points, pl.is_closed()).expect("midpoints of distinct samples are new");

    // Re-cut the pieces at the inserted points.
    let mut new_pieces = Vec::new();
    let mut start = 0;
    let mut k = 0;
    for (pi, piece) in pieces.iter().enumerate() {
        let end = if pi + 1 < pieces.len() {
            let e0 = pieces[pi + 1].start_index;
            if insertions.get(k).is_some_and(|ins| ins.edge_index == e0) {
                let m = inserted_indices[k];
                k += 1;
                new_pieces.push(ConvexPiece { start_index: start, end_index: m, turn_sign: piece.turn_sign });
                start = m;
                continue;
            }
            map[piece.end_index]
        } else {
            aug.len() - 1
        };
        new_pieces.push(ConvexPiece { start_index: start, end_index: end, turn_sign: piece.turn_sign });
        start = map[pieces.get(pi + 1).map_or(piece.end_index, |p| p.start_index)];
    }

    let mut aug_tangents = piece_tangents(&aug, &new_pieces, false, options.small_pieces);
    for (ins, &m) in insertions.iter().zip(&inserted_indices) {
        for t in aug_tangents.iter_mut().filter(|t| t.piece.contains(m)) {
            let l = m - t.piece.start_index;
            t.lines[l] = Some(ins.tangent);
            t.reduced[l] = false;
        }
    }
    let records = records_from_pieces(&aug, &aug_tangents, &mark_collinear(&aug), false);
    InflectedProfile { polyline: aug, records, insertions, inserted_indices }
}
