//! Stretching and bending energy of an arc through interpolatory subdivision.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimator::{coniccurv_at, CurvatureStatus};
use crate::projective::PlanePoint;

pub const MIN_LEVELS: usize = 2;
pub const MAX_LEVELS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EnergyError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("levels must lie in {MIN_LEVELS}..={MAX_LEVELS}, got {0}")]
    LevelsOutOfRange(usize),
    #[error("{0} points is not a refinement of the scheme's initial polygon")]
    LevelMismatch(usize),
    #[error("{0} points do not form a level of a 3-point control polygon")]
    NotALevel(usize),
}

/// Binary interpolatory refinement: `m` points in, `2m - 1` out, with the
/// input kept at even positions.
pub trait SubdivisionScheme {
    fn refine(&self, points: &[PlanePoint]) -> Result<Vec<PlanePoint>, EnergyError>;
}

/// New points are the curve evaluated at parameter midpoints.
pub struct ExactParametric<F: Fn(f64) -> PlanePoint> {
    curve: F,
    t_values: Vec<f64>,
}

impl<F: Fn(f64) -> PlanePoint> ExactParametric<F> {
    pub fn new(curve: F, t_values: Vec<f64>) -> Self {
        ExactParametric { curve, t_values }
    }

    pub fn control_points(&self) -> Vec<PlanePoint> {
        self.t_values.iter().map(|&t| (self.curve)(t)).collect()
    }

    /// Parameters of a polygon with `m` points, if `m` is a level.
    fn parameters(&self, m: usize) -> Option<Vec<f64>> {
        let mut ts = self.t_values.clone();
        while ts.len() < m {
            let mut next = Vec::with_capacity(2 * ts.len() - 1);
            for w in ts.windows(2) {
                next.push(w[0]);
                next.push(0.5 * (w[0] + w[1]));
            }
            next.push(*ts.last()?);
            ts = next;
        }
        (ts.len() == m).then_some(ts)
    }
}

pub fn refine_exact_parametric<F: Fn(f64) -> PlanePoint>(curve: F, t_values: Vec<f64>) -> ExactParametric<F> {
    ExactParametric::new(curve, t_values)
}

impl<F: Fn(f64) -> PlanePoint> SubdivisionScheme for ExactParametric<F> {
    fn refine(&self, points: &[PlanePoint]) -> Result<Vec<PlanePoint>, EnergyError> {
        let ts = self.parameters(points.len()).ok_or(EnergyError::LevelMismatch(points.len()))?;
        let mut out = Vec::with_capacity(2 * points.len() - 1);
        for i in 0..points.len() {
            out.push(points[i]);
            if i + 1 < points.len() {
                out.push((self.curve)(0.5 * (ts[i] + ts[i + 1])));
            }
        }
        Ok(out)
    }
}

/// The classic 4-point rule with extrapolated phantom end points.
#[derive(Debug, Clone, Copy, Default)]
pub struct FourPoint;

pub fn refine_four_point(points: &[PlanePoint]) -> Result<Vec<PlanePoint>, EnergyError> {
    FourPoint.refine(points)
}

impl SubdivisionScheme for FourPoint {
    fn refine(&self, p: &[PlanePoint]) -> Result<Vec<PlanePoint>, EnergyError> {
        let m = p.len();
        if m < 3 {
            return Err(EnergyError::TooFewPoints { needed: 3, got: m });
        }
        // Cubic extrapolation when four points exist, quadratic otherwise.
        let phantom = |a: PlanePoint, b: PlanePoint, c: PlanePoint, d: Option<PlanePoint>| match d {
            Some(d) => a * 4.0 - b * 6.0 + c * 4.0 - d,
            None => a * 3.0 - b * 3.0 + c,
        };
        let first = phantom(p[0], p[1], p[2], p.get(3).copied());
        let last = phantom(p[m - 1], p[m - 2], p[m - 3], if m >= 4 { Some(p[m - 4]) } else { None });
        let at = |i: isize| -> PlanePoint {
            if i < 0 {
                first
            } else if i as usize >= m {
                last
            } else {
                p[i as usize]
            }
        };
        let mut out = Vec::with_capacity(2 * m - 1);
        for i in 0..m {
            out.push(p[i]);
            if i + 1 < m {
                let j = i as isize;
                let mid = ((at(j) + at(j + 1)) * 9.0 - (at(j - 1) + at(j + 2))) * (1.0 / 16.0);
                out.push(mid);
            }
        }
        Ok(out)
    }
}

/// Recovers `j*` from a polygon of `2^{j*+1} + 1` points.
fn level_of(m: usize) -> Option<usize> {
    let n = m.checked_sub(1)?;
    (n >= 2 && n.is_power_of_two()).then(|| n.trailing_zeros() as usize - 1)
}

fn chords(p: &[PlanePoint]) -> Vec<f64> {
    (0..p.len().saturating_sub(2)).map(|m| p[m + 2].distance(p[m])).collect()
}

/// Sum of the chords joining every other fine point.
pub fn stretch_energy(points: &[PlanePoint]) -> Result<f64, EnergyError> {
    let jstar = level_of(points.len()).ok_or(EnergyError::NotALevel(points.len()))?;
    let d = chords(points);
    Ok((0..1usize << jstar).map(|r| d[2 * r]).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BendingDiagnostics {
    pub one_sided: usize,
    pub degenerate: usize,
}

/// Midpoint rule for the integral of squared curvature. Each term covers
/// eight fine intervals: the curvature comes from the 7-point stencil centred
/// at local offset `8h - 4` and the length from the four chords of the block.
pub fn bending_energy_with_diagnostics(points: &[PlanePoint]) -> Result<(f64, BendingDiagnostics), EnergyError> {
    let jstar = level_of(points.len()).ok_or(EnergyError::NotALevel(points.len()))?;
    if jstar < MIN_LEVELS {
        return Err(EnergyError::TooFewPoints { needed: 9, got: points.len() });
    }
    let d = chords(points);
    let mut diag = BendingDiagnostics::default();
    let mut e = 0.0;
    for h in 1..=(1usize << (jstar - 2)) {
        let c = 8 * h - 4;
        let window: [PlanePoint; 7] = points[c - 3..=c + 3].try_into().expect("seven points");
        let rec = coniccurv_at(&window);
        match rec.status {
            CurvatureStatus::OneSided => diag.one_sided += 1,
            CurvatureStatus::Degenerate | CurvatureStatus::NotEstimated => diag.degenerate += 1,
            _ => {}
        }
        let delta: f64 = (0..4).map(|q| d[8 * (h - 1) + 2 * q]).sum();
        e += rec.kappa_avg * rec.kappa_avg * delta;
    }
    Ok((e, diag))
}

pub fn bending_energy(points: &[PlanePoint]) -> Result<f64, EnergyError> {
    bending_energy_with_diagnostics(points).map(|(e, _)| e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelEnergy {
    pub level: usize,
    pub stretch: f64,
    pub bending: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub levels_used: usize,
    /// Estimates at every level from 2 up to `levels_used`.
    pub per_level: Vec<LevelEnergy>,
    pub diagnostics: BendingDiagnostics,
}

/// Refines the 3-point control polygon `jstar` times (the level-`j` polygon
/// has `2^{j+1} + 1` points) and evaluates both energies.
pub fn energy(control: &[PlanePoint; 3], scheme: &dyn SubdivisionScheme, jstar: usize) -> Result<EnergyReport, EnergyError> {
    if !(MIN_LEVELS..=MAX_LEVELS).contains(&jstar) {
        return Err(EnergyError::LevelsOutOfRange(jstar));
    }
    let mut pts = control.to_vec();
    let mut per_level = Vec::new();
    let mut diagnostics = BendingDiagnostics::default();
    for level in 1..=jstar {
        pts = scheme.refine(&pts)?;
        if level >= MIN_LEVELS {
            let stretch = stretch_energy(&pts)?;
            let (bending, diag) = bending_energy_with_diagnostics(&pts)?;
            per_level.push(LevelEnergy { level, stretch, bending });
            diagnostics = diag;
        }
    }
    let last = *per_level.last().expect("jstar >= 2");
    Ok(EnergyReport { s: last.stretch, e: last.bending, levels_used: jstar, per_level, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y)
    }

    fn ellipse(t: f64) -> PlanePoint {
        p(5.0 * t.cos(), 2.0 * t.sin())
    }

    #[test]
    fn exact_scheme_adds_midpoint_parameters() {
        let s = refine_exact_parametric(ellipse, vec![1.0, 1.5, 2.0]);
        let c = s.control_points();
        assert!(c[0].distance(p(2.7015, 1.6829)) < 1e-4);
        assert!(c[1].distance(p(0.3537, 1.9950)) < 1e-4);
        assert!(c[2].distance(p(-2.0807, 1.8186)) < 1e-4);
        let r = s.refine(&c).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r[1], ellipse(1.25));
        assert_eq!(r[3], ellipse(1.75));
        let mut pts = c.clone();
        for j in 1..=4 {
            pts = s.refine(&pts).unwrap();
            assert_eq!(pts.len(), (1 << j) * 2 + 1);
        }
        for q in &pts {
            assert!((q.x * q.x / 25.0 + q.y * q.y / 4.0 - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.refine(&pts[..4]), Err(EnergyError::LevelMismatch(4)));
    }

    #[test]
    fn four_point_reproduces_lines_and_cubics() {
        let line: Vec<_> = (0..4).map(|i| p(i as f64, 1.0 - 2.0 * i as f64)).collect();
        for q in refine_four_point(&line).unwrap() {
            assert!((q.y - (1.0 - 2.0 * q.x)).abs() < 1e-14);
        }
        let cubic = |x: f64| x * x * x - 2.0 * x * x + 0.5;
        let pts: Vec<_> = (0..6).map(|i| p(i as f64 * 0.5, cubic(i as f64 * 0.5))).collect();
        for q in refine_four_point(&pts).unwrap() {
            assert!((q.y - cubic(q.x)).abs() < 1e-12, "{q:?}");
        }
    }

    #[test]
    fn four_point_is_interpolatory() {
        let pts: Vec<_> = (0..7).map(|i| {
            let t = 0.7 * i as f64;
            p(t.cos() * 3.0, t.sin() * 2.0)
        }).collect();
        let out = refine_four_point(&pts).unwrap();
        assert_eq!(out.len(), 13);
        for (i, q) in pts.iter().enumerate() {
            assert_eq!(out[2 * i], *q);
        }
        assert!(matches!(refine_four_point(&pts[..2]), Err(EnergyError::TooFewPoints { .. })));
    }

    #[test]
    fn straight_segment() {
        let pts: Vec<_> = (0..17).map(|i| p(0.25 * i as f64, 0.5 * i as f64)).collect();
        let len = pts[0].distance(pts[16]);
        assert!((stretch_energy(&pts).unwrap() - len).abs() < 1e-12);
        assert_eq!(bending_energy(&pts).unwrap(), 0.0);
    }

    #[test]
    fn collinear_control() {
        let c = [p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0)];
        let r = energy(&c, &FourPoint, 3).unwrap();
        assert_eq!(r.e, 0.0);
        assert!((r.s - c[0].distance(c[2])).abs() < 1e-12);
    }

    #[test]
    fn quarter_circle() {
        let r = 2.0;
        let arc = |t: f64| p(r * t.cos(), r * t.sin());
        let q = std::f64::consts::FRAC_PI_2;
        let s = refine_exact_parametric(arc, vec![0.0, q / 2.0, q]);
        let rep = energy(&[arc(0.0), arc(q / 2.0), arc(q)], &s, 4).unwrap();
        assert!(((rep.s - q * r) / (q * r)).abs() < 1e-3);
        assert!(((rep.e - q / r) / (q / r)).abs() < 0.02);
        assert_eq!(rep.per_level.len(), 3);
        assert_eq!(rep.diagnostics, BendingDiagnostics::default());
    }

    #[test]
    fn level_bounds() {
        let c = [p(0.0, 0.0), p(1.0, 1.0), p(2.0, 0.0)];
        assert_eq!(energy(&c, &FourPoint, 1), Err(EnergyError::LevelsOutOfRange(1)));
        assert_eq!(energy(&c, &FourPoint, 13), Err(EnergyError::LevelsOutOfRange(13)));
        assert_eq!(level_of(9), Some(2));
        assert_eq!(level_of(33), Some(4));
        assert_eq!(level_of(10), None);
    }
}
