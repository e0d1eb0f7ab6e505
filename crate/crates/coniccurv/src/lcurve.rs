//! Corner of a Tikhonov L-curve from a handful of samples.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimator::{curvature_profile, CurvatureRecord, ProfileOptions};
use crate::projective::PlanePoint;
use crate::tangent::{Polyline, PolylineError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LCurveError {
    #[error("need at least 5 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample {0} has a non-positive norm")]
    NonPositiveNorm(usize),
    #[error("no sample received a curvature estimate")]
    AllDegenerate,
    #[error("invalid log-log polyline: {0}")]
    Polyline(#[from] PolylineError),
}

/// `alpha` may be NaN when the regularization parameter is unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LCurveSample {
    pub alpha: f64,
    pub residual_norm: f64,
    pub solution_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerOptions {
    pub assume_convex: bool,
    pub all_maxima: bool,
}

impl Default for CornerOptions {
    fn default() -> Self {
        CornerOptions { assume_convex: true, all_maxima: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerReport {
    pub corner_index: usize,
    pub corner_alpha: f64,
    /// `(index, kappa)` for every estimated sample.
    pub curvatures: Vec<(usize, f64)>,
    pub local_maxima: Vec<usize>,
    pub records: Vec<CurvatureRecord>,
}

/// Natural-log coordinates `(ln r, ln s)`.
pub fn to_loglog(samples: &[LCurveSample]) -> Result<Polyline, LCurveError> {
    let mut pts = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        if !(s.residual_norm > 0.0 && s.solution_norm > 0.0) {
            return Err(LCurveError::NonPositiveNorm(i));
        }
        pts.push(PlanePoint::new(s.residual_norm.ln(), s.solution_norm.ln()));
    }
    Ok(Polyline::open(pts)?)
}

pub fn find_corner(samples: &[LCurveSample], options: CornerOptions) -> Result<CornerReport, LCurveError> {
    if samples.len() < 5 {
        return Err(LCurveError::TooFewSamples(samples.len()));
    }
    let pl = to_loglog(samples)?;
    let records = curvature_profile(
        &pl,
        ProfileOptions { assume_convex: options.assume_convex, ..Default::default() },
    );
    let curvatures: Vec<(usize, f64)> = records
        .iter()
        .filter(|r| r.status.is_estimated())
        .map(|r| (r.index, r.kappa_avg))
        .collect();
    let corner = curvatures
        .iter()
        .copied()
        .reduce(|best, c| if c.1 > best.1 { c } else { best })
        .ok_or(LCurveError::AllDegenerate)?;

    let local_maxima = if options.all_maxima {
        // Neighbours are the adjacent estimated samples; both must exist. The
        // corner is always listed, even at an end.
        let mut maxima: Vec<usize> = (1..curvatures.len().saturating_sub(1))
            .filter(|&k| curvatures[k].1 > curvatures[k - 1].1 && curvatures[k].1 > curvatures[k + 1].1)
            .map(|k| curvatures[k].0)
            .collect();
        if !maxima.contains(&corner.0) {
            maxima.push(corner.0);
            maxima.sort_unstable();
        }
        maxima
    } else {
        vec![corner.0]
    };

    Ok(CornerReport {
        corner_index: corner.0,
        corner_alpha: samples[corner.0].alpha,
        curvatures,
        local_maxima,
        records,
    })
}
