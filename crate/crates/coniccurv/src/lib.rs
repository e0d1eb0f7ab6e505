//! Curvature estimation for ordered planar samples.
//!
//! Tangent lines come from Pascal's theorem on five consecutive samples; the
//! curvature at a sample averages the curvatures of the two rational conics
//! through it, a neighbour, and the tangents at both. The crate also ships the
//! classic comparison estimators, a corner detector for L-curves and an
//! energy estimator built on interpolatory subdivision.

pub mod bench;
pub mod convexity;
pub mod energy;
pub mod estimator;
pub mod io;
pub mod lcurve;
pub mod linalg;
pub mod projective;
pub mod reference;
pub mod tangent;

pub use convexity::{insert_inflection_midpoint, mark_collinear, split_convex, turn_sign, ConvexPiece, InflectionInsertion};
pub use estimator::{
    conic_curvature_at, conic_weight_sq, coniccurv_at, curvature_profile, implicit_residual, rational_conic_point,
    ConicSpec, CurvatureError, CurvatureRecord, CurvatureStatus, ProfileOptions, SmallPiecePolicy,
};
pub use lcurve::{find_corner, to_loglog, CornerOptions, CornerReport, LCurveSample};
pub use projective::{join, meet, normalize, rotate90, signed_area, Affine, Line, PlanePoint, ProjPoint};
pub use tangent::{pascal_tangent, tangent_field, Polyline, TangentField, TangentStatus};
