use coniccurv::convexity::turn_signs;
use coniccurv::energy::{refine_four_point, FourPoint, SubdivisionScheme};
use coniccurv::io::{parse_points_csv, write_points_csv};
use coniccurv::{
    conic_curvature_at, conic_weight_sq, curvature_profile, join, meet, normalize, pascal_tangent, signed_area,
    split_convex, Affine, CurvatureStatus, Line, PlanePoint, Polyline, ProfileOptions,
};
use proptest::prelude::*;

fn p(x: f64, y: f64) -> PlanePoint {
    PlanePoint::new(x, y)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn point() -> impl Strategy<Value = PlanePoint> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| p(x, y))
}

// Five increasing angles on an ellipse, spread over less than half a turn.
fn ellipse_stencil() -> impl Strategy<Value = [PlanePoint; 5]> {
    (0.5..4.0f64, 0.5..4.0f64, 0.0..6.3f64, prop::array::uniform5(0.1..0.5f64)).prop_map(|(a, b, t0, gaps)| {
        let mut t = t0;
        gaps.map(|g| {
            t += g;
            p(a * t.cos(), b * t.sin())
        })
    })
}

fn same_line(l1: Line, l2: Line, through: PlanePoint) -> bool {
    let (d1, d2) = (l1.direction(), l2.direction());
    d1.wedge(d2).abs() < 1e-9 && l1.distance_to(through).abs() < 1e-9 && l2.distance_to(through).abs() < 1e-9
}

fn arc(a: f64, b: f64, t0: f64, n: usize) -> Vec<PlanePoint> {
    (0..n).map(|i| {
        let t = t0 + 0.15 * i as f64;
        p(a * t.cos(), b * t.sin())
    }).collect()
}

proptest! {
    #[test]
    fn signed_area_is_antisymmetric(a in point(), b in point(), c in point()) {
        let s = signed_area(a, b, c);
        prop_assert!((signed_area(b, a, c) + s).abs() <= 1e-12 * (1.0 + s.abs()));
        prop_assert!((signed_area(b, c, a) - s).abs() <= 1e-12 * (1.0 + s.abs()));
    }

    #[test]
    fn meet_of_joins_recovers_the_point(a in point(), b in point(), c in point()) {
        prop_assume!(signed_area(a, b, c).abs() > 1e-2);
        let q = meet(join(a, b).unwrap(), join(a, c).unwrap()).unwrap();
        match normalize(q) {
            Affine::Finite(x) => prop_assert!(x.distance(a) < 1e-9 * (1.0 + a.norm())),
            Affine::AtInfinity => prop_assert!(false, "meet of two distinct lines through a finite point"),
        }
    }

    #[test]
    fn tangent_ignores_order_of_other_samples(s in ellipse_stencil(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let r = pascal_tangent(&s).unwrap();
        let others = [s[0], s[1], s[3], s[4]];
        let q = [others[perm[0]], others[perm[1]], s[2], others[perm[2]], others[perm[3]]];
        prop_assert!(same_line(r, pascal_tangent(&q).unwrap(), s[2]));
    }

    #[test]
    fn tangent_is_affinely_equivariant(
        s in ellipse_stencil(),
        m in prop::array::uniform4(-2.0..2.0f64),
        shift in point(),
    ) {
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det.abs() > 0.5);
        let f = |x: PlanePoint| p(m[0] * x.x + m[1] * x.y, m[2] * x.x + m[3] * x.y) + shift;
        let d = pascal_tangent(&s).unwrap().direction();
        let mapped = p(m[0] * d.x + m[1] * d.y, m[2] * d.x + m[3] * d.y);
        let r = pascal_tangent(&s.map(f)).unwrap();
        prop_assert!(r.direction().wedge(mapped * (1.0 / mapped.norm())).abs() < 1e-9);
        prop_assert!(r.distance_to(f(s[2])).abs() < 1e-9);
    }

    #[test]
    fn split_matches_brute_force(raw in prop::collection::vec((-4i32..5, -4i32..5), 4..12)) {
        let pts: Vec<PlanePoint> = raw.iter().map(|&(x, y)| p(x as f64, y as f64)).collect();
        prop_assume!(pts.windows(2).all(|w| w[0] != w[1]));
        let pl = Polyline::open(pts).unwrap();
        let signs = turn_signs(&pl);
        let nz: Vec<i8> = signs.iter().copied().filter(|&s| s != 0).collect();
        let changes = nz.windows(2).filter(|w| w[0] != w[1]).count();
        let pieces = split_convex(&pl).unwrap();
        prop_assert_eq!(pieces.len(), changes + 1);
        prop_assert_eq!(pieces[0].start_index, 0);
        prop_assert_eq!(pieces.last().unwrap().end_index, pl.len() - 1);
        for w in pieces.windows(2) {
            prop_assert_eq!(w[1].start_index + 1, w[0].end_index);
        }
        for piece in &pieces {
            let inner = &signs[piece.start_index + 1..piece.end_index];
            prop_assert!(inner.iter().all(|&s| s == 0 || s == piece.turn_sign));
        }
    }

    #[test]
    fn split_mirrors_under_reversal(raw in prop::collection::vec((-4i32..5, -4i32..5), 4..12)) {
        let pts: Vec<PlanePoint> = raw.iter().map(|&(x, y)| p(x as f64, y as f64)).collect();
        prop_assume!(pts.windows(2).all(|w| w[0] != w[1]));
        let pl = Polyline::open(pts).unwrap();
        // A flat vertex between opposite turns leaves the shared edge scan-order dependent.
        prop_assume!(turn_signs(&pl)[1..pl.len() - 1].iter().all(|&s| s != 0));
        let n = pl.len();
        let fwd = split_convex(&pl).unwrap();
        let back = split_convex(&pl.reversed()).unwrap();
        prop_assert_eq!(fwd.len(), back.len());
        for (a, b) in fwd.iter().zip(back.iter().rev()) {
            prop_assert_eq!((a.start_index, a.end_index), (n - 1 - b.end_index, n - 1 - b.start_index));
            if fwd.len() > 1 {
                prop_assert_eq!(a.turn_sign, -b.turn_sign);
            }
        }
    }

    #[test]
    fn curvature_is_rigidly_invariant(
        a in 0.5..4.0f64, b in 0.5..4.0f64, t0 in 0.0..6.3f64,
        th in 0.0..6.3f64, shift in point(),
    ) {
        let pl = Polyline::open(arc(a, b, t0, 12)).unwrap();
        let (s, c) = th.sin_cos();
        let moved = pl.map(|x| p(c * x.x - s * x.y, s * x.x + c * x.y) + shift);
        let opts = ProfileOptions::default();
        for (r1, r2) in curvature_profile(&pl, opts).iter().zip(&curvature_profile(&moved, opts)) {
            prop_assert_eq!(r1.status, r2.status);
            prop_assert!(rel(r1.kappa_avg, r2.kappa_avg) < 1e-9);
        }
    }

    #[test]
    fn curvature_scales_inversely(a in 0.5..4.0f64, b in 0.5..4.0f64, t0 in 0.0..6.3f64, lambda in 1e-3..1e3f64) {
        let pl = Polyline::open(arc(a, b, t0, 10)).unwrap();
        let opts = ProfileOptions::default();
        let scaled = curvature_profile(&pl.map(|x| x * lambda), opts);
        for (r1, r2) in curvature_profile(&pl, opts).iter().zip(&scaled) {
            prop_assert!(rel(r1.kappa_avg, r2.kappa_avg * lambda) < 1e-9);
        }
    }

    #[test]
    fn reversal_swaps_sides(a in 0.5..4.0f64, b in 0.5..4.0f64, t0 in 0.0..6.3f64) {
        let pl = Polyline::open(arc(a, b, t0, 11)).unwrap();
        let opts = ProfileOptions::default();
        let fwd = curvature_profile(&pl, opts);
        let back = curvature_profile(&pl.reversed(), opts);
        for (r1, r2) in fwd.iter().zip(back.iter().rev()) {
            prop_assert_eq!(r1.status, r2.status);
            prop_assert!(rel(r1.kappa_left, r2.kappa_right) < 1e-9);
            prop_assert!(rel(r1.kappa_right, r2.kappa_left) < 1e-9);
            if r1.status == CurvatureStatus::Ok {
                prop_assert_eq!(r1.kappa_avg.to_bits(), ((r1.kappa_left + r1.kappa_right) / 2.0).to_bits());
            }
        }
    }

    #[test]
    fn two_paths_to_the_curvature_agree(
        pi in point(), pk in point(), q in point(),
        u in 0.05..1.0f64, v in 0.05..1.0f64, w in 0.05..1.0f64,
    ) {
        prop_assume!(signed_area(pi, q, pk).abs() > 0.1);
        let pj = (pi * u + q * v + pk * w) * (1.0 / (u + v + w));
        let om2 = conic_weight_sq(pi, pj, pk, q).unwrap();
        let k = conic_curvature_at(pi, pj, pk, q).unwrap();
        let other = signed_area(pi, pk, q) / (om2 * (q - pi).norm().powi(3));
        prop_assert!(rel(k.abs(), other.abs()) < 1e-12);
    }

    #[test]
    fn points_csv_round_trips_bitwise(pts in prop::collection::vec((any::<f64>(), any::<f64>()), 1..30)) {
        let pts: Vec<PlanePoint> = pts.into_iter().filter(|(x, y)| x.is_finite() && y.is_finite()).map(|(x, y)| p(x, y)).collect();
        let back = parse_points_csv(&write_points_csv(&pts)).unwrap();
        prop_assert_eq!(back.len(), pts.len());
        for (a, b) in pts.iter().zip(&back) {
            prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
            prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }

    #[test]
    fn four_point_refinement_is_interpolatory(pts in prop::collection::vec(point(), 3..12)) {
        let fine = refine_four_point(&pts).unwrap();
        prop_assert_eq!(fine.len(), 2 * pts.len() - 1);
        for (i, q) in pts.iter().enumerate() {
            prop_assert_eq!(fine[2 * i], *q);
        }
        prop_assert_eq!(FourPoint.refine(&pts).unwrap(), fine);
    }
}
