"""Smoke test for the coniccurv_py extension.

Build first:  maturin develop -m crates/python/Cargo.toml
"""
import math
import sys

import coniccurv_py as cc


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    circle = [(3 * math.cos(t), 3 * math.sin(t)) for t in (2 * math.pi * i / 24 for i in range(24))]
    recs = cc.curvature_profile(circle, closed=True)
    assert len(recs) == 24
    assert all(r.status == "Ok" and close(r.kappa_avg, 1 / 3, 1e-12) for r in recs), recs[:3]
    assert recs[0].sign == 1 and close(recs[0].signed_kappa(), 1 / 3, 1e-12)

    a, b, c = cc.pascal_tangent(circle[:5])
    x, y = circle[2]
    assert abs(a * x + b * y + c) < 1e-12
    assert close(abs(a * x + b * y) / math.hypot(a, b), 3.0, 1e-12)

    assert close(cc.circle_curvature((1, 0), (0, 1), (-1, 0)), 1.0, 1e-14)
    assert close(cc.coniccurv_at(circle[:7]).kappa_avg, 1 / 3, 1e-12)

    wave = [(t, math.sin(t)) for t in (-3 + 0.5 * i for i in range(13))]
    assert len(cc.split_convex(wave)) == 2

    rows = cc.run_table2()
    assert len(rows) == 7 and set(rows[0]) == {"curve", "circle", "poly4", "conic", "coniccurv"}
    order = cc.run_order_experiment()
    assert order["coniccurv"]["re_slope"] > 3.5

    s, e = cc.energy(control=[(0, 0), (1, 1), (2, 2)], levels=3)
    assert close(s, math.sqrt(8), 1e-12) and e == 0.0
    s, e = cc.energy(curve="ellipse", levels=4)
    assert s > 0 and e > 0

    samples = [(1.0, 1.0, 10.0), (2.0, 1.1, 5.0), (3.0, 1.3, 1.2), (4.0, 3.0, 1.0), (5.0, 8.0, 0.9)]
    rep = cc.find_corner(samples)
    assert 0 <= rep.corner_index < len(samples)

    try:
        cc.pascal_tangent([(0, 0), (1, 1)])
    except ValueError:
        pass
    else:
        raise AssertionError("short stencil must raise ValueError")

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
