"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest,
which repeats the lines in an "acceptance criteria" section at the end.
"""

import cmath
import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES, catenoid_profile, helicoid_profile
from e2surf import catenoid, helicoid
from e2surf.group import MetricParams
from e2surf.weierstrass import gauss_map_fd, hopf, mean_curvature_fd, pde_residual

METRICS = [(1.0, 1.0), (2.0, 1.0), (5.0, 1.0)]


def verdict(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def helicoid_window(p):
    return (-1.0, 1.0), (0.0, 2 * p.W)


def catenoid_window(p):
    return (0.0, 2 * p.U), (-1.0, 1.0)


def grid(ranges, n):
    (u0, u1), (v0, v1) = ranges
    return [(u, v) for u in np.linspace(u0, u1, n) for v in np.linspace(v0, v1, n)]


def random_points(rng, ranges, n):
    (u0, u1), (v0, v1) = ranges
    return list(zip(rng.uniform(u0, u1, n), rng.uniform(v0, v1, n)))


def fd_gauss_curvature(curv, u, v, h=1e-3):
    def ln_rho(a, b):
        return 0.5 * math.log(curv(a, b)[0])
    lap = (-(ln_rho(u + 2 * h, v) + ln_rho(u - 2 * h, v) + ln_rho(u, v + 2 * h) + ln_rho(u, v - 2 * h))
           + 16 * (ln_rho(u + h, v) + ln_rho(u - h, v) + ln_rho(u, v + h) + ln_rho(u, v - h))
           - 60 * ln_rho(u, v)) / (12 * h * h)
    return -lap / curv(u, v)[0]


def flat_period_oracle(c):
    """Bisection on the closed-form flat period function, independent of the package."""
    def H(t):
        D = math.sin(t) / c
        return D * D + c * c - c * math.sqrt(c * c + 2 * math.cos(t) - D * D)
    lo, hi = 1e-6, math.pi / 2
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if H(mid) < 0 else (lo, mid)
    return 0.5 * (lo + hi)


def test_criterion_01_flat_helicoid_constants():
    m = MetricParams(1, 1)
    worst_w = worst_tc = slowest = 0.0
    for K in (0.25, 0.5, 0.75, 0.9):
        t0 = time.perf_counter()
        p = helicoid.solve_profile(m, K)
        tc = helicoid.total_abs_curvature(p)
        slowest = max(slowest, time.perf_counter() - t0)
        s = math.sqrt(1 - K)
        worst_w = max(worst_w, abs(p.W - math.pi / s))
        worst_tc = max(worst_tc, abs(tc.value - 4 * math.pi / s))
    ok = worst_w < 1e-8 and worst_tc < 1e-3 and slowest < 5
    verdict(1, ok, f"W err {worst_w:.1e} (<1e-8), total |K| err {worst_tc:.1e} (<1e-3), "
                   f"slowest {slowest:.2f}s (<5s)")


def test_criterion_02_hopf_constancy():
    worst_h = worst_c = 0.0
    for l1, l2 in METRICS:
        m = MetricParams(l1, l2)
        p = helicoid_profile(l1, l2, 0.5)
        for u, v in grid(helicoid_window(p), 30):
            worst_h = max(worst_h, abs(hopf(m, helicoid.gauss_map(p, u, v)[0]).Q - p.K / 16))
        q = catenoid_profile(l1, l2, 2.0)
        target = cmath.exp(-1j * q.theta) / 8
        for u, v in grid(catenoid_window(q), 30):
            worst_c = max(worst_c, abs(hopf(m, catenoid.gauss_map(q, u, v)[0]).Q - target))
    verdict(2, worst_h < 1e-10 and worst_c < 1e-10,
            f"max |Q - Q0| helicoid {worst_h:.1e}, catenoid {worst_c:.1e} (<1e-10) on 30x30 grids")


def test_criterion_03_pde_residual():
    worst_a = worst_fd = 0.0
    for l1, l2 in METRICS:
        m = MetricParams(l1, l2)
        p = helicoid_profile(l1, l2, 0.5)
        q = catenoid_profile(l1, l2, 2.0)
        for gm, gf, pts in ((lambda u, v: helicoid.gauss_map(p, u, v), helicoid.gauss_map_function(p),
                             grid(helicoid_window(p), 30)),
                            (lambda u, v: catenoid.gauss_map(q, u, v), catenoid.gauss_map_function(q),
                             grid(catenoid_window(q), 30))):
            for u, v in pts:
                worst_a = max(worst_a, abs(pde_residual(m, *gm(u, v))))
                worst_fd = max(worst_fd, abs(pde_residual(m, *gauss_map_fd(gf, u, v))))
    verdict(3, worst_a < 1e-10 and worst_fd < 1e-5,
            f"analytic residual {worst_a:.1e} (<1e-10), finite-difference residual {worst_fd:.1e} (<1e-5)")


def test_criterion_04_period_problem():
    worst_H = 0.0
    in_range = True
    for l1 in (1.0, 2.0, 5.0):
        m = MetricParams(l1, 1.0)
        for c in (1.5, 2.0, 5.0, 20.0):
            theta = catenoid.solve_theta_tilde(m, c)
            in_range &= 0 < theta < min(math.pi / 2, catenoid.theta_plus(m, c))
            worst_H = max(worst_H, abs(catenoid.H_value(catenoid.omega_check(m, c, theta), m)))
    oracle_err = abs(catenoid.solve_theta_tilde(MetricParams(1, 1), 2.0) - flat_period_oracle(2.0))
    worst_Z = 0.0
    for l1 in (1.0, 2.0, 5.0):
        for c in (1.5, 2.0, 5.0, 20.0):
            p = catenoid_profile(l1, 1.0, c)
            Z = catenoid.period_vector(p).Z
            for u, v in grid(((-p.U, p.U), (-0.5, 0.5)), 10):
                a = catenoid.immerse(p, u, v).as_array()
                b = catenoid.immerse(p, u + Z.real, v + Z.imag).as_array()
                worst_Z = max(worst_Z, float(np.max(np.abs(a - b))))
    ok = worst_H < 1e-10 and in_range and oracle_err < 1e-8 and worst_Z < 1e-6
    verdict(4, ok, f"max |H| {worst_H:.1e} (<1e-10), theta in range: {in_range}, "
                   f"flat c=2 vs oracle {oracle_err:.1e} (<1e-8), max |X(z+Z)-X(z)| {worst_Z:.1e} (<1e-6)")


def test_criterion_05_flat_catenoid():
    m = MetricParams(1, 1)
    t0 = time.perf_counter()
    p = catenoid.closed_profile(m, 2.0)
    tc = catenoid.total_abs_curvature(p, 20.0)
    elapsed = time.perf_counter() - t0
    U = math.pi / math.sqrt(4 + 2 * math.cos(p.theta) - p.D ** 2)
    du, dt = abs(p.U - U), abs(tc.value - 4 * math.pi)
    verdict(5, du < 1e-8 and dt < 1e-3 and elapsed < 10,
            f"U err {du:.1e} (<1e-8), total |K| - 4pi {dt:.1e} (<1e-3), {elapsed:.2f}s (<10s)")


def test_criterion_06_period_inversion():
    m = MetricParams(2, 1)
    worst = 0.0
    for T in (0.5, 2 * math.pi, 10.0):
        K = helicoid.solve_K_for_period(m, T)
        worst = max(worst, abs(helicoid.solve_profile(m, K).period - T))
    verdict(6, worst < 1e-8, f"max period round-trip error {worst:.1e} (<1e-8)")


def test_criterion_07_minimality():
    m = MetricParams(2, 1)
    rng = np.random.default_rng(2024)
    p = helicoid_profile(2.0, 1.0, 0.5)
    q = catenoid_profile(2.0, 1.0, 2.0)
    wh = max(abs(mean_curvature_fd(m, helicoid.sampler(p), z, h=1e-3))
             for z in random_points(rng, helicoid_window(p), 50))
    wc = max(abs(mean_curvature_fd(m, catenoid.sampler(q), z, h=1e-3))
             for z in random_points(rng, catenoid_window(q), 50))
    verdict(7, wh < 1e-4 and wc < 1e-4, f"max |H| helicoid {wh:.1e}, catenoid {wc:.1e} (<1e-4)")


def test_criterion_08_sections():
    p = helicoid_profile(2.0, 1.0, 0.5)
    sec = helicoid.cross_section(p, 0.3)
    col = 0.0
    for u in np.linspace(-1, 1, 21):
        x = helicoid.immerse(p, u, sec.v0).as_array()
        col = max(col, abs(x[0] * sec.k2 - x[1] * sec.k1), abs(x[2] - 0.3))
    closed, convex, winding = 0.0, True, True
    for l1 in (1.0, 2.0, 5.0):
        q = catenoid_profile(l1, 1.0, 2.0)
        for mu in (-1.0, 0.0, 1.0):
            cs = catenoid.cross_section(q, mu)
            closed = max(closed, float(np.max(np.abs(cs.points[0] - cs.points[-1]))))
            convex &= catenoid.convexity_check(cs).passed
            winding &= catenoid.winding_number(cs) == 1
    ok = col < 1e-10 and closed < 1e-8 and convex and winding
    verdict(8, ok, f"helicoid collinearity {col:.1e} (<1e-10), catenoid closure {closed:.1e} (<1e-8), "
                   f"convex: {convex}, winding 1: {winding}")


def test_criterion_09_curvature():
    rng = np.random.default_rng(99)
    p = helicoid_profile(2.0, 1.0, 0.5)
    q = catenoid_profile(2.0, 1.0, 2.0)
    hc = lambda u, v: helicoid.curvature(p, u, v)
    cc = lambda u, v: catenoid.curvature(q, u, v)
    wh = max(abs(hc(u, v)[1] - fd_gauss_curvature(hc, u, v)) for u, v in random_points(rng, helicoid_window(p), 20))
    wc = max(abs(cc(u, v)[1] - fd_gauss_curvature(cc, u, v)) for u, v in random_points(rng, catenoid_window(q), 20))
    dh = helicoid.total_abs_curvature(p).diverges
    dc = catenoid.total_abs_curvature(q, 40.0).diverges
    verdict(9, wh < 1e-4 and wc < 1e-4 and dh and dc,
            f"|K - FD| helicoid {wh:.1e}, catenoid {wc:.1e} (<1e-4); divergence flags {dh}, {dc}")


def test_criterion_10_limits():
    m = MetricParams(2, 1)
    dev = [r.deviation for r in catenoid.limit_study(m, [10.0, 50.0, 100.0])]
    radii = [r.max_radius for r in catenoid.intersection_shrink_study(m, [2.0, 5.0, 10.0, 50.0])]
    t100 = catenoid.solve_theta_tilde(MetricParams(1, 1), 100.0)
    dev_ok = dev[0] > dev[1] > dev[2] and dev[2] < 0.05
    rad_ok = all(a > b for a, b in zip(radii, radii[1:])) and radii[-1] < 0.01 * radii[0]
    ok = dev_ok and rad_ok and abs(math.pi / 2 - t100) < 0.05
    verdict(10, ok, "deviations " + ", ".join(f"{d:.2e}" for d in dev)
            + "; radii " + ", ".join(f"{r:.2e}" for r in radii)
            + f"; pi/2 - theta_100 = {math.pi / 2 - t100:.1e} (<0.05)")


def test_criterion_11_symmetries():
    rng = np.random.default_rng(7)
    worst = 0.0
    for l1, l2 in METRICS:
        p = helicoid_profile(l1, l2, 0.5)
        for u, v in random_points(rng, ((-1, 1), (-2 * p.W, 2 * p.W)), 20):
            x = helicoid.immerse(p, u, v).as_array()
            for img, sign in (((-u, v), (-1, -1, 1)), ((u, -v), (-1, 1, -1)), ((-u, -v), (1, -1, -1))):
                y = helicoid.immerse(p, *img).as_array()
                worst = max(worst, float(np.max(np.abs(y - x * sign))))
        q = catenoid_profile(l1, l2, 2.0)
        half = catenoid.period_vector(q).half
        for u, v in random_points(rng, ((-q.U, q.U), (-0.5, 0.5)), 20):
            x = catenoid.immerse(q, u, v).as_array()
            for img, sign in (((u + half.real, v + half.imag), (-1, -1, 1)),
                              ((-u, -v), (1, -1, -1)),
                              ((-u + half.real, -v + half.imag), (-1, 1, -1))):
                y = catenoid.immerse(q, *img).as_array()
                worst = max(worst, float(np.max(np.abs(y - x * sign))))
    verdict(11, worst < 1e-6, f"max symmetry defect {worst:.1e} (<1e-6) over three metrics")


def test_criterion_12_additivity_regression():
    worst = 0.0
    for l1 in (1.0, 2.0):
        p = catenoid_profile(l1, 1.0, 2.0)
        for u in np.linspace(-2 * p.U, 2 * p.U, 41):
            worst = max(worst, abs(p.f(u + p.U) - p.f(u) - p.fU))
    gap = abs(catenoid_profile(1.0, 1.0, 2.0).fU - math.pi)
    verdict(12, worst < 1e-10 and gap > 0.1,
            f"|f(u+U) - f(u) - f(U)| {worst:.1e} (<1e-10); flat c=2 |f(U) - pi| = {gap:.3f} (>0.1)")


if __name__ == "__main__":
    import sys
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
