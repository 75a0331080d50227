"""Run the invariant suite of one surface and collect a JSON-serializable report."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from . import catenoid, helicoid
from .config import RunConfig
from .group import GroupElement, MetricParams, coord_to_frame_array
from .weierstrass import (
    eta_and_A,
    gauss_map_fd,
    hopf,
    immersion_jet,
    mean_curvature_fd,
    pde_residual,
)


@dataclass
class Record:
    name: str
    anchor: str
    value: float
    tol: float
    passed: bool
    error: str | None = None

    def to_dict(self):
        # strict JSON has no NaN; failed evaluations report null
        value = self.value if math.isfinite(self.value) else None
        d = {"name": self.name, "anchor": self.anchor, "value": value,
             "tol": self.tol, "pass": self.passed}
        if self.error:
            d["error"] = self.error
        return d


@dataclass
class VerificationReport:
    family: str
    config_hash: str
    records: List[Record] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def n_pass(self):
        return sum(r.passed for r in self.records)

    @property
    def n_fail(self):
        return len(self.records) - self.n_pass

    @property
    def ok(self):
        return self.n_fail == 0

    def to_dict(self):
        return {
            "family": self.family,
            "config_hash": self.config_hash,
            "summary": {"total": len(self.records), "passed": self.n_pass, "failed": self.n_fail},
            "solver": self.metadata,
            "records": [r.to_dict() for r in self.records],
        }

    def write(self, path):
        with open(os.fspath(path), "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True, allow_nan=False)
            fh.write("\n")


class _Checker:
    def __init__(self, report: VerificationReport):
        self.report = report

    def check(self, name: str, anchor: str, tol: float, fn: Callable[[], float], *, at_least=False):
        """Record ``fn()``; it passes when below ``tol`` (or above it with ``at_least``)."""
        try:
            value = float(fn())
            ok = value > tol if at_least else abs(value) <= tol
            rec = Record(name, anchor, value, tol, bool(ok and math.isfinite(value)))
        except Exception as exc:  # solver failures become failed records
            rec = Record(name, anchor, float("nan"), tol, False, f"{type(exc).__name__}: {exc}")
        self.report.records.append(rec)
        return rec

    def fail(self, name: str, anchor: str, exc: Exception):
        rec = Record(name, anchor, float("nan"), 0.0, False, f"{type(exc).__name__}: {exc}")
        self.report.records.append(rec)
        return rec


def _interior_points(rng, n, u_range, v_range):
    return list(zip(rng.uniform(*u_range, n), rng.uniform(*v_range, n)))


def _conformality(m, sampler, pts):
    worst = 0.0
    for u, v in pts:
        x0, xu, xv, *_ = immersion_jet(sampler, u, v)
        a = coord_to_frame_array(m, x0[2], xu)
        b = coord_to_frame_array(m, x0[2], xv)
        E = a @ a
        worst = max(worst, abs(a @ a - b @ b) / E, abs(a @ b) / E)
    return worst


def _xz_consistency(m, sampler, gauss, pts):
    worst = 0.0
    for u, v in pts:
        x0, xu, xv, *_ = immersion_jet(sampler, u, v)
        fd = 0.5 * (coord_to_frame_array(m, x0[2], xu) - 1j * coord_to_frame_array(m, x0[2], xv))
        gv, _ = gauss(u, v)
        worst = max(worst, float(np.max(np.abs(fd - eta_and_A(m, gv).as_array()))))
    return worst


def _ln_rho_laplacian_defect(curv, pts, h=1e-3):
    worst = 0.0
    for u, v in pts:
        def ln_rho(a, b):
            return 0.5 * math.log(curv(a, b)[0])
        lap = (-(ln_rho(u + 2 * h, v) + ln_rho(u - 2 * h, v) + ln_rho(u, v + 2 * h) + ln_rho(u, v - 2 * h))
               + 16 * (ln_rho(u + h, v) + ln_rho(u - h, v) + ln_rho(u, v + h) + ln_rho(u, v - h))
               - 60 * ln_rho(u, v)) / (12 * h * h)
        rho2, kg = curv(u, v)
        worst = max(worst, abs(kg + lap / rho2) / max(1.0, abs(kg)))
    return worst


def verify_helicoid(cfg: RunConfig, report: VerificationReport):
    ck = _Checker(report)
    m = MetricParams(cfg.lambda1, cfg.lambda2)
    K = cfg.K
    try:
        p = helicoid.solve_profile(m, K, cfg.tol.ode)
    except Exception as exc:
        ck.fail("profile solve", "helicoid profile", exc)
        return
    report.metadata.update({"W": p.W, "x3W": p.x3W, "period": p.period, "K": K})
    W = p.W
    rng = np.random.default_rng(12345)
    pts = _interior_points(rng, 10, (-0.8, 0.8), (-W, W))
    grid = [(u, v) for u in np.linspace(-1, 1, 6) for v in np.linspace(-W, W, 6)]

    if m.is_flat:
        ck.check("W closed form", "flat helicoid half-turn", 1e-10, lambda: W - math.pi / math.sqrt(1 - K))
    ck.check("b(W) = pi", "half-turn event", 1e-10, lambda: p.b(W) - math.pi)
    ck.check("b(W/2) = pi/2", "quarter-turn value", 1e-10, lambda: p.b(W / 2) - math.pi / 2)
    ck.check("b odd", "profile oddness", 1e-10,
             lambda: max(abs(p.b(v) + p.b(-v)) for v in np.linspace(0, 2 * W, 21)))
    ck.check("b quasi-periodic", "profile quasi-periodicity", 1e-10,
             lambda: max(abs(p.b(v + W) - p.b(v) - math.pi) for v in np.linspace(-W, W, 21)))
    ck.check("x3 quasi-periodic", "height quasi-periodicity", 1e-10,
             lambda: max(abs(p.x3(v + W) - p.x3(v) - p.x3W) for v in np.linspace(-W, W, 21)))
    ck.check("Hopf = K/16", "constant Hopf differential", 1e-10,
             lambda: max(abs(hopf(m, helicoid.gauss_map(p, u, v)[0]).Q - K / 16) for u, v in grid))
    ck.check("PDE residual (analytic)", "Gauss map equation", 1e-10,
             lambda: max(abs(pde_residual(m, *helicoid.gauss_map(p, u, v))) for u, v in grid))
    gfun = helicoid.gauss_map_function(p)
    ck.check("PDE residual (finite differences)", "Gauss map equation", 1e-5,
             lambda: max(abs(pde_residual(m, *gauss_map_fd(gfun, u, v))) for u, v in pts))
    smp = helicoid.sampler(p)
    ck.check("conformality", "conformal immersion", 1e-8, lambda: _conformality(m, smp, pts))
    ck.check("X_z matches Weierstrass data", "immersion differential", 1e-6,
             lambda: _xz_consistency(m, smp, lambda u, v: helicoid.gauss_map(p, u, v), pts))
    ck.check("mean curvature (FD)", "minimality", 1e-4,
             lambda: max(abs(mean_curvature_fd(m, smp, z)) for z in pts))
    ck.check("Gauss curvature vs -Lap(ln rho)/rho^2", "intrinsic curvature", 1e-4,
             lambda: _ln_rho_laplacian_defect(lambda u, v: helicoid.curvature(p, u, v), pts))

    def symmetry():
        worst = 0.0
        for u, v in pts:
            a = helicoid.immerse(p, u, v).as_array()
            b = helicoid.immerse(p, -u, v).as_array()
            worst = max(worst, float(np.max(np.abs(b - a * np.array([-1, -1, 1])))))
        return worst
    ck.check("half-turn about the x3-axis", "axis symmetry", 1e-8, symmetry)

    def translation():
        worst = 0.0
        shift = GroupElement(0.0, 0.0, p.period)
        for u, v in pts:
            a = (shift * helicoid.immerse(p, u, v)).as_array()
            b = helicoid.immerse(p, u, v + 2 * W).as_array()
            worst = max(worst, float(np.max(np.abs(b - a))))
        return worst
    ck.check("screw period", "translation invariance", 1e-8, translation)

    def collinear():
        sec = helicoid.cross_section(p, 0.3)
        worst = 0.0
        for u in np.linspace(-1, 1, 9):
            x = helicoid.immerse(p, u, sec.v0).as_array()
            worst = max(worst, abs(x[0] * sec.k2 - x[1] * sec.k1), abs(x[2] - 0.3))
        return worst
    ck.check("section collinearity", "straight-line sections", 1e-10, collinear)

    tc = helicoid.total_abs_curvature(p)
    report.metadata["total_abs_curvature"] = tc.value
    if m.is_flat:
        ck.check("total |K| = 4W", "flat total curvature", 1e-3, lambda: tc.value - 4 * W)
    else:
        ck.check("total |K| diverges", "anisotropic total curvature", 0.0,
                 lambda: float(tc.diverges), at_least=True)


def verify_catenoid(cfg: RunConfig, report: VerificationReport):
    ck = _Checker(report)
    m = MetricParams(cfg.lambda1, cfg.lambda2)
    c = cfg.c
    try:
        theta = cfg.theta if cfg.theta is not None else catenoid.solve_theta_tilde(m, c, cfg.tol.root)
        p = catenoid.solve_profile(catenoid.omega_check(m, c, theta), m, cfg.tol.ode)
    except Exception as exc:
        ck.fail("profile solve", "catenoid profile", exc)
        return
    Z = catenoid.lattice_vector(p)
    report.metadata.update({"c": c, "theta": theta, "theta_solved": cfg.theta is None,
                            "U": p.U, "fU": p.fU, "GU": p.GU, "H": p.Hval,
                            "Z": [Z.real, Z.imag]})
    U = p.U
    rng = np.random.default_rng(12345)
    pts = _interior_points(rng, 10, (-U, U), (-0.5, 0.5))
    grid = [(u, v) for u in np.linspace(-U, U, 6) for v in np.linspace(-1, 1, 6)]

    ck.check("|H(c, theta)|", "period problem", 1e-10, lambda: p.Hval)
    ck.check("H via ODE vs singular integral", "period function forms", 1e-8,
             lambda: p.Hval - catenoid.H_value_integral(p.omega, m, cfg.tol.quad))
    if m.is_flat:
        ck.check("U closed form", "flat catenoid half-period", 1e-8,
                 lambda: U - math.pi / math.sqrt(c * c + 2 * math.cos(theta) - p.D ** 2))
    ck.check("phi(U) = pi", "half-period event", 1e-10, lambda: p.phi(U) - math.pi)
    ck.check("phi(U/2) = pi/2", "quarter-period value", 1e-10, lambda: p.phi(U / 2) - math.pi / 2)
    ck.check("f(u+U) = f(u) + f(U)", "f additivity", 1e-10,
             lambda: max(abs(p.f(u + U) - p.f(u) - p.fU) for u in np.linspace(-U, U, 21)))
    ck.check("G(u+U) = G(u) + G(U)", "G additivity", 1e-10,
             lambda: max(abs(p.G(u + U) - p.G(u) - p.GU) for u in np.linspace(-U, U, 21)))
    ck.check("Hopf = exp(-i theta)/8", "constant Hopf differential", 1e-10,
             lambda: max(abs(hopf(m, catenoid.gauss_map(p, u, v)[0]).Q - np.exp(-1j * theta) / 8)
                         for u, v in grid))
    ck.check("PDE residual (analytic)", "Gauss map equation", 1e-10,
             lambda: max(abs(pde_residual(m, *catenoid.gauss_map(p, u, v))) for u, v in grid))
    gfun = catenoid.gauss_map_function(p)
    ck.check("PDE residual (finite differences)", "Gauss map equation", 1e-5,
             lambda: max(abs(pde_residual(m, *gauss_map_fd(gfun, u, v))) for u, v in pts))
    smp = catenoid.sampler(p)
    ck.check("conformality", "conformal immersion", 1e-8, lambda: _conformality(m, smp, pts))
    ck.check("X_z matches Weierstrass data", "immersion differential", 1e-6,
             lambda: _xz_consistency(m, smp, lambda u, v: catenoid.gauss_map(p, u, v), pts))
    ck.check("mean curvature (FD)", "minimality", 1e-4,
             lambda: max(abs(mean_curvature_fd(m, smp, z)) for z in pts))
    ck.check("Gauss curvature vs -Lap(ln rho)/rho^2", "intrinsic curvature", 1e-4,
             lambda: _ln_rho_laplacian_defect(lambda u, v: catenoid.curvature(p, u, v), pts))

    def periodicity():
        worst = 0.0
        for u in np.linspace(-U, U, 10):
            for v in np.linspace(-0.5, 0.5, 10):
                a = catenoid.immerse(p, u, v).as_array()
                b = catenoid.immerse(p, u + Z.real, v + Z.imag).as_array()
                worst = max(worst, float(np.max(np.abs(a - b))))
        return worst
    ck.check("X(z + Z) = X(z)", "annulus closes", 1e-6, periodicity)

    def symmetries():
        worst = 0.0
        for u, v in pts:
            a = catenoid.immerse(p, u, v).as_array()
            b = catenoid.immerse(p, u + Z.real / 2, v + Z.imag / 2).as_array()
            d = catenoid.immerse(p, -u, -v).as_array()
            worst = max(worst, float(np.max(np.abs(b - a * np.array([-1, -1, 1])))),
                        float(np.max(np.abs(d - a * np.array([1, -1, -1])))))
        return worst
    ck.check("half-turn symmetries", "axis symmetries", 1e-6, symmetries)

    for mu in (-1.0, 0.0, 1.0):
        try:
            cs = catenoid.cross_section(p, mu)
        except Exception as exc:
            ck.fail(f"section mu={mu:g}", "closed convex sections", exc)
            continue
        ck.check(f"section mu={mu:g} closed", "closed convex sections", 1e-8,
                 lambda cs=cs: float(np.max(np.abs(cs.points[0] - cs.points[-1]))))
        ck.check(f"section mu={mu:g} convex", "closed convex sections", 0.0,
                 lambda cs=cs: catenoid.convexity_check(cs).worst_margin, at_least=True)
        ck.check(f"section mu={mu:g} winds once", "x3-axis inside", 0.0,
                 lambda cs=cs: catenoid.winding_number(cs) - 1)

    tc = catenoid.total_abs_curvature(p, 40.0 if not m.is_flat else 20.0)
    report.metadata["total_abs_curvature"] = tc.value
    if m.is_flat:
        ck.check("total |K| = 4 pi", "flat total curvature", 1e-3, lambda: tc.value - 4 * math.pi)
    else:
        ck.check("total |K| diverges", "anisotropic total curvature", 0.0,
                 lambda: float(tc.diverges), at_least=True)


def run_verification(cfg: RunConfig) -> VerificationReport:
    report = VerificationReport(cfg.family, cfg.config_hash())
    report.metadata["lambda"] = [cfg.lambda1, cfg.lambda2]
    report.metadata["tolerances"] = {"ode": cfg.tol.ode, "quad": cfg.tol.quad, "root": cfg.tol.root}
    if cfg.family == "helicoid":
        verify_helicoid(cfg, report)
    else:
        verify_catenoid(cfg, report)
    if cfg.outputs.report:
        report.write(cfg.outputs.report)
    return report
