"""The catenoid family: profile ODEs, the period function, closing, sections and limits.

The Gauss map is ``g(u + iv) = exp(f(u) + c v + i phi(u))`` with

    phi' = sqrt(P),  P = c^2 + 2 cos(theta) B - D^2 B^2,
    f'   = D B,
    G'   = (c - phi') / B,

where ``B = lambda1^2 cos^2 phi + lambda2^2 sin^2 phi`` and ``D = sin(theta) / c``.
All three start at 0 for u = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BracketingFailed,
    InsufficientSamples,
    OutsideOmega,
    PeriodObstruction,
    PositivityViolated,
)
from .group import GroupElement, MetricParams
from .numerics import (
    DEFAULT_ODE_TOL,
    DEFAULT_QUAD_TOL,
    OdeSolution,
    find_root,
    integrate_ode,
    integrate_ode_both_ways,
    quad,
    quad_singular,
)
from .weierstrass import GaussMapValue


@dataclass(frozen=True)
class OmegaPoint:
    """A parameter pair (c, theta) together with theta_plus and D."""

    c: float
    theta: float
    theta_plus: float
    D: float


def theta_plus(m: MetricParams, c: float) -> float:
    if c > math.sqrt(2) * m.lambda1:
        return math.pi
    return math.acos(1 - c * c / m.lambda1 ** 2)


def omega_check(m: MetricParams, c: float, theta: float) -> OmegaPoint:
    c, theta = float(c), float(theta)
    if not (c > 0 and math.isfinite(c)):
        raise OutsideOmega(f"c must be positive, got {c}")
    tp = theta_plus(m, c)
    if not abs(theta) < tp:
        raise OutsideOmega(f"|theta| = {abs(theta)} must be below theta_plus = {tp}")
    return OmegaPoint(c, theta, tp, math.sin(theta) / c)


# -- the profile ---------------------------------------------------------------

def _B(phi, m):
    return m.lambda1 ** 2 * np.cos(phi) ** 2 + m.lambda2 ** 2 * np.sin(phi) ** 2


def _P_of_B(op, B):
    return op.c ** 2 + 2 * math.cos(op.theta) * B - op.D ** 2 * B * B


def speed_bounds(op: OmegaPoint, m: MetricParams):
    """Lower and upper bounds of phi' over the admissible range of B."""
    # P is a concave quadratic in B, so its minimum over an interval is at an end
    ends = [_P_of_B(op, m.lambda2 ** 2), _P_of_B(op, m.lambda1 ** 2)]
    vertex = math.cos(op.theta) / op.D ** 2 if op.D != 0 else math.inf
    inner = [_P_of_B(op, vertex)] if m.lambda2 ** 2 < vertex < m.lambda1 ** 2 else []
    lo, hi = min(ends), max(ends + inner)
    if lo <= 0:
        raise PositivityViolated(f"P reaches {lo} <= 0 for c={op.c}, theta={op.theta}")
    return math.sqrt(lo), math.sqrt(hi)


def _rhs(op: OmegaPoint, m: MetricParams):
    l1s, l2s = m.lambda1 ** 2, m.lambda2 ** 2
    c, D, ct = op.c, op.D, math.cos(op.theta)

    def rhs(u, y):
        B = l1s * math.cos(y[0]) ** 2 + l2s * math.sin(y[0]) ** 2
        P = c * c + 2 * ct * B - D * D * B * B
        if not P > 0:
            raise PositivityViolated(f"P = {P} at u = {u}")
        s = math.sqrt(P)
        return [s, D * B, (c - s) / B]

    return rhs


def half_period(op: OmegaPoint, m: MetricParams, tol: float = DEFAULT_QUAD_TOL) -> float:
    """U as the quadrature of dphi / phi' over [0, pi]."""
    return quad(lambda p: 1.0 / np.sqrt(_P_of_B(op, _B(p, m))), 0.0, math.pi,
                tol=tol, vectorized=True)


@dataclass(frozen=True)
class CatenoidProfile:
    """Solved profile; ``solution`` holds the state (phi, f, G) on [-span, span]."""

    omega: OmegaPoint
    metric: MetricParams
    solution: OdeSolution
    U: float
    fU: float
    GU: float

    @property
    def c(self):
        return self.omega.c

    @property
    def theta(self):
        return self.omega.theta

    @property
    def D(self):
        return self.omega.D

    @property
    def span(self):
        return self.solution.t_max

    @property
    def Hval(self):
        return self.D * self.fU + self.c * self.GU

    def state(self, u):
        u = float(u)
        if -self.span <= u <= self.span:
            return self.solution(u)
        k = math.floor(u / self.U + 0.5)
        y = self.solution(u - k * self.U)
        return np.array([y[0] + k * math.pi, y[1] + k * self.fU, y[2] + k * self.GU])

    def jet(self, u):
        """(phi, f, G) and (phi', f', G') at u."""
        y = self.state(u)
        return y, np.asarray(_rhs(self.omega, self.metric)(u, y.tolist()))

    def phi(self, u):
        return float(self.state(u)[0])

    def f(self, u):
        return float(self.state(u)[1])

    def G(self, u):
        return float(self.state(u)[2])

    def second_derivatives(self, u):
        """(phi'', f'') from the closed forms obtained by differentiating the ODEs."""
        m = self.metric
        (phi, _, _), (dphi, _, _) = self.jet(u)
        dB = -(m.lambda1 ** 2 - m.lambda2 ** 2) * math.sin(2 * phi)
        B = float(_B(phi, m))
        return (math.cos(self.theta) - self.D ** 2 * B) * dB, self.D * dB * dphi


def solve_profile(op: OmegaPoint, m: MetricParams, tol: float = DEFAULT_ODE_TOL) -> CatenoidProfile:
    a1, a2 = speed_bounds(op, m)
    rhs = _rhs(op, m)
    U_est = half_period(op, m)
    span = 2 * U_est + 1
    sol = integrate_ode_both_ways(rhs, [0.0, 0.0, 0.0], span, tol)
    lo, hi = 0.95 * U_est, min(1.05 * U_est, span)
    U = find_root(lambda u: sol(u)[0] - math.pi, lo, hi, tol=1e-14, xtol=1e-15).root

    speeds = sol.derivs[:, 0]
    assert np.all(speeds >= a1 * (1 - 1e-12)) and np.all(speeds <= a2 * (1 + 1e-12))
    assert np.all(np.diff(sol.values[:, 0]) > 0), "phi must be strictly increasing"

    y = sol(U)
    return CatenoidProfile(op, m, sol, U, float(y[1]), float(y[2]))


# -- the period function ------------------------------------------------------

def H_value(op: OmegaPoint, m: MetricParams, tol: float = DEFAULT_ODE_TOL) -> float:
    """H(c, theta) = D f(U) + c G(U) from a forward solve up to the first phi = pi."""
    speed_bounds(op, m)
    U_est = half_period(op, m)
    sol = integrate_ode(_rhs(op, m), [0.0, 0.0, 0.0], (0.0, 1.05 * U_est), tol)
    U = find_root(lambda u: sol(u)[0] - math.pi, 0.95 * U_est, 1.05 * U_est,
                  tol=1e-14, xtol=1e-15).root
    y = sol(U)
    return op.D * y[1] + op.c * y[2]


def H_value_integral(op: OmegaPoint, m: MetricParams, tol: float = DEFAULT_QUAD_TOL) -> float:
    """H(c, theta) as an integral over x = cos(phi) in [-1, 1]."""
    speed_bounds(op, m)
    c, D, ct = op.c, op.D, math.cos(op.theta)
    l1s, l2s = m.lambda1 ** 2, m.lambda2 ** 2

    def smooth(x):
        B = l1s * x * x + l2s * (1 - x * x)
        s = np.sqrt(c * c + 2 * ct * B - D * D * B * B)
        return (D * D * B * (2 * c + s) - 2 * c * ct) / ((c + s) * s)

    return quad_singular(smooth, tol=tol, vectorized=True)


def solve_theta_tilde(m: MetricParams, c: float, tol: float = 1e-12) -> float:
    """The unique theta in (0, min(pi/2, theta_plus)) with H(c, theta) = 0."""
    tp = theta_plus(m, c)

    def H(theta):
        return H_value(omega_check(m, c, theta), m)

    lo = tol
    if H(lo) >= 0:
        raise BracketingFailed(f"H(c={c}, theta={lo}) is not negative")
    if tp > math.pi / 2:
        hi = math.pi / 2 - 1e-9
        if not H(hi) > 0:
            raise BracketingFailed(f"H(c={c}, pi/2) is not positive")
    else:
        # H blows up at theta_plus, where phi' can vanish; approach it geometrically
        gap = tp / 2
        hi = tp - gap
        while not H(hi) > 0:
            gap /= 2
            if gap < 1e-12:
                raise BracketingFailed(f"no sign change of H below theta_plus={tp}")
            hi = tp - gap
    return find_root(H, lo, hi, tol=tol, xtol=1e-15).root


# -- Gauss map ----------------------------------------------------------------

def gauss_map(p: CatenoidProfile, u: float, v: float):
    """Analytic ``(GaussMapValue, g_{z zbar})`` at ``u + iv``."""
    c = p.c
    (phi, f, _), (dphi, df, _) = p.jet(u)
    ddphi, ddf = p.second_derivatives(u)
    g = math.exp(f + c * v) * complex(math.cos(phi), math.sin(phi))
    w = complex(df, dphi)
    gv = GaussMapValue(g, 0.5 * (w - 1j * c) * g, 0.5 * (w + 1j * c) * g)
    return gv, 0.25 * (complex(ddf, ddphi) + w * w + c * c) * g


def gauss_map_function(p: CatenoidProfile):
    c = p.c

    def g(u, v):
        phi, f, _ = p.state(u)
        return math.exp(f + c * v) * complex(math.cos(phi), math.sin(phi))

    return g


# -- the immersion ------------------------------------------------------------

def _planar_part(p: CatenoidProfile, u: float, A: float, x3: float, jet=None):
    m = p.metric
    l1, l2, c, D = m.lambda1, m.lambda2, p.c, p.D
    (phi, _, _), (dphi, df, _) = jet if jet is not None else p.jet(u)
    B = float(_B(phi, m))
    ch, sh = math.cosh(A), math.sinh(A)
    cx, sx = math.cos(x3), math.sin(x3)
    ld = l1 * l2 * D
    M1 = c * cx * ch - ld * sx * sh
    M2 = c * cx * sh - ld * sx * ch
    M3 = c * sx * sh + ld * cx * ch
    M4 = c * sx * ch + ld * cx * sh
    cp, sp, q = math.cos(phi), math.sin(phi), c - dphi
    pre = -1.0 / ((c * c + ld * ld) * B)
    x1 = pre * (df * cp * M1 / l1 - q * sp * M2 / l1 - q * cp * M3 / l2 - df * sp * M4 / l2)
    x2 = pre * (df * cp * M4 / l1 - q * sp * M3 / l1 + q * cp * M2 / l2 + df * sp * M1 / l2)
    return x1, x2


def immerse(p: CatenoidProfile, u: float, v: float) -> GroupElement:
    m = p.metric
    jet = p.jet(u)
    f, G = jet[0][1], jet[0][2]
    A = f + p.c * v
    x3 = m.lambda1 * m.lambda2 * (G - p.D * v)
    x1, x2 = _planar_part(p, u, A, x3, jet)
    return GroupElement(x1, x2, float(x3))


def sampler(p: CatenoidProfile):
    return lambda u, v: immerse(p, u, v)


@dataclass(frozen=True)
class PeriodVector:
    Z: complex

    @property
    def half(self):
        return self.Z / 2


def x3_period_defect(p: CatenoidProfile) -> float:
    """x3(z + Z) - x3(z), which equals 2 lambda1 lambda2 H / c for every z."""
    m = p.metric
    return 2 * m.lambda1 * m.lambda2 * p.Hval / p.c


def period_vector(p: CatenoidProfile, tol: float = 1e-8) -> PeriodVector:
    if abs(x3_period_defect(p)) > tol:
        raise PeriodObstruction(f"H = {p.Hval:.3e}; the surface does not close at theta={p.theta}")
    return PeriodVector(complex(2 * p.U, -2 * p.fU / p.c))


def lattice_vector(p: CatenoidProfile) -> complex:
    """2U - 2i f(U) / c without checking that the period problem is solved."""
    return complex(2 * p.U, -2 * p.fU / p.c)


# -- cross-sections -------------------------------------------------------------

@dataclass(frozen=True)
class CrossSection:
    """Samples of the section at x3 = lambda1 lambda2 mu.

    ``points`` is ``gamma(u)``; ``planar`` the section rotated back to the
    plane x3 = 0 and ``tangent`` its u-derivative.
    """

    mu: float
    U: float
    u: np.ndarray
    phi: np.ndarray
    points: np.ndarray
    planar: np.ndarray
    tangent: np.ndarray
    lambdas: tuple = field(default=(1.0, 1.0))


def _section_jet(p: CatenoidProfile, u: float, mu: float):
    m = p.metric
    l1, l2, c, D = m.lambda1, m.lambda2, p.c, p.D
    (phi, f, G), (dphi, df, _) = p.jet(u)
    B = float(_B(phi, m))
    v = (G - mu) / D
    A = f + c * v
    ch, sh = math.cosh(A), math.sinh(A)
    cp, sp, q = math.cos(phi), math.sin(phi), c - dphi
    J1 = df * cp * ch - q * sp * sh
    J2 = df * cp * sh - q * sp * ch
    J3 = df * sp * ch + q * cp * sh
    J4 = df * sp * sh + q * cp * ch
    pre = -1.0 / ((c * c + (l1 * l2 * D) ** 2) * B)
    xt1 = pre * (c / l1 * J1 - l1 * D * J4)
    xt2 = pre * (c / l2 * J3 + l2 * D * J2)
    S = df * df + q * q
    dx1 = S * sp * ch / (l1 * D * B * B)
    dx2 = -S * cp * ch / (l2 * D * B * B)
    return phi, (xt1, xt2), (dx1, dx2)


def cross_section(p: CatenoidProfile, mu: float, n: int = 257) -> CrossSection:
    """Sample the section at height lambda1 lambda2 mu over u in [0, 2U]."""
    if n < 8:
        raise InsufficientSamples(f"need at least 8 samples, got {n}")
    m = p.metric
    x3 = m.lambda1 * m.lambda2 * mu
    us = np.linspace(0.0, 2 * p.U, n)
    phis, planar, tangent = [], [], []
    for u in us:
        phi, xt, dx = _section_jet(p, u, mu)
        phis.append(phi)
        planar.append(xt)
        tangent.append(dx)
    planar = np.array(planar)
    # undo the rotation by -x3 that brought the section down to x3 = 0
    cx, sx = math.cos(x3), math.sin(x3)
    pts = np.column_stack([cx * planar[:, 0] - sx * planar[:, 1],
                           sx * planar[:, 0] + cx * planar[:, 1],
                           np.full(n, x3)])
    return CrossSection(mu, p.U, us, np.array(phis), pts, planar, np.array(tangent),
                        (m.lambda1, m.lambda2))


@dataclass(frozen=True)
class ConvexityResult:
    passed: bool
    worst_margin: float


def convexity_check(cs: CrossSection) -> ConvexityResult:
    """Check the section is convex.

    On each of the two arcs where cos(phi) keeps its sign the slope
    dx1/dx2 must decrease strictly and x2' must keep the sign of -cos(phi);
    additionally the sampled polygon must turn the same way at every vertex.
    """
    if len(cs.u) < 8:
        raise InsufficientSamples(f"need at least 8 samples, got {len(cs.u)}")
    U = cs.U
    margins = []
    # u = 2U repeats u = 0
    keep = cs.u < 2 * U * (1 - 1e-12)
    u, tangent = cs.u[keep], cs.tangent[keep]
    shifted = np.where(u > 1.5 * U, u - 2 * U, u)
    for centre, sign in ((0.0, -1.0), (U, 1.0)):
        # stay clear of the arc ends, where x2' vanishes
        mask = np.abs(shifted - centre) < 0.5 * U * (1 - 1e-6)
        order = np.argsort(shifted[mask])
        dx1 = tangent[mask, 0][order]
        dx2 = tangent[mask, 1][order]
        slope = dx1 / dx2
        margins.append(float(np.min(-np.diff(slope))) if len(slope) > 1 else math.inf)
        margins.append(float(np.min(sign * dx2)))

    closed = cs.planar[:-1] if np.allclose(cs.planar[0], cs.planar[-1]) else cs.planar
    e = np.diff(np.vstack([closed, closed[:1]]), axis=0)
    turn = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    orient = np.sign(np.sum(turn))
    margins.append(float(np.min(orient * turn)))
    worst = min(margins)
    return ConvexityResult(worst > 0, worst)


def winding_number(cs: CrossSection, centre=(0.0, 0.0)) -> int:
    xy = cs.points[:, :2] - np.asarray(centre)
    ang = np.arctan2(xy[:, 1], xy[:, 0])
    steps = np.diff(np.append(ang, ang[0]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    return int(round(float(np.sum(steps)) / (2 * math.pi)))


# -- curvature ----------------------------------------------------------------

def _curvature_parts(m, c, phi, dphi, df, A):
    d = m.lambda1 ** 2 - m.lambda2 ** 2
    B = _B(phi, m)
    S = df * df + (c - dphi) ** 2
    ch2 = np.cosh(A) ** 2
    lap = ((c * c + df * df) / ch2
           + d * d * np.sin(2 * phi) ** 2 * S / (4 * B * B)
           + d * dphi * ((dphi - c) * np.cos(2 * phi) - df * np.tanh(A) * np.sin(2 * phi)) / B)
    rho2 = S * ch2 / (B * B)
    return rho2, lap


def curvature(p: CatenoidProfile, u: float, v: float):
    """``(rho^2, Gauss curvature)`` at ``u + iv``."""
    m = p.metric
    c = p.c
    (phi, f, _), (dphi, df, _) = p.jet(u)
    A = f + c * v
    d = m.lambda1 ** 2 - m.lambda2 ** 2
    B = float(_B(phi, m))
    S = df * df + (c - dphi) ** 2
    ch2 = math.cosh(A) ** 2
    kg = (-B * B * (c * c + df * df) / (ch2 * ch2 * S)
          - d * d * math.sin(2 * phi) ** 2 / (4 * ch2)
          - d * B * dphi * ((dphi - c) * math.cos(2 * phi) - df * math.tanh(A) * math.sin(2 * phi))
          / (ch2 * S))
    return S * ch2 / (B * B), kg


def laplacian_log_rho(p: CatenoidProfile, u: float, v: float) -> float:
    (phi, f, _), (dphi, df, _) = p.jet(u)
    return float(_curvature_parts(p.metric, p.c, phi, dphi, df, f + p.c * v)[1])


def _gl_nodes(a, b, panels, order=10):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return ((mid[:, None] + half[:, None] * x[None, :]).ravel(),
            (half[:, None] * w[None, :]).ravel())


@dataclass(frozen=True)
class TotalCurvature:
    value: float
    half_window_value: float
    diverges: bool


def _integrate_abs_curvature(p: CatenoidProfile, V: float, u_panels: int, v_panels: int):
    if V <= 0:
        return 0.0
    u_nodes, u_w = _gl_nodes(-p.U, p.U, u_panels)
    jets = [p.jet(u) for u in u_nodes]
    phi = np.array([j[0][0] for j in jets])
    f = np.array([j[0][1] for j in jets])
    dphi = np.array([j[1][0] for j in jets])
    df = np.array([j[1][1] for j in jets])
    v_nodes, v_w = _gl_nodes(-V, V, v_panels)
    A = f[:, None] + p.c * v_nodes[None, :]
    _, lap = _curvature_parts(p.metric, p.c, phi[:, None], dphi[:, None], df[:, None], A)
    return float(u_w @ np.abs(lap) @ v_w)


def total_abs_curvature(p: CatenoidProfile, window: float = 40.0, *, u_panels: int = 32,
                        v_panels: int | None = None, growth: float = 0.1) -> TotalCurvature:
    """Total |K| dA over u in [-U, U] and v in [-window, window].

    ``diverges`` is set when doubling the v-window from ``window / 2`` raises
    the value by more than ``growth`` (relative).
    """
    if v_panels is None:
        v_panels = max(16, int(math.ceil(20 * window * p.c)))
    full = _integrate_abs_curvature(p, window, u_panels, v_panels)
    half = _integrate_abs_curvature(p, window / 2, u_panels, v_panels)
    return TotalCurvature(full, half, bool(half > 0 and full > (1 + growth) * half))


# -- limits ---------------------------------------------------------------------

def closed_profile(m: MetricParams, c: float, tol: float = 1e-12) -> CatenoidProfile:
    """The profile at theta = theta_tilde(c), where the annulus closes."""
    theta = solve_theta_tilde(m, c, tol)
    return solve_profile(omega_check(m, c, theta), m)


def limit_point(m: MetricParams, ut: float, vt: float):
    e = math.exp(vt)
    return np.array([-math.cos(ut) * e / (2 * m.lambda1), -math.sin(ut) * e / (2 * m.lambda2), 0.0])


@dataclass(frozen=True)
class LimitRow:
    c: float
    theta_tilde: float
    deviation: float


def limit_study(m: MetricParams, c_list: Sequence[float], u_grid=None, v_grid=None):
    """Sup-norm distance of the rescaled catenoids from their planar limit."""
    u_grid = np.linspace(-math.pi, math.pi, 5) if u_grid is None else np.asarray(u_grid)
    v_grid = np.linspace(-1.0, 1.0, 5) if v_grid is None else np.asarray(v_grid)
    rows = []
    for c in c_list:
        p = closed_profile(m, c)
        dev = 0.0
        for ut in u_grid:
            for vt in v_grid:
                x = immerse(p, ut / c, (2 * math.log(c) + vt) / c).as_array()
                dev = max(dev, float(np.max(np.abs(x - limit_point(m, ut, vt)))))
        rows.append(LimitRow(float(c), p.theta, dev))
    return rows


@dataclass(frozen=True)
class ShrinkRow:
    c: float
    max_radius: float
    bound: float


def section_radius_bound(m: MetricParams, c: float, A_max: float) -> float:
    """Upper bound for sqrt(x1^2 + x2^2) on the x3 = 0 section, given max |A| there."""
    l1, l2 = m.lambda1, m.lambda2
    k = l1 * l1 / (c * c) + 2
    ch, sh = math.cosh(A_max), math.sinh(A_max)
    pre = 1.0 / (l2 * l2 * c * c)
    b1 = pre * ((l1 + l1 ** 3 / c ** 2 * k) * ch + (l1 * k + l1 ** 3 / c ** 2) * sh)
    b2 = pre * ((l1 * l1 / l2 + l1 * l1 * l2 / c ** 2 * k) * ch
                + (l1 * l1 / l2 * k + l1 * l1 * l2 / c ** 2) * sh)
    return math.hypot(b1, b2)


def intersection_shrink_study(m: MetricParams, c_list: Sequence[float], n: int = 257):
    rows = []
    for c in c_list:
        p = closed_profile(m, c)
        cs = cross_section(p, 0.0, n)
        radius = float(np.max(np.hypot(cs.points[:, 0], cs.points[:, 1])))
        A = [p.f(u) + p.c * p.G(u) / p.D for u in cs.u]
        rows.append(ShrinkRow(float(c), radius, section_radius_bound(m, c, max(map(abs, A)))))
    return rows
