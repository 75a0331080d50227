"""The helicoid family: profile ODEs, immersion, sections, period inversion, curvature.

The Gauss map is ``g(u + iv) = exp(-lambda1 u + i b(v))`` where ``b`` solves
``b' = sqrt(lambda1^2 - K B(b))`` with ``B(b) = lambda1^2 cos^2 b + lambda2^2 sin^2 b``
and ``b(0) = 0``.  The height ``x3`` solves ``x3' = lambda1 lambda2 K / (lambda1 + b')``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidK, NoRoot, NoSignChange
from .group import GroupElement, MetricParams
from .numerics import (
    DEFAULT_ODE_TOL,
    DEFAULT_QUAD_TOL,
    DEFAULT_ROOT_TOL,
    OdeSolution,
    find_root,
    integrate_ode_both_ways,
    quad,
)
from .weierstrass import GaussMapValue

K_LIMIT = 1 - 1e-6


def anisotropy(b, m: MetricParams):
    """B(b) = lambda1^2 cos^2 b + lambda2^2 sin^2 b (works on arrays)."""
    return m.lambda1 ** 2 * np.cos(b) ** 2 + m.lambda2 ** 2 * np.sin(b) ** 2


def _b_speed(b, m, K):
    # lambda1^2 - K B(b), arranged to avoid cancellation when K is close to 1
    d = m.lambda1 ** 2 - m.lambda2 ** 2
    return np.sqrt(m.lambda1 ** 2 * (1 - K) + K * d * np.sin(b) ** 2)


def _check_K(K):
    K = float(K)
    if K == 0:
        raise InvalidK("K = 0 gives a degenerate (point) image")
    if not abs(K) < K_LIMIT:
        raise InvalidK(f"|K| must be below {K_LIMIT}, got {K}")
    return K


def _quad_over_half_turn(f, tol):
    """Integral of a function symmetric about pi/2 over [0, pi].

    For K near 1 the integrands peak sharply at b = 0, so [0, pi/2] is cut
    into dyadically shrinking pieces toward 0.
    """
    edges = [0.0] + [0.5 * math.pi * 2.0 ** -k for k in range(40, -1, -1)]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += quad(f, a, b, tol=tol, vectorized=True)
    return 2 * total


def half_turn_length(m: MetricParams, K: float, tol: float = DEFAULT_QUAD_TOL) -> float:
    """W as the quadrature of db / b' over [0, pi]."""
    return _quad_over_half_turn(lambda b: 1.0 / _b_speed(b, m, K), tol)


def period_from_K(m: MetricParams, K: float, tol: float = DEFAULT_QUAD_TOL) -> float:
    """Translation period 2 x3(W) as a quadrature over b in [0, pi]."""
    l1, l2 = m.lambda1, m.lambda2

    def integrand(b):
        s = _b_speed(b, m, K)
        return 2 * l1 * l2 * K / (s * (l1 + s))

    return _quad_over_half_turn(integrand, tol)


@dataclass(frozen=True)
class HelicoidProfile:
    """Solved profile of the helicoid with parameter K.

    ``solution`` holds the state ``(b, x3)`` on ``[-span, span]``; queries
    outside use ``b(v + W) = b(v) + pi`` and ``x3(v + W) = x3(v) + x3(W)``.
    """

    K: float
    metric: MetricParams
    solution: OdeSolution
    W: float
    x3W: float

    @property
    def span(self):
        return self.solution.t_max

    def state(self, v):
        v = float(v)
        if -self.span <= v <= self.span:
            return self.solution(v)
        k = math.floor(v / self.W + 0.5)
        y = self.solution(v - k * self.W)
        return np.array([y[0] + k * math.pi, y[1] + k * self.x3W])

    def b(self, v):
        return float(self.state(v)[0])

    def x3(self, v):
        return float(self.state(v)[1])

    def b_prime(self, v):
        return float(_b_speed(self.b(v), self.metric, self.K))

    def b_second(self, v):
        m = self.metric
        b = self.b(v)
        return self.K * (m.lambda1 ** 2 - m.lambda2 ** 2) * math.sin(b) * math.cos(b)

    def x3_prime(self, v):
        m = self.metric
        return m.lambda1 * m.lambda2 * self.K / (m.lambda1 + self.b_prime(v))

    @property
    def period(self):
        """Translation length 2 x3(W) along the x3-axis."""
        return 2 * self.x3W


def solve_profile(m: MetricParams, K: float, tol: float = DEFAULT_ODE_TOL) -> HelicoidProfile:
    K = _check_K(K)
    l1, l2 = m.lambda1, m.lambda2

    d = l1 * l1 - l2 * l2

    def rhs(v, y):
        s = math.sqrt(l1 * l1 * (1 - K) + K * d * math.sin(y[0]) ** 2)
        return [s, l1 * l2 * K / (l1 + s)]

    W_est = half_turn_length(m, K)
    span = 2 * W_est + 1
    sol = integrate_ode_both_ways(rhs, [0.0, 0.0], span, tol)

    # b' lies in [sqrt(r), sqrt(2) lambda1); a slightly wider bracket is safe
    lo, hi = 0.95 * W_est, min(1.05 * W_est, span)
    W = find_root(lambda v: sol(v)[0] - math.pi, lo, hi, tol=1e-14, xtol=1e-15).root

    r = l1 * l1 - max(K * l1 * l1, K * l2 * l2)
    speeds = _b_speed(sol.values[:, 0], m, K)
    assert r > 0
    assert np.all(speeds >= math.sqrt(r) * (1 - 1e-12)) and np.all(speeds < math.sqrt(2) * l1)
    assert np.all(np.diff(sol.values[:, 0]) > 0), "b must be strictly increasing"

    return HelicoidProfile(K=K, metric=m, solution=sol, W=W, x3W=float(sol(W)[1]))


# -- Gauss map data -----------------------------------------------------------

def gauss_map(p: HelicoidProfile, u: float, v: float):
    """Analytic ``(GaussMapValue, g_{z zbar})`` at ``u + iv``."""
    l1 = p.metric.lambda1
    b, bp, bpp = p.b(v), p.b_prime(v), p.b_second(v)
    g = math.exp(-l1 * u) * complex(math.cos(b), math.sin(b))
    gv = GaussMapValue(g, 0.5 * (bp - l1) * g, -0.5 * (bp + l1) * g)
    return gv, 0.25 * complex(l1 * l1 - bp * bp, bpp) * g


def gauss_map_function(p: HelicoidProfile):
    l1 = p.metric.lambda1
    return lambda u, v: math.exp(-l1 * u) * complex(math.cos(p.b(v)), math.sin(p.b(v)))


# -- immersion ---------------------------------------------------------------

def immerse(p: HelicoidProfile, u: float, v: float) -> GroupElement:
    m = p.metric
    l1, l2 = m.lambda1, m.lambda2
    b, x3 = p.state(v)
    amp = p.x3_prime(v) * math.sinh(-l1 * u) / (l1 * l1 * l2)
    cx, sx, cb, sb = math.cos(x3), math.sin(x3), math.cos(b), math.sin(b)
    x1 = amp * (cx * sb / l1 + sx * cb / l2)
    x2 = amp * (sx * sb / l1 - cx * cb / l2)
    return GroupElement(x1, x2, float(x3))


def sampler(p: HelicoidProfile):
    return lambda u, v: immerse(p, u, v)


class HelicoidSection(NamedTuple):
    """The straight line {(k1 s, k2 s, C) : s = sinh(-lambda1 u)} at height C."""

    k1: float
    k2: float
    v0: float

    def point(self, s: float, C: float):
        return (self.k1 * s, self.k2 * s, C)


def _solve_height(p: HelicoidProfile, C: float, tol: float) -> float:
    if C == 0:
        return 0.0
    # x3 is monotone with x3(v + W) = x3(v) + x3W, so C lies between two W-multiples
    n = C / p.x3W
    lo, hi = (math.floor(n) - 1) * p.W, (math.ceil(n) + 1) * p.W
    return find_root(lambda v: p.x3(v) - C, lo, hi, tol=tol, xtol=1e-15).root


def cross_section(p: HelicoidProfile, C: float, tol: float = DEFAULT_ROOT_TOL) -> HelicoidSection:
    m = p.metric
    l1, l2 = m.lambda1, m.lambda2
    v0 = _solve_height(p, float(C), tol)
    x3 = p.x3(v0)
    b = p.b(v0)
    amp = p.x3_prime(v0) / (l1 * l1 * l2)
    k1 = amp * (math.cos(x3) * math.sin(b) / l1 + math.sin(x3) * math.cos(b) / l2)
    k2 = amp * (math.sin(x3) * math.sin(b) / l1 - math.cos(x3) * math.cos(b) / l2)
    return HelicoidSection(k1, k2, v0)


def solve_K_for_period(m: MetricParams, T: float, tol: float = 1e-11) -> float:
    """The K whose helicoid has translation period T.

    The period is increasing in K.  Positive K covers every T > 0; the
    negative branch is not a mirror of the positive one (b' depends on K) and
    only reaches periods down to ``period_from_K(m, -K_LIMIT)``.
    """
    T = float(T)
    if T == 0 or not math.isfinite(T):
        raise NoRoot(f"no helicoid has period {T}")
    lo, hi = (1e-12, K_LIMIT) if T > 0 else (-K_LIMIT, -1e-12)
    try:
        res = find_root(lambda K: period_from_K(m, K) - T, lo, hi,
                        tol=tol * max(1.0, abs(T)), xtol=1e-16)
    except NoSignChange as exc:
        raise NoRoot(f"period {T} is out of reach for |K| < {K_LIMIT}") from exc
    return res.root


# -- curvature ---------------------------------------------------------------

def metric_factor(p: HelicoidProfile, u: float, v: float) -> float:
    l1 = p.metric.lambda1
    return p.K ** 2 * math.cosh(l1 * u) ** 2 / (l1 + p.b_prime(v)) ** 2


def curvature(p: HelicoidProfile, u: float, v: float):
    """``(rho^2, Gauss curvature)`` at ``u + iv``."""
    m = p.metric
    l1 = m.lambda1
    d = l1 ** 2 - m.lambda2 ** 2
    K = p.K
    b, bp = p.b(v), p.b_prime(v)
    ch2 = math.cosh(l1 * u) ** 2
    kg = (-l1 ** 2 * (l1 + bp) ** 2 / (K ** 2 * ch2 * ch2)
          - d * d * math.sin(2 * b) ** 2 / (4 * ch2)
          + d * bp * math.cos(2 * b) * (l1 + bp) / (K * ch2))
    return metric_factor(p, u, v), kg


def gauss_curvature_displayed(p: HelicoidProfile, u: float, v: float) -> float:
    """The four-term closed form as commonly displayed; off whenever lambda1 != lambda2.

    Kept only for regression comparison with :func:`curvature`.
    """
    m = p.metric
    l1 = m.lambda1
    d = l1 ** 2 - m.lambda2 ** 2
    K = p.K
    b, bp = p.b(v), p.b_prime(v)
    ch2 = math.cosh(l1 * u) ** 2
    B = float(anisotropy(b, m))
    return (-l1 ** 2 * (l1 + bp) ** 2 / (K ** 2 * ch2 * ch2)
            - d * d * math.sin(2 * b) ** 2 / (4 * ch2)
            - l1 * d * math.cos(2 * b) * (bp + l1) / (K * ch2)
            - d * B * math.cos(2 * b) / ch2)


def _abs_curvature_density(m, K, u, b, bp):
    """|K| rho^2 on a (u, v) grid; b, bp are v-node arrays."""
    l1 = m.lambda1
    d = l1 ** 2 - m.lambda2 ** 2
    v_part = (-K * d * bp * np.cos(2 * b) / (l1 + bp)
              + K * K * d * d * np.sin(2 * b) ** 2 / (4 * (l1 + bp) ** 2))
    u_part = l1 ** 2 / np.cosh(l1 * u) ** 2
    return np.abs(u_part[:, None] + v_part[None, :])


def _gl_nodes(a, b, panels, order=10):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class TotalCurvature:
    value: float
    half_window_value: float
    diverges: bool


def _integrate_abs_curvature(p: HelicoidProfile, L: float, v_panels: int, u_panels: int):
    if L <= 0:
        return 0.0
    v_nodes, v_w = _gl_nodes(0.0, 2 * p.W, v_panels)
    b = np.array([p.b(v) for v in v_nodes])
    bp = _b_speed(b, p.metric, p.K)
    u_nodes, u_w = _gl_nodes(-L, L, u_panels)
    dens = _abs_curvature_density(p.metric, p.K, u_nodes, b, bp)
    return float(u_w @ dens @ v_w)


def total_abs_curvature(p: HelicoidProfile, window: float = 20.0, *, v_panels: int = 64,
                        u_panels: int = 400, growth: float = 0.1) -> TotalCurvature:
    """Total |K| dA over one fundamental piece, with u truncated to [-window, window].

    The integral is also taken over half the window; ``diverges`` is set when
    the full-window value exceeds the half-window value by more than
    ``growth`` (relative), which happens when the density does not decay in u.
    """
    full = _integrate_abs_curvature(p, window, v_panels, u_panels)
    half = _integrate_abs_curvature(p, window / 2, v_panels, u_panels)
    diverges = half > 0 and full > (1 + growth) * half
    return TotalCurvature(full, half, bool(diverges))
