"""Deterministic numerical kernels.

Everything here is pure Python/numpy and carries no knowledge of the surfaces
built on top of it:

* :func:`integrate_ode` -- classical RK4 with step-halving (Richardson) error
  control and dense output,
* :func:`find_root` -- bracketing root finder (bisection with guarded
  regula-falsi steps),
* :func:`quad` / :func:`quad_singular` -- adaptive composite Gauss-Legendre
  quadrature, the latter for integrands with ``1/sqrt(1-x^2)`` end-point
  singularities on ``[-1, 1]``,
* :func:`fd_derivative` -- fourth-order central difference stencils.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NoConvergence, NoSignChange, NonFinite

DEFAULT_ODE_TOL = 1e-12
DEFAULT_QUAD_TOL = 1e-12
DEFAULT_ROOT_TOL = 1e-12

_EPS = np.finfo(float).eps

Rhs = Callable[[float, Sequence[float]], Sequence[float]]


# ---------------------------------------------------------------------------
# ODE integration
# ---------------------------------------------------------------------------

def _rk4(rhs, t, y, h, k1):
    n = len(y)
    hh = 0.5 * h
    k2 = rhs(t + hh, [y[i] + hh * k1[i] for i in range(n)])
    k3 = rhs(t + hh, [y[i] + hh * k2[i] for i in range(n)])
    k4 = rhs(t + h, [y[i] + h * k3[i] for i in range(n)])
    h6 = h / 6.0
    return [y[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(n)]


def _richardson_step(rhs, t, y, h, k1):
    """One RK4 step of size h and two of size h/2, locally extrapolated.

    Returns the extrapolated state and the error estimate of the half-step
    solution, ``max|y_half - y_full| / 15``.
    """
    full = _rk4(rhs, t, y, h, k1)
    mid = _rk4(rhs, t, y, 0.5 * h, k1)
    half = _rk4(rhs, t + 0.5 * h, mid, 0.5 * h, rhs(t + 0.5 * h, mid))
    err = 0.0
    out = []
    for a, b in zip(full, half):
        d = b - a
        if abs(d) > err:
            err = abs(d)
        out.append(b + d / 15.0)
    return out, err / 15.0


class OdeSolution:
    """Dense solution of an ODE on ``[t_min, t_max]``.

    Knots are strictly increasing.  Between two knots the solution is
    evaluated by re-taking the integrator's own extrapolated step from the
    anchor knot (the knot the integration came from), so values are smooth
    inside each interval, exact at the knots, and carry the same local
    accuracy as the integration itself.  The cubic Hermite interpolant of the
    stored knot data is available through :meth:`hermite`.
    """

    def __init__(self, rhs, knots, values, derivs, anchor_right):
        self.rhs = rhs
        self.knots = np.asarray(knots, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.derivs = np.asarray(derivs, dtype=float)
        self.anchor_right = np.asarray(anchor_right, dtype=bool)
        if self.knots.ndim != 1 or len(self.knots) < 2:
            raise ValueError("an OdeSolution needs at least two knots")
        if np.any(np.diff(self.knots) <= 0):
            raise ValueError("knots must be strictly increasing")
        self._knot_list = self.knots.tolist()
        self._value_list = self.values.tolist()
        self._deriv_list = self.derivs.tolist()
        for arr in (self.knots, self.values, self.derivs, self.anchor_right):
            arr.setflags(write=False)

    @property
    def t_min(self):
        return self._knot_list[0]

    @property
    def t_max(self):
        return self._knot_list[-1]

    @property
    def dim(self):
        return self.values.shape[1]

    def _interval(self, t):
        if not (self.t_min <= t <= self.t_max):
            raise ValueError(f"t={t} outside solved span [{self.t_min}, {self.t_max}]")
        i = bisect.bisect_right(self._knot_list, t) - 1
        return min(i, len(self._knot_list) - 2)

    def __call__(self, t):
        t = float(t)
        i = self._interval(t)
        for j in (i, i + 1):
            if t == self._knot_list[j]:
                return np.array(self._value_list[j])
        k = i + 1 if self.anchor_right[i] else i
        tk = self._knot_list[k]
        y, _ = _richardson_step(self.rhs, tk, self._value_list[k], t - tk, self._deriv_list[k])
        return np.array(y)

    def derivative(self, t):
        t = float(t)
        return np.asarray(self.rhs(t, self(t).tolist()), dtype=float)

    def hermite(self, t):
        """Cubic Hermite interpolant built from knot values and derivatives."""
        t = float(t)
        i = self._interval(t)
        t0, t1 = self._knot_list[i], self._knot_list[i + 1]
        h = t1 - t0
        s = (t - t0) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return (h00 * self.values[i] + h10 * h * self.derivs[i]
                + h01 * self.values[i + 1] + h11 * h * self.derivs[i + 1])

    def join(self, other):
        """Concatenate two solutions sharing exactly one end knot."""
        left, right = (self, other) if self.t_max <= other.t_min else (other, self)
        if left.t_max != right.t_min:
            raise ValueError("solutions must share their common end knot")
        if not np.array_equal(left.values[-1], right.values[0]):
            raise ValueError("solutions disagree at the shared knot")
        return OdeSolution(
            self.rhs,
            np.concatenate([left.knots, right.knots[1:]]),
            np.concatenate([left.values, right.values[1:]]),
            np.concatenate([left.derivs, right.derivs[1:]]),
            np.concatenate([left.anchor_right, right.anchor_right]),
        )


def integrate_ode(rhs: Rhs, y0, t_span, tol: float = DEFAULT_ODE_TOL,
                  h0: float | None = None, h_max: float | None = None,
                  max_steps: int = 2_000_000) -> OdeSolution:
    """Integrate ``y' = rhs(t, y)`` from ``t_span[0]`` to ``t_span[1]``.

    Classical RK4 with step-doubling error control; each accepted step is the
    Richardson-extrapolated two-half-step value.  A step is accepted when the
    error estimate is at most ``tol * max(1, |y|_inf)``.  ``t_span`` may run
    backwards; the returned knots are always increasing.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    t0, t1 = float(t_span[0]), float(t_span[1])
    span = t1 - t0
    if span == 0:
        raise ValueError("empty t_span")
    direction = 1.0 if span > 0 else -1.0
    length = abs(span)
    if h_max is None:
        h_max = length / 16.0
    h = min(h0 if h0 is not None else length / 128.0, h_max)

    y = [float(v) for v in y0]
    k1 = [float(v) for v in rhs(t0, y)]
    if not all(math.isfinite(v) for v in y + k1):
        raise NonFinite(f"non-finite state or derivative at t={t0}")
    ts, ys, ds = [t0], [y], [k1]
    t = t0
    steps = 0
    while direction * (t1 - t) > 0:
        if steps >= max_steps:
            raise NoConvergence(f"integrate_ode exceeded {max_steps} steps")
        last = h >= abs(t1 - t) * (1 - 1e-12)
        step = (t1 - t) if last else direction * h
        y_new, err = _richardson_step(rhs, t, y, step, k1)
        if not (math.isfinite(err) and all(math.isfinite(v) for v in y_new)):
            raise NonFinite(f"non-finite state in step from t={t}")
        scale = max(1.0, max(abs(v) for v in y))
        target = tol * scale
        if err <= target:
            t = t1 if last else t + step
            y = y_new
            k1 = [float(v) for v in rhs(t, y)]
            if not all(math.isfinite(v) for v in k1):
                raise NonFinite(f"rhs returned non-finite values at t={t}")
            ts.append(t)
            ys.append(y)
            ds.append(k1)
            steps += 1
        fac = 4.0 if err == 0 else min(4.0, max(0.2, 0.9 * (target / err) ** 0.2))
        h = min(abs(step) * fac, h_max)
        if h < 1e-14 * max(1.0, abs(t)):
            raise NoConvergence(f"step size underflow at t={t}")

    if direction > 0:
        return OdeSolution(rhs, ts, ys, ds, np.zeros(len(ts) - 1, dtype=bool))
    return OdeSolution(rhs, ts[::-1], ys[::-1], ds[::-1], np.ones(len(ts) - 1, dtype=bool))


def integrate_ode_both_ways(rhs: Rhs, y0, t_half: float, tol: float = DEFAULT_ODE_TOL,
                            **kw) -> OdeSolution:
    """Integrate from 0 forward to ``t_half`` and backward to ``-t_half``."""
    fwd = integrate_ode(rhs, y0, (0.0, t_half), tol, **kw)
    bwd = integrate_ode(rhs, y0, (0.0, -t_half), tol, **kw)
    return bwd.join(fwd)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def find_root(f: Callable[[float], float], lo: float, hi: float,
              tol: float = DEFAULT_ROOT_TOL, xtol: float | None = None,
              maxiter: int = 500) -> RootResult:
    """Find a zero of ``f`` in ``[lo, hi]``.

    Bisection, accelerated by Illinois-type regula-falsi steps that always
    stay inside the current bracket.  Stops when ``|f(x)| < tol`` or the
    bracket is narrower than ``xtol`` (defaults to ``tol``).
    """
    xtol = tol if xtol is None else xtol
    a, b = float(lo), float(hi)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return RootResult(a, 0.0, 0)
    if fb == 0.0:
        return RootResult(b, 0.0, 0)
    # compare signs, not the product, which underflows for tiny values
    if not (math.isfinite(fa) and math.isfinite(fb)) or (fa < 0) == (fb < 0):
        raise NoSignChange(f"f({a})={fa} and f({b})={fb} do not bracket a root")

    side = 0
    width_before = abs(b - a)
    for it in range(1, maxiter + 1):
        assert (fa < 0) != (fb < 0), "bracket lost its sign change"
        width = abs(b - a)
        if it % 3 == 0 and width > 0.5 * width_before:
            x = 0.5 * (a + b)
        else:
            x = (a * fb - b * fa) / (fb - fa)
            if not (min(a, b) < x < max(a, b)):
                x = 0.5 * (a + b)
        if it % 3 == 0:
            width_before = width
        fx = float(f(x))
        if not math.isfinite(fx):
            raise NonFinite(f"f({x}) is not finite")
        if abs(fx) < tol:
            return RootResult(x, fx, it)
        if (fx < 0) != (fb < 0):
            a, fa = b, fb
            b, fb = x, fx
            side = 0
        else:
            b, fb = x, fx
            # Illinois: halve the stale end's value to force it to move
            fa *= 0.5 if side == 1 else 1.0
            side = 1
        if abs(b - a) < xtol:
            x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
            return RootResult(x, float(f(x)), it)
    raise NoConvergence(f"find_root did not converge in {maxiter} iterations")


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _gl_panel(f, a, b, vectorized):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x = mid + half * _GL_NODES
    fx = np.asarray(f(x), dtype=float) if vectorized else np.array([f(xi) for xi in x], dtype=float)
    if not np.all(np.isfinite(fx)):
        raise NonFinite(f"integrand not finite on [{a}, {b}]")
    return half * float(np.dot(_GL_WEIGHTS, fx))


def quad(f: Callable, a: float, b: float, tol: float = DEFAULT_QUAD_TOL,
         vectorized: bool = False, initial_panels: int = 1,
         max_panels: int = 20000) -> float:
    """Adaptive composite 10-point Gauss-Legendre quadrature of f over [a, b].

    Panels are split where the difference between the one-panel and
    two-half-panel estimates is largest, until the summed difference is at
    most ``max(tol, 64 eps |I|)``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0
    edges = np.linspace(a, b, initial_panels + 1)
    heap = []
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        whole = _gl_panel(f, lo, hi, vectorized)
        mid = 0.5 * (lo + hi)
        halves = _gl_panel(f, lo, mid, vectorized) + _gl_panel(f, mid, hi, vectorized)
        err = abs(halves - whole)
        heapq.heappush(heap, (-err, lo, hi, halves))
        total += halves
        total_err += err
    while total_err > max(tol, 64 * _EPS * abs(total)):
        if len(heap) >= max_panels:
            raise NoConvergence(f"quad: {len(heap)} panels, error estimate {total_err:.3e}")
        neg_err, lo, hi, val = heapq.heappop(heap)
        total -= val
        total_err += neg_err
        mid = 0.5 * (lo + hi)
        for sub_lo, sub_hi in ((lo, mid), (mid, hi)):
            whole = _gl_panel(f, sub_lo, sub_hi, vectorized)
            m = 0.5 * (sub_lo + sub_hi)
            halves = _gl_panel(f, sub_lo, m, vectorized) + _gl_panel(f, m, sub_hi, vectorized)
            err = abs(halves - whole)
            heapq.heappush(heap, (-err, sub_lo, sub_hi, halves))
            total += halves
            total_err += err
    # re-sum to avoid drift from the running subtractions
    return float(math.fsum(item[3] for item in heap))


def quad_singular(f_smooth: Callable, tol: float = DEFAULT_QUAD_TOL,
                  vectorized: bool = False) -> float:
    """``int_{-1}^{1} f_smooth(x) / sqrt(1 - x^2) dx`` via ``x = cos s``."""
    if vectorized:
        return quad(lambda s: f_smooth(np.cos(s)), 0.0, math.pi, tol, vectorized=True)
    return quad(lambda s: f_smooth(math.cos(s)), 0.0, math.pi, tol)


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def fd_derivative(f: Callable, x: float, order: int = 1, h: float = 1e-3):
    """Fourth-order central difference of ``f`` at ``x``; ``f`` may be vector valued."""
    if h <= 0:
        raise ValueError("h must be positive")
    fp2, fp1 = np.asarray(f(x + 2 * h)), np.asarray(f(x + h))
    fm1, fm2 = np.asarray(f(x - h)), np.asarray(f(x - 2 * h))
    if order == 1:
        return (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    if order == 2:
        f0 = np.asarray(f(x))
        return (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    raise ValueError("order must be 1 or 2")
