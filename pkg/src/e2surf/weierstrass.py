"""Gauss map, potential, Hopf differential and immersion data of minimal surfaces.

Conventions: ``z = u + i v``, Wirtinger derivatives ``d/dz = (d/du - i d/dv)/2``
and ``d/dzbar = (d/du + i d/dv)/2``.  The Gauss map ``g`` is the stereographic
projection (from the south pole) of the unit normal read in the frame
E1, E2, E3.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateMetric, GaussMapAtPole, PotentialVanishes
from .group import (
    GroupElement,
    MetricParams,
    connection_table,
    coord_to_frame_array,
)

POTENTIAL_EPS = 1e-14


@dataclass(frozen=True)
class GaussMapValue:
    """Value of g and its first Wirtinger derivatives at one point."""

    g: complex
    gz: complex
    gzbar: complex

    @property
    def gbar_z(self) -> complex:
        return self.gzbar.conjugate()


@dataclass(frozen=True)
class SphereNormal:
    N1: float
    N2: float
    N3: float

    def as_array(self):
        return np.array([self.N1, self.N2, self.N3])


@dataclass(frozen=True)
class ImmersionDifferential:
    """Frame components (A1, A2, A3) of X_z, and the factor eta."""

    A1: complex
    A2: complex
    A3: complex
    eta: complex

    def as_array(self):
        return np.array([self.A1, self.A2, self.A3])


@dataclass(frozen=True)
class HopfValue:
    Q: complex


# -- potentials -------------------------------------------------------------

def h_potential(m: MetricParams, H: float, q: complex) -> complex:
    q = complex(q)
    a2 = abs(q) ** 2
    bracket_term = (m.mu2 * abs(1 + q * q) ** 2 + m.mu1 * abs(1 - q * q) ** 2
                    + 4 * m.mu3 * a2)
    return H * (1 + a2) ** 2 - 0.5j * bracket_term


def zero_potential(m: MetricParams, q: complex) -> complex:
    q = complex(q)
    s = (q + q.conjugate()) ** 2
    d = (q - q.conjugate()) ** 2
    # (q+qbar)^2 is real >= 0 and (q-qbar)^2 is real <= 0, so R is -i * (nonnegative)
    return -0.5j * (m.lambda1 ** 2 * s.real - m.lambda2 ** 2 * d.real)


def _denominator(m: MetricParams, g: complex) -> float:
    """lambda1^2 (g + gbar)^2 - lambda2^2 (g - gbar)^2, which is real."""
    return 4 * (m.lambda1 ** 2 * g.real ** 2 + m.lambda2 ** 2 * g.imag ** 2)


def _check_potential(m: MetricParams, g: complex):
    R = zero_potential(m, g)
    scale = m.lambda1 ** 2 * (1 + abs(g) ** 2) ** 2
    if abs(R) <= POTENTIAL_EPS * scale:
        raise PotentialVanishes(f"zero-potential vanishes at g={g}")
    return R


# -- the harmonic map equation and the Hopf differential ---------------------

def pde_residual(m: MetricParams, gv: GaussMapValue, gzz_bar: complex) -> complex:
    """g_{z zbar} minus the right-hand side of the minimal-surface Gauss map equation."""
    g = complex(gv.g)
    _check_potential(m, g)
    gb = g.conjugate()
    num = 2 * (m.lambda1 ** 2 * (g + gb) - m.lambda2 ** 2 * (g - gb))
    return complex(gzz_bar) - num * gv.gz * gv.gzbar / _denominator(m, g)


def hopf(m: MetricParams, gv: GaussMapValue) -> HopfValue:
    g = complex(gv.g)
    den = _denominator(m, g)
    if abs(den) <= POTENTIAL_EPS * m.lambda1 ** 2 * (1 + abs(g) ** 2) ** 2:
        raise PotentialVanishes(f"Hopf denominator vanishes at g={g}")
    return HopfValue(gv.gz * gv.gbar_z / den)


def eta_and_A(m: MetricParams, gv: GaussMapValue) -> ImmersionDifferential:
    g = complex(gv.g)
    if g == 0 or not cmath.isfinite(g):
        raise GaussMapAtPole(f"g={g}")
    R = _check_potential(m, g)
    gb = g.conjugate()
    eta = 4 * gb * gv.gz / R
    return ImmersionDifferential(
        A1=eta / 4 * (gb - 1 / gb),
        A2=1j * eta / 4 * (gb + 1 / gb),
        A3=eta / 2,
        eta=eta,
    )


def induced_metric_factor(m: MetricParams, gv: GaussMapValue) -> float:
    """Conformal factor rho^2 of the induced metric ds^2 = rho^2 |dz|^2."""
    g = complex(gv.g)
    R = _check_potential(m, g)
    return 4 * (1 + abs(g) ** 2) ** 2 * abs(gv.gz) ** 2 / abs(R) ** 2


def sphere_normal(g: complex) -> SphereNormal:
    g = complex(g)
    a2 = abs(g) ** 2
    d = 1 + a2
    return SphereNormal(2 * g.real / d, 2 * g.imag / d, (1 - a2) / d)


def sphere_to_g(n: SphereNormal) -> complex:
    return complex(n.N1, n.N2) / (1 + n.N3)


# -- finite-difference helpers ----------------------------------------------

def _d1(f, x, h):
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def _d2(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def gauss_map_fd(gfun: Callable[[float, float], complex], u: float, v: float, h: float = 1e-3):
    """Wirtinger data of a scalar complex map by finite differences.

    Returns ``(GaussMapValue, g_{z zbar})``.
    """
    gu = _d1(lambda s: gfun(s, v), u, h)
    gv_ = _d1(lambda s: gfun(u, s), v, h)
    guu = _d2(lambda s: gfun(s, v), u, h)
    gvv = _d2(lambda s: gfun(u, s), v, h)
    value = GaussMapValue(complex(gfun(u, v)), 0.5 * (gu - 1j * gv_), 0.5 * (gu + 1j * gv_))
    return value, 0.25 * (guu + gvv)


def _as_xyz(p):
    if isinstance(p, GroupElement):
        return np.array([p.x, p.y, p.z])
    return np.asarray(p, dtype=float)


def immersion_jet(sampler, u: float, v: float, h: float = 1e-3):
    """X, X_u, X_v, X_uu, X_uv, X_vv in coordinates, by 4th-order differences."""
    X = lambda a, b: _as_xyz(sampler(a, b))  # noqa: E731
    Xu = lambda a, b: _d1(lambda s: X(s, b), a, h)  # noqa: E731
    x0 = X(u, v)
    xu = Xu(u, v)
    xv = _d1(lambda s: X(u, s), v, h)
    xuu = _d2(lambda s: X(s, v), u, h)
    xvv = _d2(lambda s: X(u, s), v, h)
    xuv = _d1(lambda s: Xu(u, s), v, h)
    return x0, xu, xv, xuu, xuv, xvv


def frame_tangents(m: MetricParams, sampler, u: float, v: float, h: float = 1e-3):
    """Frame components of X_u and X_v at X(u, v)."""
    x0, xu, xv, *_ = immersion_jet(sampler, u, v, h)
    return coord_to_frame_array(m, x0[2], xu), coord_to_frame_array(m, x0[2], xv)


def _frame_derivative(m, z, z_dir, w, w_dir):
    """d/ds of the frame components of a vector field W(s) along a curve.

    ``w`` is the coordinate vector, ``w_dir`` its s-derivative and ``z_dir``
    the s-derivative of the base point's z coordinate.
    """
    c, s = math.cos(z), math.sin(z)
    l1, l2 = m.lambda1, m.lambda2
    return np.array([
        l1 * (c * w_dir[0] + s * w_dir[1]) + l1 * z_dir * (-s * w[0] + c * w[1]),
        l2 * (-s * w_dir[0] + c * w_dir[1]) + l2 * z_dir * (-c * w[0] - s * w[1]),
        w_dir[2] / (l1 * l2),
    ])


def mean_curvature_fd(m: MetricParams, sampler, at, h: float = 1e-3) -> float:
    """Mean curvature of a conformally parametrized surface by finite differences.

    Independent of the Weierstrass data: derivatives of ``sampler`` are taken
    numerically, moved to the frame, and differentiated covariantly with the
    connection table of the ambient metric.
    """
    u, v = at
    x0, xu, xv, xuu, xuv, xvv = immersion_jet(sampler, u, v, h)
    z = x0[2]
    a_u = coord_to_frame_array(m, z, xu)
    a_v = coord_to_frame_array(m, z, xv)
    E = float(a_u @ a_u)
    G = float(a_v @ a_v)
    if E < 1e-12 or G < 1e-12:
        raise DegenerateMetric(f"|X_u|^2={E}, |X_v|^2={G} at {at}")
    gamma = np.array(connection_table(m.mu1, m.mu2, m.mu3), dtype=float)

    # nabla_{X_u} X_u = (d/du a_u) + a_u^i a_u^j nabla_{E_i} E_j, likewise for v
    nuu = _frame_derivative(m, z, xu[2], xu, xuu) + np.einsum("i,j,ijk->k", a_u, a_u, gamma)
    nvv = _frame_derivative(m, z, xv[2], xv, xvv) + np.einsum("i,j,ijk->k", a_v, a_v, gamma)

    n = np.cross(a_u, a_v)
    n /= np.linalg.norm(n)
    # the trace of the second fundamental form over the conformal factor
    return float((nuu @ n) / (2 * E) + (nvv @ n) / (2 * G))


def unit_normal_fd(m: MetricParams, sampler, u: float, v: float, h: float = 1e-3):
    a_u, a_v = frame_tangents(m, sampler, u, v, h)
    n = np.cross(a_u, a_v)
    return n / np.linalg.norm(n)
