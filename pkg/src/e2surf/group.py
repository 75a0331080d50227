"""The metric Lie group E(2)~: group law, left-invariant metric, frame, connection.

Points live in R^3 with coordinates (x, y, z); z is the angle of the
universal cover and is never reduced modulo 2*pi.  Tangent vectors come in two
flavours: :class:`CoordVector` (components on d/dx, d/dy, d/dz) and
:class:`FrameVector` (components on the left-invariant orthonormal frame
E1, E2, E3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class GroupElement:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite group element {self!r}")

    def __mul__(self, other):
        return multiply(self, other)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def as_array(self):
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_array(cls, a):
        x, y, z = (float(v) for v in a)
        return cls(x, y, z)


IDENTITY = GroupElement(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class MetricParams:
    """Parameters (lambda1, lambda2) of the left-invariant metric g(lambda1, lambda2).

    The pair is stored in canonical order lambda1 >= lambda2; swapped input is
    reordered.  lambda3 = 1 / (lambda1 lambda2).
    """

    lambda1: float = 1.0
    lambda2: float = 1.0

    def __post_init__(self):
        l1, l2 = float(self.lambda1), float(self.lambda2)
        if not (l1 > 0 and l2 > 0 and math.isfinite(l1) and math.isfinite(l2)):
            raise ValueError(f"metric parameters must be positive and finite, got ({l1}, {l2})")
        if l2 > l1:
            l1, l2 = l2, l1
        object.__setattr__(self, "lambda1", l1)
        object.__setattr__(self, "lambda2", l2)

    @property
    def lambda3(self):
        return 1.0 / (self.lambda1 * self.lambda2)

    @property
    def mu1(self):
        return (self.lambda2 ** 2 - self.lambda1 ** 2) / 2

    @property
    def mu2(self):
        return (self.lambda1 ** 2 - self.lambda2 ** 2) / 2

    @property
    def mu3(self):
        return (self.lambda1 ** 2 + self.lambda2 ** 2) / 2

    @property
    def is_flat(self):
        return self.lambda1 == self.lambda2 == 1.0


@dataclass(frozen=True)
class FrameVector:
    a1: float
    a2: float
    a3: float

    def as_array(self):
        return np.array([self.a1, self.a2, self.a3])

    def norm2(self):
        return self.a1 ** 2 + self.a2 ** 2 + self.a3 ** 2


@dataclass(frozen=True)
class CoordVector:
    vx: float
    vy: float
    vz: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.vx, self.vy, self.vz)):
            raise ValueError(f"non-finite coordinate vector {self!r}")

    def as_array(self):
        return np.array([self.vx, self.vy, self.vz])


# -- group law --------------------------------------------------------------

def multiply(p: GroupElement, q: GroupElement) -> GroupElement:
    c, s = math.cos(p.z), math.sin(p.z)
    return GroupElement(p.x + q.x * c - q.y * s, p.y + q.x * s + q.y * c, p.z + q.z)


def inverse(p: GroupElement) -> GroupElement:
    c, s = math.cos(p.z), math.sin(p.z)
    return GroupElement(-p.x * c - p.y * s, p.x * s - p.y * c, -p.z)


def left_translation_jacobian(p: GroupElement) -> np.ndarray:
    """Jacobian of q -> p * q (independent of q)."""
    c, s = math.cos(p.z), math.sin(p.z)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def pushforward(p: GroupElement, v: CoordVector) -> CoordVector:
    return CoordVector(*(left_translation_jacobian(p) @ v.as_array()))


# -- metric and frame -------------------------------------------------------

def frame_at(m: MetricParams, p: GroupElement):
    """Coordinate components of E1, E2, E3 at p."""
    c, s = math.cos(p.z), math.sin(p.z)
    return (
        CoordVector(c / m.lambda1, s / m.lambda1, 0.0),
        CoordVector(-s / m.lambda2, c / m.lambda2, 0.0),
        CoordVector(0.0, 0.0, m.lambda1 * m.lambda2),
    )


def coord_to_frame_array(m: MetricParams, z, vec):
    """Frame components of coordinate vector(s) ``vec`` (..., 3) at angle ``z``."""
    vec = np.asarray(vec, dtype=float)
    c, s = np.cos(z), np.sin(z)
    return np.stack([
        m.lambda1 * (c * vec[..., 0] + s * vec[..., 1]),
        m.lambda2 * (-s * vec[..., 0] + c * vec[..., 1]),
        vec[..., 2] / (m.lambda1 * m.lambda2),
    ], axis=-1)


def frame_to_coord_array(m: MetricParams, z, a):
    a = np.asarray(a)
    c, s = np.cos(z), np.sin(z)
    e1, e2 = a[..., 0] / m.lambda1, a[..., 1] / m.lambda2
    return np.stack([c * e1 - s * e2, s * e1 + c * e2, a[..., 2] * m.lambda1 * m.lambda2], axis=-1)


def to_frame(m: MetricParams, p: GroupElement, v: CoordVector) -> FrameVector:
    return FrameVector(*coord_to_frame_array(m, p.z, v.as_array()))


def metric_inner(m: MetricParams, p: GroupElement, u: CoordVector, v: CoordVector) -> float:
    a = coord_to_frame_array(m, p.z, u.as_array())
    b = coord_to_frame_array(m, p.z, v.as_array())
    return float(a @ b)


def metric_matrix(m: MetricParams, p: GroupElement) -> np.ndarray:
    """Gram matrix of d/dx, d/dy, d/dz at p."""
    c, s = math.cos(p.z), math.sin(p.z)
    l1s, l2s = m.lambda1 ** 2, m.lambda2 ** 2
    return np.array([
        [l1s * c * c + l2s * s * s, (l1s - l2s) * c * s, 0.0],
        [(l1s - l2s) * c * s, l1s * s * s + l2s * c * c, 0.0],
        [0.0, 0.0, 1.0 / (l1s * l2s)],
    ])


# -- Lie algebra ------------------------------------------------------------

def connection_table(mu1, mu2, mu3):
    """Christoffel table ``T[i][j][k]``: nabla_{E_i} E_j = sum_k T[i][j][k] E_k.

    Works with any numeric type (floats, Fractions, sympy symbols).
    """
    zero = mu1 * 0
    t = [[[zero] * 3 for _ in range(3)] for _ in range(3)]
    t[0][1][2] = mu1
    t[0][2][1] = mu2
    t[1][0][2] = mu1
    t[1][2][0] = mu2
    t[2][0][1] = mu3
    t[2][1][0] = -mu3
    return t


def bracket_table(l1_sq, l2_sq):
    """``B[i][j][k]``: [E_i, E_j] = sum_k B[i][j][k] E_k."""
    zero = l1_sq * 0
    b = [[[zero] * 3 for _ in range(3)] for _ in range(3)]
    b[1][2][0], b[2][1][0] = l1_sq, -l1_sq
    b[2][0][1], b[0][2][1] = l2_sq, -l2_sq
    return b


def _check_index(i):
    if i not in (1, 2, 3):
        raise ValueError(f"frame index must be 1, 2 or 3, got {i}")


def connection(m: MetricParams, i: int, j: int) -> FrameVector:
    """nabla_{E_i} E_j in the frame (1-based indices)."""
    _check_index(i)
    _check_index(j)
    return FrameVector(*connection_table(m.mu1, m.mu2, m.mu3)[i - 1][j - 1])


def bracket(m: MetricParams, i: int, j: int) -> FrameVector:
    _check_index(i)
    _check_index(j)
    return FrameVector(*bracket_table(m.lambda1 ** 2, m.lambda2 ** 2)[i - 1][j - 1])


def covariant_derivative_const(m: MetricParams, a, b):
    """nabla_A B for left-invariant fields with constant frame components a, b."""
    t = np.array(connection_table(m.mu1, m.mu2, m.mu3), dtype=float)
    return np.einsum("i,j,ijk->k", np.asarray(a, float), np.asarray(b, float), t)


def curvature_invariants(m: MetricParams):
    """Principal Ricci curvatures and scalar curvature in their commonly tabulated closed form.

    Returns ``(2 mu2 mu3, 2 mu1 mu3, 3 mu1 mu2, 2 mu2 mu3)``.  The third entry and
    the scalar curvature differ from what the connection table gives whenever
    lambda1 != lambda2; see :func:`ricci_from_connection`.
    """
    mu1, mu2, mu3 = m.mu1, m.mu2, m.mu3
    return 2 * mu2 * mu3, 2 * mu1 * mu3, 3 * mu1 * mu2, 2 * mu2 * mu3


def ricci_from_connection(mu1, mu2, mu3, l1_sq=None, l2_sq=None):
    """Ricci(E_i, E_i) and scalar curvature computed from the connection table.

    Uses R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z on
    the left-invariant frame, exact in the arithmetic of the inputs.
    """
    if l1_sq is None:
        l1_sq, l2_sq = mu3 + mu2, mu3 - mu2
    t = connection_table(mu1, mu2, mu3)
    br = bracket_table(l1_sq, l2_sq)
    zero = mu1 * 0

    def nabla(a, b):
        out = [zero] * 3
        for i in range(3):
            for j in range(3):
                if a[i] == 0 or b[j] == 0:
                    continue
                for k in range(3):
                    out[k] += a[i] * b[j] * t[i][j][k]
        return out

    basis = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
    basis = [[zero + v for v in row] for row in basis]

    def riemann(x, y, zz):
        a = nabla(x, nabla(y, zz))
        b = nabla(y, nabla(x, zz))
        xy = [sum((x[i] * y[j] * br[i][j][k] for i in range(3) for j in range(3)), zero)
              for k in range(3)]
        c = nabla(xy, zz)
        return [a[k] - b[k] - c[k] for k in range(3)]

    ric = []
    for i in range(3):
        ei = basis[i]
        ric.append(sum((riemann(basis[k], ei, ei)[k] for k in range(3)), zero))
    return ric[0], ric[1], ric[2], ric[0] + ric[1] + ric[2]


def exact_mus(l1_sq, l2_sq):
    """mu1, mu2, mu3 as Fractions from rational squared parameters."""
    a, b = Fraction(l1_sq), Fraction(l2_sq)
    return (b - a) / 2, (a - b) / 2, (a + b) / 2
