"""Sampling a surface on a rectangular (u, v) grid."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import catenoid, helicoid


@dataclass(frozen=True)
class SurfaceGrid:
    """Samples of an immersion on a ``nu x nv`` grid (row index = u).

    ``positions`` has shape (nu, nv, 3); ``gauss`` holds g, ``rho2`` the
    conformal factor and ``curvature`` the Gauss curvature at each node.
    """

    u: np.ndarray
    v: np.ndarray
    positions: np.ndarray
    gauss: np.ndarray
    rho2: np.ndarray
    curvature: np.ndarray

    def __post_init__(self):
        if len(self.u) < 2 or len(self.v) < 2:
            raise ValueError("a surface grid needs at least 2 samples in each direction")
        if not np.all(np.isfinite(self.positions)):
            raise ValueError("non-finite sample in surface grid")

    @property
    def shape(self):
        return self.positions.shape[:2]


def thread_count() -> int:
    try:
        n = int(os.environ.get("E2SURF_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def _sample(immerse, gauss, curv, u, v):
    def row(uu):
        pts, gs, rs, ks = [], [], [], []
        for vv in v:
            pts.append(immerse(uu, vv).as_array())
            gs.append(gauss(uu, vv))
            r, k = curv(uu, vv)
            rs.append(r)
            ks.append(k)
        return pts, gs, rs, ks

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, u))
    else:
        rows = [row(uu) for uu in u]
    return SurfaceGrid(
        u=np.asarray(u, float),
        v=np.asarray(v, float),
        positions=np.array([r[0] for r in rows]),
        gauss=np.array([r[1] for r in rows]),
        rho2=np.array([r[2] for r in rows]),
        curvature=np.array([r[3] for r in rows]),
    )


def sample_helicoid(p: helicoid.HelicoidProfile, u_range, v_range, nu: int, nv: int) -> SurfaceGrid:
    u = np.linspace(*u_range, nu)
    v = np.linspace(*v_range, nv)
    g = helicoid.gauss_map_function(p)
    return _sample(lambda a, b: helicoid.immerse(p, a, b), g,
                   lambda a, b: helicoid.curvature(p, a, b), u, v)


def sample_catenoid(p: catenoid.CatenoidProfile, u_range, v_range, nu: int, nv: int) -> SurfaceGrid:
    u = np.linspace(*u_range, nu)
    v = np.linspace(*v_range, nv)
    g = catenoid.gauss_map_function(p)
    return _sample(lambda a, b: catenoid.immerse(p, a, b), g,
                   lambda a, b: catenoid.curvature(p, a, b), u, v)
