"""Text exporters: Wavefront OBJ meshes and CSV curves."""

from __future__ import annotations

import math
import os
from typing import Iterable

import numpy as np

from .grid import SurfaceGrid


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to write non-finite value {x}")
    return "%.17g" % x


def obj_text(positions: np.ndarray) -> str:
    """OBJ body for an (nu, nv, 3) array of vertices, row-major, two triangles per cell."""
    nu, nv, _ = positions.shape
    lines = [f"v {_num(x)} {_num(y)} {_num(z)}" for x, y, z in positions.reshape(-1, 3)]
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b, c, d = a + 1, a + nv, a + nv + 1
            lines.append(f"f {a} {b} {d}")
            lines.append(f"f {a} {d} {c}")
    return "\n".join(lines) + "\n"


def export_mesh(grid: SurfaceGrid, path) -> None:
    text = obj_text(grid.positions)
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def curve_text(u: Iterable[float], points) -> str:
    lines = ["u,x1,x2,x3"]
    for uu, p in zip(u, points):
        lines.append(",".join(_num(x) for x in (uu, *p)))
    return "\n".join(lines) + "\n"


def export_curve(u, points, path) -> None:
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write(curve_text(u, points))
