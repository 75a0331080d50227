"""Minimal helicoids and catenoids in the metric Lie group E(2)~."""

from .errors import E2SurfError
from .group import GroupElement, MetricParams

__all__ = ["E2SurfError", "GroupElement", "MetricParams"]
__version__ = "0.1.0"
