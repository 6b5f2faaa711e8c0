"""Surface and perimeter estimation from interior point samples.

Estimates the (d-1)-dimensional boundary measure of an unknown compact body
from points observed inside it, by Monte Carlo averaging of line-crossing
counts over random lines.  Two counters are provided: one built on the union
of balls around the sample (any dimension), one on the planar alpha-convex
hull.
"""

from crofton.geom import (
    Ball,
    HalfSpace,
    Interval,
    Line,
    orthonormal_basis,
    sample_direction,
    union_intervals,
)
from crofton.montecarlo import Estimate, LinePlan, beta, mc_estimate, sample_lines
from crofton.shapes import (
    PointCloud,
    Shape,
    boundary_measure,
    make_shape,
    sample_iid,
    true_line_count,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Estimate",
    "HalfSpace",
    "Interval",
    "Line",
    "LinePlan",
    "PointCloud",
    "Shape",
    "beta",
    "boundary_measure",
    "make_shape",
    "mc_estimate",
    "orthonormal_basis",
    "sample_direction",
    "sample_iid",
    "sample_lines",
    "true_line_count",
    "union_intervals",
    "__version__",
]
