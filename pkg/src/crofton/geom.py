"""Dimension-generic lines, balls and half-spaces with exact line intersections.

A line is stored as a unit direction ``theta`` together with the coordinates
of its closest-to-origin point expressed in an orthonormal basis of the
orthogonal complement of ``theta``; the point at parameter ``lam`` is
``offset @ basis + lam * theta``.  Everything here is a pure function of its
inputs and all value types are immutable after construction, so they are safe
to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

UNIT_TOL = 1e-12     # |norm - 1| bound for directions and half-space normals
FRAME_TOL = 1e-10    # Gram-matrix deviation bound for line frames
TANGENT_TOL = 1e-12  # tangency cutoff on the ball discriminant, in units of radius^2

INF = math.inf


class InvalidDimensionError(ValueError):
    """Operation requires ambient dimension d >= 2."""


def _as_vector(x, name: str) -> np.ndarray:
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    v.setflags(write=False)
    return v


def _check_unit(v: np.ndarray, name: str) -> None:
    if abs(float(np.linalg.norm(v)) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector (|norm - 1| <= {UNIT_TOL})")


@dataclass(frozen=True)
class Interval:
    """Closed parameter interval [lo, hi]; endpoints may be -inf / +inf."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, lam: float) -> bool:
        return self.lo <= lam <= self.hi


FULL_LINE = Interval(-INF, INF)


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed ball with positive radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vector(self.center, "center"))
        if not self.radius > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """Closed half-space {x : <normal, x> <= offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _as_vector(self.normal, "normal"))
        _check_unit(self.normal, "normal")
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")

    def contains(self, x) -> bool:
        return float(np.dot(self.normal, x)) <= self.offset


@dataclass(frozen=True, eq=False)
class Line:
    """Line ``{offset @ basis + lam * theta}`` in R^d.

    ``theta`` is a unit direction, ``basis`` holds d-1 orthonormal rows
    spanning the complement of ``theta``, and ``offset`` gives the base point
    coordinates in that basis.  The frame is validated to FRAME_TOL.
    """

    theta: np.ndarray
    basis: np.ndarray
    offset: np.ndarray
    base_point: np.ndarray = field(init=False)

    def __post_init__(self):
        theta = _as_vector(self.theta, "theta")
        _check_unit(theta, "theta")
        basis = np.array(self.basis, dtype=float)
        offset = _as_vector(self.offset, "offset")
        d = theta.size
        if d < 2:
            raise InvalidDimensionError("lines need ambient dimension >= 2")
        if basis.shape != (d - 1, d):
            raise ValueError(f"basis must have shape {(d - 1, d)}, got {basis.shape}")
        if offset.size != d - 1:
            raise ValueError(f"offset must have {d - 1} coordinates")
        frame = np.vstack([theta, basis])
        if np.abs(frame @ frame.T - np.eye(d)).max() > FRAME_TOL:
            raise ValueError("theta and basis do not form an orthonormal frame")
        basis.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "basis", basis)
        base = offset @ basis
        base.setflags(write=False)
        object.__setattr__(self, "base_point", base)

    @property
    def dim(self) -> int:
        return self.theta.size

    def point(self, lam: float) -> np.ndarray:
        return self.base_point + lam * self.theta

    @classmethod
    def from_offset(cls, theta, offset, basis=None) -> "Line":
        theta = np.asarray(theta, dtype=float)
        if basis is None:
            basis = orthonormal_basis(theta)
        return cls(theta=theta, basis=basis, offset=np.asarray(offset, dtype=float))

    @classmethod
    def through(cls, point, theta) -> "Line":
        """Line through ``point`` with direction ``theta``."""
        theta = np.asarray(theta, dtype=float)
        basis = orthonormal_basis(theta)
        offset = basis @ np.asarray(point, dtype=float)
        return cls(theta=theta, basis=basis, offset=offset)


def sample_direction(rng: np.random.Generator, d: int) -> np.ndarray:
    """Uniform direction on the half-sphere (last coordinate >= 0).

    Draws a standard Gaussian vector, normalizes it, and flips the sign when
    the last coordinate is negative.
    """
    if d < 2:
        raise InvalidDimensionError(f"need d >= 2, got {d}")
    while True:
        v = rng.standard_normal(d)
        n = float(np.linalg.norm(v))
        if n > 1e-12:
            break
    v /= n
    if v[-1] < 0:
        v = -v
    return v


def orthonormal_basis(theta) -> np.ndarray:
    """Deterministic orthonormal basis of the complement of a unit vector.

    Gram-Schmidt on the standard basis, skipping the index where ``theta``
    has its largest magnitude; a second orthogonalization pass keeps the
    Gram error well below FRAME_TOL.
    """
    theta = _as_vector(theta, "theta")
    _check_unit(theta, "theta")
    d = theta.size
    if d < 2:
        raise InvalidDimensionError("need d >= 2")
    skip = int(np.argmax(np.abs(theta)))
    frame = [theta]
    for i in range(d):
        if i == skip:
            continue
        v = np.zeros(d)
        v[i] = 1.0
        for _ in range(2):
            for u in frame:
                v = v - (v @ u) * u
        v /= np.linalg.norm(v)
        frame.append(v)
    return np.array(frame[1:])


def dot_lr(a, b) -> float:
    """Left-to-right accumulated dot product.

    Fixes the floating-point association order so that scalar and vectorized
    call sites produce bitwise-identical results (BLAS dot/gemv may not).
    """
    acc = a[0] * b[0]
    for i in range(1, len(a)):
        acc = acc + a[i] * b[i]
    return float(acc)


def intersect_ball(line: Line, ball: Ball) -> Optional[Interval]:
    """Parameter interval where the line is inside the closed ball.

    Returns None when the line misses the ball or is tangent within
    TANGENT_TOL * radius^2 on the discriminant (tangent contacts have measure
    zero under random line sampling and are deliberately dropped).
    """
    w = ball.center - line.base_point
    t = dot_lr(w, line.theta)
    disc = t * t - dot_lr(w, w) + ball.radius * ball.radius
    if disc <= TANGENT_TOL * ball.radius * ball.radius:
        return None
    h = math.sqrt(disc)
    return Interval(t - h, t + h)


def intersect_halfspace(line: Line, hs: HalfSpace) -> Optional[Interval]:
    """Parameter set {lam : <n, base + lam*theta> <= offset}.

    A ray when the line is transversal to the bounding hyperplane, the full
    line or None when parallel (|<n, theta>| <= 1e-12) depending on which
    side the base point lies.
    """
    slope = float(np.dot(hs.normal, line.theta))
    level = float(np.dot(hs.normal, line.base_point))
    if abs(slope) <= 1e-12:
        return FULL_LINE if level <= hs.offset else None
    lam = (hs.offset - level) / slope
    if slope > 0:
        return Interval(-INF, lam)
    return Interval(lam, INF)


def merge_intervals(arr: np.ndarray) -> np.ndarray:
    """Merge an (m, 2) array of [lo, hi] rows into disjoint sorted rows.

    Touching intervals merge.  This is the array work-horse behind
    union_intervals and the interval-set representation used throughout.
    """
    arr = np.asarray(arr, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (m, 2) interval array, got {arr.shape}")
    order = np.argsort(arr[:, 0], kind="stable")
    lo = arr[order, 0]
    hi = arr[order, 1]
    cummax = np.maximum.accumulate(hi)
    starts = np.empty(len(lo), dtype=bool)
    starts[0] = True
    starts[1:] = lo[1:] > cummax[:-1]
    ends = np.flatnonzero(np.append(starts[1:], True))
    return np.column_stack((lo[starts], cummax[ends]))


def union_intervals(items: Iterable[Optional[Interval | Sequence[float]]]) -> np.ndarray:
    """Union of intervals as a minimal sorted (m, 2) array of disjoint rows.

    Accepts Interval objects, (lo, hi) pairs, and None entries (skipped).
    """
    rows = []
    for item in items:
        if item is None:
            continue
        if isinstance(item, Interval):
            rows.append((item.lo, item.hi))
        else:
            lo, hi = float(item[0]), float(item[1])
            if math.isnan(lo) or math.isnan(hi) or lo > hi:
                raise ValueError(f"invalid interval ({lo}, {hi})")
            rows.append((lo, hi))
    if not rows:
        return np.empty((0, 2))
    return merge_intervals(np.array(rows, dtype=float))


def intervals_contain(intervals: np.ndarray, lam: float) -> bool:
    """Membership of a parameter value in a sorted disjoint interval set."""
    intervals = np.asarray(intervals, dtype=float)
    if intervals.size == 0:
        return False
    j = int(np.searchsorted(intervals[:, 0], lam, side="right")) - 1
    return j >= 0 and lam <= intervals[j, 1]
