"""Uniform spatial hash over a fixed point set.

Cells are axis-aligned cubes of a fixed size; buckets map integer cell keys
to index arrays into the original point array.  Queries return candidate
index supersets (cell resolution); callers apply exact distance filters.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


class UniformGrid:
    """Immutable grid index supporting ball and line-tube candidate queries."""

    def __init__(self, points: np.ndarray, cell: float):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or len(points) == 0:
            raise ValueError("points must be a non-empty (n, d) array")
        if not cell > 0:
            raise ValueError("cell size must be positive")
        self.points = points
        self.cell = float(cell)
        self.dim = points.shape[1]
        self._origin = points.min(axis=0) - 0.5 * self.cell
        cells = np.floor((points - self._origin) / self.cell).astype(np.int64)
        self._size = cells.max(axis=0) + 1
        strides = np.ones(self.dim, dtype=np.int64)
        for i in range(self.dim - 2, -1, -1):
            strides[i] = strides[i + 1] * self._size[i + 1]
        self._strides = strides
        keys = cells @ strides
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        uniq, starts = np.unique(sorted_keys, return_index=True)
        bounds = np.append(starts, len(order))
        self._buckets = {
            int(k): order[s:e] for k, s, e in zip(uniq, starts, bounds[1:])
        }
        self._empty = np.empty(0, dtype=np.int64)

    def _bucket(self, coords) -> np.ndarray:
        key = 0
        for c, s in zip(coords, self._strides):
            key += c * int(s)
        return self._buckets.get(int(key), self._empty)

    def _axis_range(self, axis: int, lo: float, hi: float) -> range:
        c0 = int(math.floor((lo - self._origin[axis]) / self.cell))
        c1 = int(math.floor((hi - self._origin[axis]) / self.cell))
        c0 = max(c0, 0)
        c1 = min(c1, int(self._size[axis]) - 1)
        return range(c0, c1 + 1)

    def candidates_in_ball(self, center, radius: float) -> np.ndarray:
        """Indices of all points whose cell overlaps the ball (superset)."""
        center = np.asarray(center, dtype=float)
        ranges = [self._axis_range(i, center[i] - radius, center[i] + radius)
                  for i in range(self.dim)]
        chunks = [self._bucket(coords) for coords in itertools.product(*ranges)]
        chunks = [c for c in chunks if len(c)]
        if not chunks:
            return self._empty
        return np.concatenate(chunks)

    def has_point_within(self, center, radius: float) -> bool:
        """True when some stored point lies within ``radius`` of ``center``.

        Visits cells closest to the center first and exits early, which makes
        dense-region rejection cheap.
        """
        center = np.asarray(center, dtype=float)
        r2 = radius * radius
        ranges = [self._axis_range(i, center[i] - radius, center[i] + radius)
                  for i in range(self.dim)]
        cells = list(itertools.product(*ranges))
        if not cells:
            return False

        def box_dist2(coords):
            d2 = 0.0
            for i, c in enumerate(coords):
                lo = self._origin[i] + c * self.cell
                gap = max(lo - center[i], center[i] - (lo + self.cell), 0.0)
                d2 += gap * gap
            return d2

        cells.sort(key=box_dist2)
        for coords in cells:
            if box_dist2(coords) > r2:
                break
            idx = self._bucket(coords)
            if len(idx) == 0:
                continue
            diff = self.points[idx] - center
            if (np.einsum("ij,ij->i", diff, diff) <= r2).any():
                return True
        return False

    def candidates_near_line(self, base, theta, radius: float,
                             window: tuple[float, float] | None = None) -> np.ndarray:
        """Indices of points possibly within ``radius`` of a line (superset).

        ``base`` and ``theta`` define the line; ``window`` optionally limits
        the parameter range scanned.  Walks integer columns along the
        dominant direction axis and collects the cell slab around the line in
        each column.
        """
        base = np.asarray(base, dtype=float)
        theta = np.asarray(theta, dtype=float)
        d = self.dim
        lo_box = self._origin - radius
        hi_box = self._origin + self._size * self.cell + radius

        # clip the line against the inflated grid box
        lam_lo, lam_hi = -math.inf, math.inf
        for i in range(d):
            if abs(theta[i]) < 1e-300:
                if not (lo_box[i] <= base[i] <= hi_box[i]):
                    return self._empty
                continue
            a = (lo_box[i] - base[i]) / theta[i]
            b = (hi_box[i] - base[i]) / theta[i]
            if a > b:
                a, b = b, a
            lam_lo = max(lam_lo, a)
            lam_hi = min(lam_hi, b)
        if window is not None:
            lam_lo = max(lam_lo, window[0])
            lam_hi = min(lam_hi, window[1])
        if lam_lo > lam_hi:
            return self._empty

        axis = int(np.argmax(np.abs(theta)))
        others = [i for i in range(d) if i != axis]
        ta = theta[axis]
        # lam inflation so every point's foot parameter falls inside its column range
        pad_lam = (radius + self.cell) * math.sqrt(d)
        pad_coord = radius + self.cell

        a_vals = (base[axis] + lam_lo * ta, base[axis] + lam_hi * ta)
        col_range = self._axis_range(axis, min(a_vals) - pad_coord,
                                     max(a_vals) + pad_coord)

        chunks = []
        for ca in col_range:
            edge0 = self._origin[axis] + ca * self.cell
            l0 = (edge0 - base[axis]) / ta
            l1 = (edge0 + self.cell - base[axis]) / ta
            if l0 > l1:
                l0, l1 = l1, l0
            l0 = max(l0 - pad_lam, lam_lo - pad_lam)
            l1 = min(l1 + pad_lam, lam_hi + pad_lam)
            if l0 > l1:
                continue
            ranges = []
            for b_ax in others:
                x0 = base[b_ax] + l0 * theta[b_ax]
                x1 = base[b_ax] + l1 * theta[b_ax]
                if x0 > x1:
                    x0, x1 = x1, x0
                ranges.append(self._axis_range(b_ax, x0 - pad_coord, x1 + pad_coord))
            for combo in itertools.product(*ranges):
                coords = [0] * d
                coords[axis] = ca
                for b_ax, c in zip(others, combo):
                    coords[b_ax] = c
                idx = self._bucket(coords)
                if len(idx):
                    chunks.append(idx)
        if not chunks:
            return self._empty
        return np.concatenate(chunks)
