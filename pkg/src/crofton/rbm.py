"""Discretized reflected Brownian motion inside a shape.

Euler scheme: propose x' = x + sqrt(dt) * G (plus drift * dt when a drift
field is supplied); when the proposal leaves the body it is mirrored across
the nearest boundary point, with an inward-nudged clamp as a last resort.
The trajectory never leaves the body; this is all the estimator needs, since
counting only requires the sample to become dense in the body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from crofton.shapes import PointCloud, Shape

_BLOCK = 256  # proposals per vectorized batch between boundary events


@dataclass(frozen=True)
class RbmConfig:
    """Trajectory configuration; dt must satisfy dt <= rolling_alpha^2 / 100."""

    shape: Shape
    x0: np.ndarray
    dt: float
    t_end: float
    seed: int
    drift: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=float)
        if x0.shape != (self.shape.dim,):
            raise ValueError(f"x0 must have shape ({self.shape.dim},)")
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        if not (self.dt > 0 and self.t_end > 0):
            raise ValueError("dt and t_end must be positive")
        cap = self.shape.rolling_alpha ** 2 / 100.0
        if self.dt > cap:
            raise ValueError(
                f"dt={self.dt} too large for rolling radius "
                f"{self.shape.rolling_alpha} (need dt <= {cap:.3g})")
        if not self.shape.contains(x0):
            raise ValueError("x0 must lie inside the shape")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt))


def _reflect(shape: Shape, x_prev: np.ndarray, prop: np.ndarray) -> np.ndarray:
    p = shape.project_to_boundary(prop)
    mirrored = 2.0 * p - prop
    if shape.contains(mirrored):
        return mirrored
    # sharp-curvature fallback: clamp to the boundary, nudged inward
    inward = x_prev - p
    nrm = float(np.linalg.norm(inward))
    if nrm < 1e-30:
        raise RuntimeError("reflection failed: no inward direction")
    fixed = p + 1e-9 * inward / nrm
    if not shape.contains(fixed):
        raise RuntimeError("reflection failed: clamped point still outside")
    return fixed


def simulate_rbm(cfg: RbmConfig) -> PointCloud:
    """Simulate the reflected trajectory; deterministic per seed.

    Emits floor(t_end / dt) points.  Between boundary events the positions
    are cumulative sums of the Gaussian steps, evaluated in fixed-size
    batches for speed; every emitted point is verified to lie in the body.
    """
    shape = cfg.shape
    n = cfg.n_steps
    rng = np.random.default_rng(cfg.seed)
    steps = math.sqrt(cfg.dt) * rng.standard_normal((n, shape.dim))
    out = np.empty((n, shape.dim))
    x = cfg.x0.copy()

    if cfg.drift is None:
        i = 0
        while i < n:
            j = min(i + _BLOCK, n)
            block = x + np.cumsum(steps[i:j], axis=0)
            inside = shape.contains_many(block)
            if inside.all():
                out[i:j] = block
                x = block[-1]
                i = j
                continue
            bad = int(np.argmin(inside))
            if bad > 0:
                out[i:i + bad] = block[:bad]
                x = block[bad - 1]
            x = _reflect(shape, x, block[bad])
            out[i + bad] = x
            i += bad + 1
    else:
        for i in range(n):
            prop = x + steps[i] + cfg.drift(x) * cfg.dt
            if not shape.contains(prop):
                prop = _reflect(shape, x, prop)
            out[i] = prop
            x = prop

    if not shape.contains_many(out).all():
        raise RuntimeError("trajectory left the shape")
    return PointCloud(shape.dim, out, provenance="rbm")
