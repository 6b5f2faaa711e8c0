"""Monte Carlo evaluation of the line-integral boundary-measure formula.

The boundary measure of a compact body equals ``1/beta(d)`` times the
integral, over directions on the half-sphere and offsets in the orthogonal
complement, of the number of line-boundary crossings.  Directions are drawn
uniformly; for each direction the offsets are uniform on the hypercube
``[-L, L]^(d-1)`` in that direction's basis, and the estimate is

    value = (2L)^(d-1) / beta(d) * mean(counts)

with a block standard error computed over per-direction means.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from crofton.geom import InvalidDimensionError, Line, orthonormal_basis, sample_direction


class CounterEvaluationError(RuntimeError):
    """A crossing counter failed on a sampled line; carries line diagnostics."""


def beta(d: int) -> float:
    """Normalizing constant Gamma(d/2) / (Gamma((d+1)/2) * sqrt(pi))."""
    if d < 2:
        raise InvalidDimensionError(f"need d >= 2, got {d}")
    return math.exp(math.lgamma(d / 2.0) - math.lgamma((d + 1) / 2.0)) / math.sqrt(math.pi)


@dataclass(frozen=True)
class LinePlan:
    """Sampling plan: k directions, l offsets per direction, window half-width L."""

    k: int
    l: int
    L: float
    seed: int
    d: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("need k >= 1 and l >= 1")
        if not self.L > 0:
            raise ValueError("window half-width L must be positive")
        if self.d < 2:
            raise InvalidDimensionError(f"need d >= 2, got {self.d}")

    @property
    def total_lines(self) -> int:
        return self.k * self.l


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo boundary-measure estimate with its sampling record."""

    value: float
    stderr: float
    counter_kind: str
    plan: LinePlan
    epsilon_or_alpha: Optional[float]
    n_points: Optional[int]
    runtime_ms: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "counter_kind": self.counter_kind,
            "epsilon_or_alpha": self.epsilon_or_alpha,
            "n_points": self.n_points,
            "runtime_ms": self.runtime_ms,
            "plan": {"k": self.plan.k, "l": self.plan.l, "L": self.plan.L,
                     "seed": self.plan.seed, "d": self.plan.d},
        }


def _direction_stream(plan: LinePlan, i: int):
    """Direction, basis, and offset block for direction index i.

    Each direction owns an independent child RNG stream, so results do not
    depend on evaluation order or thread count.
    """
    child = np.random.SeedSequence(plan.seed).spawn(plan.k)[i]
    rng = np.random.default_rng(child)
    theta = sample_direction(rng, plan.d)
    basis = orthonormal_basis(theta)
    offsets = plan.L * rng.uniform(-1.0, 1.0, size=(plan.l, plan.d - 1))
    return theta, basis, offsets


def sample_lines(plan: LinePlan) -> list[tuple[int, Line]]:
    """All k*l sampled lines as (direction-index, Line) pairs."""
    out = []
    for i in range(plan.k):
        theta, basis, offsets = _direction_stream(plan, i)
        for off in offsets:
            out.append((i, Line(theta=theta, basis=basis, offset=off)))
    return out


def iter_direction_lines(plan: LinePlan, i: int) -> Iterator[Line]:
    theta, basis, offsets = _direction_stream(plan, i)
    for off in offsets:
        yield Line(theta=theta, basis=basis, offset=off)


def mc_estimate(counter: Callable[[Line], int], plan: LinePlan, *,
                workers: int = 1, counter_kind: str = "custom",
                epsilon_or_alpha: float | None = None,
                n_points: int | None = None) -> Estimate:
    """Estimate the boundary measure by averaging a crossing counter.

    ``counter`` maps a Line to a non-negative integer crossing count.  Any
    exception it raises aborts the run with the offending line's parameters
    attached.  Counts are accumulated per direction block and combined in
    direction order, so the result is identical for any ``workers`` value.
    """
    t0 = time.perf_counter()

    def run_block(i: int) -> int:
        theta, basis, offsets = _direction_stream(plan, i)
        total = 0
        for j, off in enumerate(offsets):
            line = Line(theta=theta, basis=basis, offset=off)
            try:
                n = counter(line)
            except Exception as exc:
                raise CounterEvaluationError(
                    f"counter failed on line (direction {i}, offset {j}, "
                    f"seed {plan.seed}): theta={theta.tolist()}, "
                    f"offset={off.tolist()}: {exc}") from exc
            if n < 0:
                raise CounterEvaluationError(
                    f"counter returned {n} < 0 on line (direction {i}, offset {j}, "
                    f"seed {plan.seed})")
            total += int(n)
        return total

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            block_sums = list(pool.map(run_block, range(plan.k)))
    else:
        block_sums = [run_block(i) for i in range(plan.k)]

    scale = (2.0 * plan.L) ** (plan.d - 1) / beta(plan.d)
    sums = np.array(block_sums, dtype=float)
    value = scale * sums.sum() / plan.total_lines
    if plan.k >= 2:
        block_means = sums / plan.l
        stderr = scale * float(np.std(block_means, ddof=1)) / math.sqrt(plan.k)
    else:
        stderr = 0.0
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    return Estimate(value=float(value), stderr=float(stderr),
                    counter_kind=counter_kind, plan=plan,
                    epsilon_or_alpha=epsilon_or_alpha, n_points=n_points,
                    runtime_ms=runtime_ms)
