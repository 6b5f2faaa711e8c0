import math

import numpy as np
import pytest

from crofton import geom
from crofton.montecarlo import (
    CounterEvaluationError,
    LinePlan,
    beta,
    iter_direction_lines,
    mc_estimate,
    sample_lines,
)
from crofton.shapes import Ball3, Disk, Torus


class TestBeta:
    def test_d2(self):
        assert beta(2) == pytest.approx(2 / math.pi, rel=1e-14)

    def test_d3(self):
        assert beta(3) == pytest.approx(0.5, rel=1e-14)

    def test_d4(self):
        assert beta(4) == pytest.approx(4 / (3 * math.pi), rel=1e-14)

    def test_rejects_d1(self):
        with pytest.raises(geom.InvalidDimensionError):
            beta(1)


class TestSampleLines:
    def test_single_line(self):
        plan = LinePlan(k=1, l=1, L=2.0, seed=5, d=3)
        lines = sample_lines(plan)
        assert len(lines) == 1
        idx, line = lines[0]
        assert idx == 0
        assert (np.abs(line.offset) <= 2.0).all()

    def test_counts_and_directions(self):
        plan = LinePlan(k=3, l=5, L=1.0, seed=6, d=2)
        lines = sample_lines(plan)
        assert len(lines) == 15
        thetas = {tuple(line.theta) for _, line in lines}
        assert len(thetas) == 3

    def test_deterministic(self):
        plan = LinePlan(k=4, l=7, L=1.5, seed=9, d=3)
        a = sample_lines(plan)
        b = sample_lines(plan)
        for (ia, la), (ib, lb) in zip(a, b):
            assert ia == ib
            assert np.array_equal(la.theta, lb.theta)
            assert np.array_equal(la.offset, lb.offset)

    def test_block_stream_matches_full_list(self):
        plan = LinePlan(k=3, l=4, L=1.0, seed=2, d=2)
        full = sample_lines(plan)
        rebuilt = [(i, line) for i in range(plan.k)
                   for line in iter_direction_lines(plan, i)]
        for (ia, la), (ib, lb) in zip(full, rebuilt):
            assert ia == ib and np.array_equal(la.offset, lb.offset)

    def test_validation(self):
        with pytest.raises(ValueError):
            LinePlan(k=0, l=1, L=1.0, seed=0, d=2)
        with pytest.raises(ValueError):
            LinePlan(k=1, l=1, L=0.0, seed=0, d=2)


class TestMcEstimate:
    def test_zero_counter(self):
        plan = LinePlan(k=10, l=10, L=1.0, seed=1, d=2)
        est = mc_estimate(lambda line: 0, plan)
        assert est.value == 0.0
        assert est.stderr == 0.0

    def test_disk_exact_counter(self):
        # closed-form: every sampled line with |y| < 1 crosses the circle twice,
        # so the estimate equals 2*pi*L exactly
        disk = Disk(1.0)
        plan = LinePlan(k=50, l=50, L=1.0, seed=3, d=2)
        est = mc_estimate(disk.true_line_count, plan, counter_kind="exact")
        assert est.value == pytest.approx(2 * math.pi, rel=1e-12)
        assert est.stderr == 0.0

    def test_ball_exact_counter_vs_quadrature(self):
        # deterministic offset-grid quadrature of the crossing integral
        ball = Ball3(1.0)
        h = 1e-3
        grid = np.arange(-1 + h / 2, 1, h)
        gx, gy = np.meshgrid(grid, grid, indexing="ij")
        hit = gx * gx + gy * gy < 1.0
        quad_mean = 2.0 * hit.mean()
        quad_value = (2.0 ** 2) / beta(3) * quad_mean
        assert quad_value == pytest.approx(4 * math.pi, rel=5e-3)

        plan = LinePlan(k=120, l=200, L=1.0, seed=4, d=3)
        est = mc_estimate(ball.true_line_count, plan, counter_kind="exact")
        assert abs(est.value - quad_value) < 3 * est.stderr + 0.01
        assert est.stderr < 0.05 * 4 * math.pi

    def test_torus_exact_counter(self):
        torus = Torus(2.0, 0.5)
        plan = LinePlan(k=60, l=120, L=2.5, seed=8, d=3)
        est = mc_estimate(torus.true_line_count, plan, counter_kind="exact")
        truth = 4 * math.pi ** 2
        assert abs(est.value - truth) < 3 * est.stderr + 1e-9 * truth

    def test_workers_do_not_change_result(self):
        disk = Disk(1.0)
        plan = LinePlan(k=16, l=25, L=1.0, seed=12, d=2)
        base = mc_estimate(disk.true_line_count, plan)
        for workers in (4, 8):
            alt = mc_estimate(disk.true_line_count, plan, workers=workers)
            assert alt.value == base.value
            assert alt.stderr == base.stderr

    def test_stderr_rate(self):
        # quadrupling the direction count should about halve the block stderr
        ball = Ball3(1.0)
        e1 = mc_estimate(ball.true_line_count,
                         LinePlan(k=50, l=100, L=1.0, seed=21, d=3))
        e2 = mc_estimate(ball.true_line_count,
                         LinePlan(k=200, l=100, L=1.0, seed=21, d=3))
        assert e1.stderr / e2.stderr == pytest.approx(2.0, rel=0.2)

    def test_rotation_invariance_in_distribution(self):
        from crofton import dw
        from crofton.shapes import Peanut

        pea = Peanut()
        pts = pea.sample(4000, seed=3).points
        ang = 0.7
        rot = np.array([[math.cos(ang), -math.sin(ang)],
                        [math.sin(ang), math.cos(ang)]])
        eps = dw.auto_epsilon(pts)

        def estimate(points, seed):
            index = dw.DwIndex(points, eps)
            L = float(np.linalg.norm(points, axis=1).max())
            plan = LinePlan(k=40, l=100, L=L, seed=seed, d=2)
            return mc_estimate(lambda line: dw.crossing_count(line, index), plan)

        a = estimate(pts, 31)
        b = estimate(pts @ rot.T, 32)
        assert abs(a.value - b.value) <= 3 * math.hypot(a.stderr, b.stderr)

    def test_counter_failure_carries_diagnostics(self):
        def broken(line):
            raise RuntimeError("boom")

        plan = LinePlan(k=2, l=2, L=1.0, seed=13, d=2)
        with pytest.raises(CounterEvaluationError) as err:
            mc_estimate(broken, plan)
        msg = str(err.value)
        assert "seed 13" in msg and "theta" in msg

    def test_negative_count_rejected(self):
        plan = LinePlan(k=1, l=1, L=1.0, seed=13, d=2)
        with pytest.raises(CounterEvaluationError):
            mc_estimate(lambda line: -2, plan)

    def test_estimate_record_fields(self):
        plan = LinePlan(k=3, l=3, L=1.0, seed=14, d=2)
        est = mc_estimate(lambda line: 2, plan, counter_kind="dw",
                          epsilon_or_alpha=0.25, n_points=100)
        record = est.to_dict()
        assert record["counter_kind"] == "dw"
        assert record["epsilon_or_alpha"] == 0.25
        assert record["n_points"] == 100
        assert record["plan"]["k"] == 3
        assert record["runtime_ms"] >= 0.0
