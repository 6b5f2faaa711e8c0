"""Command-line interface: sample generation, estimation, and benchmarking.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from crofton import alphahull, dw, pointio, rbm, shapes
from crofton.montecarlo import CounterEvaluationError, LinePlan, mc_estimate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class UsageError(ValueError):
    pass


_SHAPE_FLAGS = {
    "disk": ("r",),
    "annulus": ("r1", "r2"),
    "rounded-square": ("side", "corner"),
    "peanut": ("c", "bridge"),
    "ball3": ("r",),
    "shell3": ("r1", "r2"),
    "torus": ("R", "r"),
}


def _add_shape_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--shape", required=True, choices=sorted(_SHAPE_FLAGS))
    parser.add_argument("--r", type=float, default=None)
    parser.add_argument("--r1", type=float, default=None)
    parser.add_argument("--r2", type=float, default=None)
    parser.add_argument("--R", dest="R", type=float, default=None)
    parser.add_argument("--side", type=float, default=None)
    parser.add_argument("--corner", type=float, default=None)
    parser.add_argument("--c", type=float, default=None)
    parser.add_argument("--bridge", type=float, default=None)


def _build_shape(args) -> shapes.Shape:
    params = {}
    for name in _SHAPE_FLAGS[args.shape]:
        val = getattr(args, name)
        if val is not None:
            params[name] = val
    try:
        return shapes.make_shape(args.shape, **params)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad shape parameters: {exc}") from exc


def _estimate_from_cloud(cloud: shapes.PointCloud, method: str, *,
                         epsilon, alpha, cap, k, l, seed, workers):
    pts = cloud.points
    d = cloud.dimension
    if method == "alpha" and d != 2:
        raise UsageError(f"method 'alpha' supports d=2 only, input has d={d}")
    if k < 1 or l < 1:
        raise UsageError("need k >= 1 and l >= 1")
    window = float(np.sqrt(np.einsum("ij,ij->i", pts, pts)).max())
    plan = LinePlan(k=k, l=l, L=window, seed=seed, d=d)

    if method in ("dw", "dw-capped"):
        if epsilon == "auto":
            eps = dw.auto_epsilon(pts)
        else:
            eps = float(epsilon)
            if not eps > 0:
                raise UsageError("epsilon must be positive")
        index = dw.DwIndex(pts, eps)
        if method == "dw-capped":
            if cap is None:
                raise UsageError("method 'dw-capped' requires --cap N0")
            if cap < 2:
                raise UsageError("--cap must be at least 2")
            counter = lambda line: dw.crossing_count_capped(line, index, cap)
        else:
            counter = lambda line: dw.crossing_count(line, index)
        return mc_estimate(counter, plan, workers=workers, counter_kind=method,
                           epsilon_or_alpha=eps, n_points=len(pts))

    if method == "alpha":
        if alpha is None or not alpha > 0:
            raise UsageError("method 'alpha' requires --alpha > 0")
        comp = alphahull.alpha_complement2(pts, alpha)
        counter = lambda line: alphahull.crossing_count(line, comp)
        return mc_estimate(counter, plan, workers=workers, counter_kind="alpha",
                           epsilon_or_alpha=float(alpha), n_points=len(pts))

    raise UsageError(f"unknown method {method!r}")


def cmd_sample(args) -> int:
    shape = _build_shape(args)
    if args.rbm:
        if args.t_end is None or args.dt is None:
            raise UsageError("--rbm requires --t-end and --dt")
        cfg = rbm.RbmConfig(shape=shape, x0=shape.interior_point(),
                            dt=args.dt, t_end=args.t_end, seed=args.seed)
        cloud = rbm.simulate_rbm(cfg)
    else:
        if args.n is None:
            raise UsageError("iid sampling requires --n")
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        cloud = shapes.sample_iid(shape, args.n, args.seed)
    pointio.write_points(args.out, cloud)
    return EXIT_OK


def cmd_estimate(args) -> int:
    cloud = pointio.read_points(args.inp)
    est = _estimate_from_cloud(
        cloud, args.method, epsilon=args.epsilon, alpha=args.alpha,
        cap=args.cap, k=args.k, l=args.l, seed=args.seed, workers=args.workers)
    record = est.to_dict()
    record["method"] = args.method
    record["input"] = args.inp
    record["dimension"] = cloud.dimension
    json.dump(record, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


_BENCH_COLUMNS = [
    "command", "shape", "shape_params", "method", "n", "rep", "sample_seed",
    "line_seed", "epsilon_or_alpha", "cap", "k", "l", "L", "value", "stderr",
    "truth", "abs_error", "rel_error", "runtime_ms",
]


def _bench_epsilon(epsilon, n: int, d: int):
    """Bench radius spec: 'auto', a number, or 'c:<C>' for C*(ln n / n)^(1/d)."""
    if isinstance(epsilon, str) and epsilon.startswith("c:"):
        try:
            c_prime = float(epsilon[2:])
        except ValueError:
            raise UsageError(f"bad rate-rule radius {epsilon!r}") from None
        if not c_prime > 0:
            raise UsageError("rate-rule constant must be positive")
        return c_prime * (np.log(n) / n) ** (1.0 / d)
    return epsilon


def bench_rows(shape: shapes.Shape, ns, reps: int, methods, *, epsilon="auto",
               alpha=None, cap=None, k=50, l=200, seed=0, workers=1):
    """One estimate record per (n, replicate, method) combination."""
    truth = shape.boundary_measure()
    rows = []
    for n in ns:
        eps_n = _bench_epsilon(epsilon, int(n), shape.dim)
        for rep in range(reps):
            sample_seed = int(np.random.SeedSequence(
                entropy=seed, spawn_key=(int(n), rep)).generate_state(1)[0])
            cloud = shapes.sample_iid(shape, int(n), sample_seed)
            for method in methods:
                t0 = time.perf_counter()
                est = _estimate_from_cloud(
                    cloud, method, epsilon=eps_n, alpha=alpha, cap=cap,
                    k=k, l=l, seed=sample_seed + 1, workers=workers)
                runtime_ms = (time.perf_counter() - t0) * 1000.0
                abs_err = abs(est.value - truth)
                rows.append({
                    "command": "bench",
                    "shape": shape.kind,
                    "shape_params": ";".join(f"{key}={val}" for key, val
                                             in sorted(shape.params().items())),
                    "method": method,
                    "n": int(n),
                    "rep": rep,
                    "sample_seed": sample_seed,
                    "line_seed": sample_seed + 1,
                    "epsilon_or_alpha": est.epsilon_or_alpha,
                    "cap": cap if method == "dw-capped" else None,
                    "k": k,
                    "l": l,
                    "L": est.plan.L,
                    "value": est.value,
                    "stderr": est.stderr,
                    "truth": truth,
                    "abs_error": abs_err,
                    "rel_error": abs_err / truth,
                    "runtime_ms": runtime_ms,
                })
    return rows


def cmd_bench(args) -> int:
    shape = _build_shape(args)
    ns = [int(v) for v in args.sweep.split(",") if v.strip()] if args.sweep else []
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("dw", "dw-capped", "alpha"):
            raise UsageError(f"unknown method {m!r}")
        if m == "alpha" and shape.dim != 2:
            raise UsageError("method 'alpha' supports d=2 shapes only")
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    rows = bench_rows(shape, ns, args.reps, methods, epsilon=args.epsilon,
                      alpha=args.alpha, cap=args.cap, k=args.k, l=args.l,
                      seed=args.seed, workers=args.workers)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=_BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crofton",
        description="Boundary-measure estimation from interior point samples.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="generate a point cloud CSV")
    _add_shape_args(p_sample)
    p_sample.add_argument("--n", type=int, default=None, help="iid sample size")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out", required=True)
    p_sample.add_argument("--rbm", action="store_true",
                          help="generate a reflected-diffusion trajectory instead of iid points")
    p_sample.add_argument("--t-end", dest="t_end", type=float, default=None)
    p_sample.add_argument("--dt", type=float, default=None)
    p_sample.set_defaults(func=cmd_sample)

    p_est = sub.add_parser("estimate", help="estimate boundary measure from a CSV")
    p_est.add_argument("--in", dest="inp", required=True)
    p_est.add_argument("--method", required=True, choices=["dw", "dw-capped", "alpha"])
    p_est.add_argument("--epsilon", default="auto",
                       help="ball radius for dw methods, or 'auto'")
    p_est.add_argument("--alpha", type=float, default=None)
    p_est.add_argument("--cap", type=int, default=None,
                       help="crossing cap N0 for dw-capped")
    p_est.add_argument("--k", type=int, default=50, help="direction count")
    p_est.add_argument("--l", type=int, default=200, help="lines per direction")
    p_est.add_argument("--seed", type=int, default=0)
    p_est.add_argument("--workers", type=int, default=1)
    p_est.set_defaults(func=cmd_estimate)

    p_bench = sub.add_parser("bench", help="error sweep against a known shape")
    _add_shape_args(p_bench)
    p_bench.add_argument("--sweep", default="", help="comma-separated sample sizes")
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--methods", default="dw", help="comma-separated methods")
    p_bench.add_argument("--epsilon", default="auto",
                         help="'auto', a number, or 'c:<C>' for the rate rule "
                              "C*(ln n / n)^(1/d)")
    p_bench.add_argument("--alpha", type=float, default=None)
    p_bench.add_argument("--cap", type=int, default=None)
    p_bench.add_argument("--k", type=int, default=50)
    p_bench.add_argument("--l", type=int, default=200)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", default=None)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (pointio.PointFormatError, FileNotFoundError, IsADirectoryError,
            PermissionError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (CounterEvaluationError, shapes.TangentLineError,
            alphahull.DegenerateInputError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
