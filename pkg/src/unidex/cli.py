"""Command-line front end.

Subcommands: synthesize (write a design file), compare (synthesized vs
random-baseline CCD table over several N), ccd (re-score an existing
design file), bench (time the compiled orthant kernel against the numpy
fallback). Exit codes: 1 input/parse problems, 2 geometry problems,
3 numeric failures.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import _kernels
from .ccd import CcdScorer, MCConfig
from .design_io import Design, read_design, write_csv, write_json
from .engine import EngineConfig, synthesize_design
from .errors import (
    DslError,
    GeometryError,
    InvalidNError,
    NumericError,
    PipelineError,
    UnidexError,
    ValidationFailedError,
)
from .parser import grammar_check, parse
from .sampler import sample_scene
from .scene import assemble_joint_domain, build_scene_graph, load_class_table
from ._kernels import _orthants_py

EXIT_INPUT = 1
EXIT_GEOMETRY = 2
EXIT_NUMERIC = 3


def _fail_code(e: BaseException) -> int:
    if isinstance(e, PipelineError):
        return _fail_code(e.cause)
    if isinstance(e, (DslError, ValidationFailedError, InvalidNError)):
        return EXIT_INPUT
    if isinstance(e, GeometryError):
        return EXIT_GEOMETRY
    if isinstance(e, NumericError):
        return EXIT_NUMERIC
    return EXIT_INPUT


def _read_spec(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise FileNotFoundError(f"cannot read {path}: {e}") from e


def _build_domain(source: str, class_table):
    spec = parse(source, classes=tuple(class_table))
    report = grammar_check(spec)
    if report.errors:
        raise ValidationFailedError(report)
    graph = build_scene_graph(spec, class_table)
    return graph, assemble_joint_domain(graph)


def _mc_from_args(args) -> MCConfig:
    return MCConfig(centers=args.mc_centers, pool=args.mc_pool, seed=args.seed)


def cmd_synthesize(args) -> int:
    source = _read_spec(args.spec)
    if args.n < 2:
        raise InvalidNError("N must be ≥ 2")
    table = load_class_table(args.class_table)
    cfg = EngineConfig(
        seed=args.seed,
        order_cap=args.order_cap,
        mc=_mc_from_args(args),
        class_table=table,
    )
    t0 = time.perf_counter()
    design, diag = synthesize_design(source, args.n, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    fmt = args.format
    if fmt is None:
        fmt = "json" if args.out.endswith(".json") else "csv"
    if fmt == "json":
        write_json(design, args.out, seed=args.seed, timings_ms=diag.timings_ms)
    else:
        write_csv(design, args.out)
    print(f"ccd {design.ccd_score:.17g}")
    print(f"time_ms {wall_ms:.3f}")
    return 0


def cmd_compare(args) -> int:
    source = _read_spec(args.spec)
    table = load_class_table(args.class_table)
    try:
        n_list = [int(v) for v in args.n_list.split(",") if v.strip()]
    except ValueError as e:
        raise InvalidNError(f"bad --n-list: {e}") from e
    if not n_list or min(n_list) < 2:
        raise InvalidNError("N must be ≥ 2")
    graph, domain = _build_domain(source, table)
    scorer = CcdScorer(domain, _mc_from_args(args))
    print("n,synth_ccd,synth_ms,rand_ccd_min,rand_ccd_median,rand_ccd_max,rand_ms_mean")
    cfg = EngineConfig(
        seed=args.seed,
        order_cap=args.order_cap,
        mc=_mc_from_args(args),
        class_table=table,
    )
    for n in n_list:
        t0 = time.perf_counter()
        design, diag = synthesize_design(source, n, cfg)
        synth_ms = (time.perf_counter() - t0) * 1000.0
        rand_scores = []
        rand_ms = []
        for trial in range(args.trials):
            t1 = time.perf_counter()
            rnd = sample_scene(graph, n, seed=args.seed + trial)
            rand_ms.append((time.perf_counter() - t1) * 1000.0)
            rand_scores.append(scorer.score(rnd.points))
        rs = np.asarray(rand_scores)
        print(
            f"{n},{design.ccd_score:.17g},{synth_ms:.3f},"
            f"{rs.min():.17g},{float(np.median(rs)):.17g},{rs.max():.17g},"
            f"{float(np.mean(rand_ms)):.3f}"
        )
        stage = ", ".join(
            f"{k} {v:.1f} ms" for k, v in diag.timings_ms.items() if k != "total"
        )
        print(
            f"# n={n}: orders evaluated: {diag.orders_evaluated}; {stage}",
            file=sys.stderr,
        )
    return 0


def cmd_ccd(args) -> int:
    source = _read_spec(args.spec)
    table = load_class_table(args.class_table)
    graph, domain = _build_domain(source, table)
    cols, pts = read_design(args.design)
    expected = list(domain.column_names)
    if cols != expected:
        raise GeometryError(
            f"design columns {cols} do not match spec dimensions {expected}"
        )
    inside = domain.polytope.contains_many(pts, 1e-7)
    if not inside.all():
        bad = [int(i) for i in (~inside).nonzero()[0]]
        raise GeometryError(f"rows outside the domain: {bad}")
    design = Design(points=pts, dim_meta=domain.dim_meta)
    scorer = CcdScorer(domain, MCConfig(centers=args.mc_centers, pool=args.mc_pool, seed=args.seed))
    print(f"ccd {scorer.score(design.points):.17g}")
    return 0


def cmd_bench(args) -> int:
    rng = np.random.Generator(np.random.PCG64(args.seed))
    pts = rng.random((args.pool, args.dims))
    centers = rng.random((args.centers, args.dims))
    results = {}
    backends = [("python", _orthants_py.orthant_counts)]
    if _kernels.BACKEND == "compiled":
        backends.append(("compiled", _kernels.orthant_counts))
    for name, fn in backends:
        fn(pts[:1000], centers[:64])  # warm up
        t0 = time.perf_counter()
        out = fn(pts, centers)
        results[name] = (time.perf_counter() - t0, out)
    print(f"active backend: {_kernels.BACKEND}")
    print("backend,pool,centers,dims,seconds")
    for name, (secs, _) in results.items():
        print(f"{name},{args.pool},{args.centers},{args.dims},{secs:.4f}")
    if len(results) == 2:
        agree = bool(np.array_equal(results["python"][1], results["compiled"][1]))
        speed = results["python"][0] / max(results["compiled"][0], 1e-9)
        print(f"counts agree: {agree}; compiled speedup: {speed:.1f}x")
        if not agree:
            raise NumericError("kernel backends disagree")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="unidex",
        description="Low-discrepancy experiment designs over scene-spec domains",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--class-table", default=None,
                       help="JSON class extents; UNIDEX_CLASS_TABLE env is the fallback")

    p = sub.add_parser("synthesize", help="synthesize a design and write it out")
    p.add_argument("spec")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--order-cap", type=int, default=720)
    p.add_argument("--mc-centers", type=int, default=4096)
    p.add_argument("--mc-pool", type=int, default=20000)
    common(p)
    p.set_defaults(fn=cmd_synthesize)

    p = sub.add_parser("compare", help="synthesized vs random baseline over several N")
    p.add_argument("spec")
    p.add_argument("--n-list", default="10,25,50,100")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--order-cap", type=int, default=720)
    p.add_argument("--mc-centers", type=int, default=4096)
    p.add_argument("--mc-pool", type=int, default=20000)
    common(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("ccd", help="score an existing design file against a spec")
    p.add_argument("spec")
    p.add_argument("design")
    p.add_argument("--mc-centers", type=int, default=4096)
    p.add_argument("--mc-pool", type=int, default=20000)
    common(p)
    p.set_defaults(fn=cmd_ccd)

    p = sub.add_parser("bench", help="time the orthant kernels")
    p.add_argument("--pool", type=int, default=20000)
    p.add_argument("--centers", type=int, default=1024)
    p.add_argument("--dims", type=int, default=4)
    common(p)
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT
    except UnidexError as e:
        print(str(e), file=sys.stderr)
        return _fail_code(e)
    except (OSError, ValueError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
