"""End-to-end design synthesis.

Pipeline: parse and validate the scene source, build the dependency graph
and joint domain, generate the lattice design on the hypercube, transform
it through every viable conditioning order (up to the cap), score each
result, and keep the lowest-scoring design. Ties break toward the
lexicographically smallest permutation, which sequential evaluation in
sorted order gives for free. Per-stage wall-clock timings and per-order
scores are reported alongside the design.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .ccd import CcdScorer, MCConfig
from .design_io import Design
from .errors import InvalidNError, NumericError, PipelineError, UnidexError, ValidationFailedError
from .glp import glp_design
from .parser import grammar_check, parse
from .rosenblatt import inverse_rosenblatt
from .scene import (
    DEFAULT_CLASS_TABLE,
    ObjectClass,
    assemble_joint_domain,
    build_scene_graph,
    viable_orders,
)

MEMBERSHIP_TOL = 1e-7


@dataclass(frozen=True)
class EngineConfig:
    seed: int = 0
    order_cap: int = 720
    mc: MCConfig | None = None
    ccd_mode: str = "auto"
    class_table: dict[str, ObjectClass] | None = None

    def resolved_mc(self) -> MCConfig:
        return self.mc if self.mc is not None else MCConfig(seed=self.seed)


@dataclass
class OrderReport:
    perm: tuple[int, ...]
    ccd: float
    transform_ms: float
    ccd_ms: float


@dataclass
class Diagnostics:
    n: int
    d: int
    seed: int
    ccd_mode: str
    orders_evaluated: int
    order_reports: list[OrderReport] = field(default_factory=list)
    lattice: tuple[int, ...] | None = None
    glp_notes: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def per_order_ccds(self) -> list[float]:
        return [r.ccd for r in self.order_reports]


class _Clock:
    def __init__(self):
        self.t = time.perf_counter()

    def lap(self) -> float:
        now = time.perf_counter()
        ms = (now - self.t) * 1000.0
        self.t = now
        return ms


def _stage(name: str):
    """Re-raise package errors annotated with the stage they occurred in."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, UnidexError) and not isinstance(
                exc, PipelineError
            ):
                raise PipelineError(name, exc) from exc
            return False

    return _Ctx()


def synthesize_design(
    spec_source: str, n: int, config: EngineConfig | None = None
) -> tuple[Design, Diagnostics]:
    """Algorithm core: minimum-discrepancy design over the scene domain."""
    if n < 2:
        raise InvalidNError("N must be ≥ 2")
    cfg = config or EngineConfig()
    clock = _Clock()
    timings: dict[str, float] = {}

    with _stage("parse"):
        known = tuple(cfg.class_table) if cfg.class_table else tuple(DEFAULT_CLASS_TABLE)
        spec = parse(spec_source, classes=known)
        report = grammar_check(spec)
        if report.errors:
            raise ValidationFailedError(report)
    timings["parse"] = clock.lap()

    with _stage("geometry"):
        graph = build_scene_graph(spec, cfg.class_table)
        domain = assemble_joint_domain(graph)
        orders = viable_orders(graph, cfg.order_cap, cfg.seed)
    timings["geometry"] = clock.lap()

    with _stage("glp"):
        hd = glp_design(n, domain.d)
    timings["glp"] = clock.lap()

    with _stage("ccd"):
        scorer = CcdScorer(domain, cfg.resolved_mc(), cfg.ccd_mode)
    timings["ccd_setup"] = clock.lap()

    best: Design | None = None
    best_ccd = float("inf")
    reports: list[OrderReport] = []
    transform_total = 0.0
    score_total = 0.0
    for order in sorted(orders, key=lambda o: o.perm):
        with _stage("transform"):
            t0 = time.perf_counter()
            cand = inverse_rosenblatt(domain, graph, hd, order)
            t_ms = (time.perf_counter() - t0) * 1000.0
            inside = domain.polytope.contains_many(cand.points, MEMBERSHIP_TOL)
            if not inside.all():
                bad = [int(i) for i in (~inside).nonzero()[0]]
                raise NumericError(
                    f"order {order.perm}: transformed rows {bad} left the domain"
                )
        with _stage("ccd"):
            t0 = time.perf_counter()
            score = scorer.score(cand.points)
            s_ms = (time.perf_counter() - t0) * 1000.0
        transform_total += t_ms
        score_total += s_ms
        reports.append(OrderReport(order.perm, score, t_ms, s_ms))
        if score < best_ccd:
            best_ccd = score
            best = cand
    if best is None:
        raise PipelineError("transform", NumericError("no viable order produced a design"))
    best.ccd_score = best_ccd
    timings["transform"] = transform_total
    timings["ccd"] = timings.pop("ccd_setup") + score_total
    timings["total"] = sum(timings.values())

    diag = Diagnostics(
        n=n,
        d=domain.d,
        seed=cfg.seed,
        ccd_mode=scorer.mode,
        orders_evaluated=len(reports),
        order_reports=reports,
        lattice=hd.generator,
        glp_notes=list(hd.notes),
        timings_ms=timings,
        warnings=[i.message for i in report.warnings],
    )
    return best, diag
