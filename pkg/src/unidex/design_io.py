"""Design container and CSV/JSON serialization.

Floats serialize with 17 significant digits so a written design re-reads
to bit-identical values and re-scoring reproduces the reported CCD
exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .scene import ConditioningOrder, DimMeta


@dataclass
class Design:
    """N x d sample matrix with column metadata and provenance."""

    points: np.ndarray
    dim_meta: tuple[DimMeta, ...]
    order_used: ConditioningOrder | None = None
    ccd_score: float | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array")
        n, d = pts.shape
        if n < 1 or d < 1:
            raise ValueError("design needs at least one row and one column")
        if d != len(self.dim_meta):
            raise ValueError("dim_meta length does not match column count")
        if not np.all(np.isfinite(pts)):
            raise ValueError("design contains NaN or Inf")
        pts.setflags(write=False)
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(m.column_name for m in self.dim_meta)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def design_to_csv(design: Design) -> str:
    lines = [",".join(design.column_names)]
    for row in design.points:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(design: Design, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(design_to_csv(design))


def design_to_json(
    design: Design,
    seed: int | None = None,
    timings_ms: dict[str, float] | None = None,
) -> str:
    payload: dict[str, Any] = {
        "columns": list(design.column_names),
        "points": [[float(_fmt(v)) for v in row] for row in design.points],
        "ccd": design.ccd_score,
        "order": list(design.order_used.perm) if design.order_used else None,
        "seed": seed,
        "timings_ms": timings_ms or {},
    }
    return json.dumps(payload, indent=2) + "\n"


def write_json(
    design: Design,
    path: str,
    seed: int | None = None,
    timings_ms: dict[str, float] | None = None,
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(design_to_json(design, seed, timings_ms))


def read_design(path: str) -> tuple[list[str], np.ndarray]:
    """Read a design file (CSV or JSON by extension) back as
    (column names, N x d float array)."""
    if path.endswith(".json"):
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        cols = [str(c) for c in payload["columns"]]
        pts = np.asarray(payload["points"], dtype=float)
        return cols, pts
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty design file")
    cols = lines[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return cols, np.asarray(rows, dtype=float)
