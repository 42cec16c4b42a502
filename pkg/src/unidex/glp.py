"""Good-lattice-point designs on the unit hypercube.

A rank-1 Korobov lattice places point i at ((i * h_k mod N) + 0.5) / N
with generator vector h = (1, a, a^2 mod N, ...). The multiplier a is
chosen by exhaustive search over residues coprime to N, minimizing the
centered-L2 discrepancy of the full lattice. When no multiplier yields d
distinct generator components (N too smooth or too small), the next
larger usable N is built instead and trailing rows are dropped, which is
recorded in the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidNError


def centered_l2_discrepancy(points: np.ndarray) -> float:
    """Centered-L2 discrepancy of an N x d point set in [0,1]^d."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n, d = x.shape
    dx = np.abs(x - 0.5)
    one_point = np.prod(1.0 + 0.5 * dx - 0.5 * dx * dx, axis=1)
    cross = np.prod(
        1.0
        + 0.5 * dx[:, None, :]
        + 0.5 * dx[None, :, :]
        - 0.5 * np.abs(x[:, None, :] - x[None, :, :]),
        axis=2,
    )
    sq = (13.0 / 12.0) ** d - (2.0 / n) * one_point.sum() + cross.sum() / (n * n)
    return math.sqrt(max(sq, 0.0))


@dataclass
class HypercubeDesign:
    """N x d low-discrepancy points in [0,1)^d with pairwise distinct rows."""

    points: np.ndarray
    generator: tuple[int, ...] | None = None  # Korobov vector (1, a, a^2, ...)
    requested_n: int = 0
    lattice_n: int = 0
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("points must lie in [0, 1)")
        if np.unique(pts, axis=0).shape[0] != pts.shape[0]:
            raise ValueError("rows must be pairwise distinct")
        pts.setflags(write=False)
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


def _korobov_vector(a: int, n: int, d: int) -> list[int] | None:
    """Generator components (1, a, a^2, ...) mod n; None when not d distinct."""
    h = [1]
    for _ in range(d - 1):
        h.append(h[-1] * a % n)
    if len(set(h)) != d:
        return None
    return h


def _lattice(h: list[int], n: int) -> np.ndarray:
    i = np.arange(n)[:, None]
    return ((i * np.asarray(h)[None, :]) % n + 0.5) / n


def glp_design(n: int, d: int) -> HypercubeDesign:
    """Best Korobov lattice design with n rows in d dimensions."""
    if n < 2:
        raise InvalidNError("N must be ≥ 2")
    if d < 1:
        raise ValueError("d must be ≥ 1")
    notes: list[str] = []
    if d == 1:
        pts = _lattice([1], n)
        return HypercubeDesign(pts, (1,), n, n, notes)
    m = n
    while True:
        candidates = [
            a for a in range(2, m) if math.gcd(a, m) == 1 and _korobov_vector(a, m, d)
        ]
        if candidates:
            break
        m += 1
    if m != n:
        notes.append(f"no usable multiplier for N={n}; built N={m} lattice "
                     f"and kept the first {n} rows")
    # mirror multipliers (a and a^-1 mod N) tie exactly in the reals but
    # differ by ulps in floating point; pick the smallest a within a margin
    # of the minimum so the winner is stable across summation orders
    scores = {
        a: centered_l2_discrepancy(_lattice(_korobov_vector(a, m, d), m))
        for a in candidates
    }
    best = min(scores.values())
    best_a = min(a for a, s in scores.items() if s <= best + 1e-12)
    h = _korobov_vector(best_a, m, d)
    pts = _lattice(h, m)[:n]
    return HypercubeDesign(pts, tuple(h), n, m, notes)
