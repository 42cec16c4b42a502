"""Convex polytope algebra in H-representation.

A region is the set { x : A.x + b <= 0 }. Everything downstream leans on
five operations: intersection with redundancy pruning, exact axis bounds,
slicing (coordinate substitution), exact volume, and membership tests.

Volume uses Lasserre's recursive facet decomposition: n*vol(P) equals the
sum over facets of (signed offset / row norm) * facet area, and each facet
area is computed by substituting the facet equality into the remaining
rows and recursing one dimension down. Parallel rows must be deduplicated
to the tightest at every level, otherwise coincident facets are counted
twice. Axis-aligned systems short-circuit to a product of interval
lengths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .errors import (
    EmptyIntersectionError,
    EmptyPolytopeError,
    EmptySliceError,
    UnboundedError,
)

FEAS_TOL = 1e-9
ZERO_ROW_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval lo {self.lo} > hi {self.hi}")

    def __iter__(self):
        yield self.lo
        yield self.hi

    @property
    def length(self) -> float:
        return self.hi - self.lo


def _clean_rows(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalize rows to unit norm and drop numerically zero rows.

    A zero row with b > 0 encodes 0 <= -b < 0: infeasible by itself.
    """
    if A.shape[1] == 0:
        if np.any(b > FEAS_TOL):
            raise EmptyPolytopeError("constant constraint violated")
        return A[:0], b[:0]
    norms = np.linalg.norm(A, axis=1)
    dead = norms < ZERO_ROW_TOL
    if np.any(dead):
        if np.any(b[dead] > FEAS_TOL):
            raise EmptyPolytopeError("degenerate row with positive offset")
        A, b, norms = A[~dead], b[~dead], norms[~dead]
    return A / norms[:, None], b / norms


class Polytope:
    """Immutable bounded convex polytope { x : A.x + b <= 0 }.

    Construction with validate=True (the default) checks feasibility and
    per-axis boundedness. Pass validate=False to carry a transiently
    unbounded system — e.g. a half-space destined for intersect(), whose
    result is validated in full.
    """

    def __init__(self, A, b, validate: bool = True):
        A = np.array(A, dtype=float, ndmin=2)
        b = np.atleast_1d(np.asarray(b, dtype=float)).ravel()
        if A.shape[0] != b.shape[0]:
            raise ValueError("A and b row counts differ")
        A, b = _clean_rows(A, b)
        A.setflags(write=False)
        b.setflags(write=False)
        self.A = A
        self.b = b
        self._bounds: tuple[np.ndarray, np.ndarray] | None = None
        if validate:
            self.bounds()  # raises EmptyPolytope / Unbounded

    @classmethod
    def from_bounds(cls, lo, hi) -> "Polytope":
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        k = lo.size
        eye = np.eye(k)
        A = np.vstack([eye, -eye])
        b = np.concatenate([-hi, lo])
        return cls(A, b)

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def _is_axis_aligned(self) -> bool:
        if self.n_rows == 0:
            return self.dim == 0
        return bool(np.all((np.abs(self.A) > ZERO_ROW_TOL).sum(axis=1) == 1))

    def _raw_box_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Interval hull of a 1-sparse row system; entries may be infinite."""
        k = self.dim
        lo = np.full(k, -np.inf)
        hi = np.full(k, np.inf)
        axes = np.argmax(np.abs(self.A), axis=1)
        for r, j in enumerate(axes):
            a = self.A[r, j]
            v = -self.b[r] / a
            if a > 0:
                hi[j] = min(hi[j], v)
            else:
                lo[j] = max(lo[j], v)
        return lo, hi

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Exact per-axis (lo, hi) arrays, cached."""
        if self._bounds is not None:
            return self._bounds
        k = self.dim
        if k == 0:
            self._bounds = (np.zeros(0), np.zeros(0))
            return self._bounds
        if self._is_axis_aligned():
            lo, hi = self._raw_box_bounds()
            if np.any(lo > hi + FEAS_TOL):
                raise EmptyPolytopeError("inconsistent interval bounds")
            if np.any(np.isinf(lo)) or np.any(np.isinf(hi)):
                raise UnboundedError("axis without finite bounds")
            hi = np.maximum(hi, lo)  # clamp fp noise on degenerate axes
        else:
            lo = np.empty(k)
            hi = np.empty(k)
            for j in range(k):
                c = np.zeros(k)
                c[j] = 1.0
                res = lp.solve_lp(c, self.A, -self.b)
                if res.status == lp.INFEASIBLE:
                    raise EmptyPolytopeError("no feasible point")
                if res.status == lp.UNBOUNDED:
                    raise UnboundedError(f"axis {j} unbounded above")
                hi[j] = res.value
                res = lp.solve_lp(-c, self.A, -self.b)
                if res.status == lp.UNBOUNDED:
                    raise UnboundedError(f"axis {j} unbounded below")
                lo[j] = -res.value
        lo.setflags(write=False)
        hi.setflags(write=False)
        self._bounds = (lo, hi)
        return self._bounds

    def axis_bounds(self, axis: int) -> Interval:
        if not 0 <= axis < self.dim:
            raise IndexError(f"axis {axis} out of range for dim {self.dim}")
        lo, hi = self.bounds()
        return Interval(float(lo[axis]), float(hi[axis]))

    def contains(self, x, tol: float = FEAS_TOL) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.dim,):
            raise ValueError(f"point has dim {x.shape}, polytope dim {self.dim}")
        if self.n_rows == 0:
            return True
        return bool(np.all(self.A @ x + self.b <= tol))

    def contains_many(self, pts: np.ndarray, tol: float = FEAS_TOL) -> np.ndarray:
        """Vectorized membership for an n x k point array."""
        pts = np.asarray(pts, dtype=float)
        if self.n_rows == 0:
            return np.ones(pts.shape[0], dtype=bool)
        return np.all(pts @ self.A.T + self.b <= tol, axis=1)

    def intersect(self, other: "Polytope") -> "Polytope":
        if self.dim != other.dim:
            raise ValueError("ambient dimensions differ")
        A = np.vstack([self.A, other.A])
        b = np.concatenate([self.b, other.b])
        try:
            raw = Polytope(A, b)
        except EmptyPolytopeError as e:
            raise EmptyIntersectionError(str(e)) from e
        A, b = _prune_redundant(raw.A, raw.b)
        out = Polytope(A, b, validate=False)
        out._bounds = raw._bounds  # pruning preserves the feasible set
        return out

    def slice(self, axis: int, value: float, tol: float = 1e-7) -> "Polytope":
        """Substitute x_axis = value; returns the (k-1)-dim cross-section.

        Degenerate boundary slices are allowed and carry volume 0.
        """
        iv = self.axis_bounds(axis)
        if not iv.lo - tol <= value <= iv.hi + tol:
            raise EmptySliceError(
                f"value {value} outside axis {axis} bounds [{iv.lo}, {iv.hi}]"
            )
        A = np.delete(self.A, axis, axis=1)
        b = self.b + self.A[:, axis] * value
        try:
            return Polytope(A, b, validate=False)
        except EmptyPolytopeError as e:
            raise EmptySliceError(str(e)) from e

    def chebyshev_ball(self) -> tuple[np.ndarray, float]:
        """Center and radius of the largest inscribed ball."""
        k = self.dim
        if k == 0:
            return np.zeros(0), 0.0
        # variables (x, r): maximize r s.t. A.x + r <= -b, r >= 0
        G = np.hstack([self.A, np.ones((self.n_rows, 1))])
        G = np.vstack([G, np.zeros(k + 1)])
        G[-1, -1] = -1.0
        h = np.concatenate([-self.b, [0.0]])
        c = np.zeros(k + 1)
        c[-1] = 1.0
        res = lp.solve_lp(c, G, h)
        if res.status == lp.INFEASIBLE:
            raise EmptyPolytopeError("no feasible point")
        if res.status == lp.UNBOUNDED:
            raise UnboundedError("inscribed ball radius unbounded")
        return res.x[:k], float(res.value)

    def chebyshev_center(self) -> np.ndarray:
        return self.chebyshev_ball()[0]

    def volume(self) -> float:
        """Exact Lebesgue volume; 0 for degenerate bodies."""
        if self.dim == 0:
            return 1.0
        A, b = _prune_redundant(self.A, self.b)
        return max(0.0, _volume_raw(A, b))  # 0.0-first max scrubs -0.0

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, rows={self.n_rows})"


def _prune_redundant(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop rows implied by the rest (per-row LP maximization)."""
    keep = list(range(A.shape[0]))
    i = 0
    while i < len(keep):
        r = keep[i]
        rest = [q for q in keep if q != r]
        if not rest:
            i += 1
            continue
        res = lp.solve_lp(A[r], A[rest], -b[rest])
        # row r is redundant iff max a_r.x over the others never exceeds -b_r
        if res.status == lp.OPTIMAL and res.value <= -b[r] + FEAS_TOL:
            keep.pop(i)
        else:
            i += 1
    return A[keep], b[keep]


def _dedupe_parallel(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Among rows sharing a direction keep only the tightest offset.

    Required for volume correctness: coincident facets double-count.
    """
    if A.shape[0] < 2:
        return A, b
    keys: dict[tuple, int] = {}
    keep: list[int] = []
    for r in range(A.shape[0]):
        key = tuple(np.round(A[r] / np.linalg.norm(A[r]), 9))
        if key in keys:
            prev = keys[key]
            if b[r] > b[keep[prev]]:  # larger b means smaller -b: tighter
                keep[prev] = r
        else:
            keys[key] = len(keep)
            keep.append(r)
    return A[keep], b[keep]


def _volume_raw(A: np.ndarray, b: np.ndarray) -> float:
    """Lasserre recursion on cleaned rows. Returns 0 for empty/degenerate."""
    k = A.shape[1]
    if k == 0:
        return 1.0 if np.all(b <= FEAS_TOL) else 0.0
    if k == 1:
        return _interval_length(A, b)
    if A.shape[0] <= k:  # too few facets to bound k dims
        return 0.0
    nz = np.abs(A) > ZERO_ROW_TOL
    if np.all(nz.sum(axis=1) == 1):
        return _box_volume(A, b)
    A, b = _dedupe_parallel(A, b)
    m = A.shape[0]
    total = 0.0
    for i in range(m):
        beta = -b[i]
        j = int(np.argmax(np.abs(A[i])))
        aij = A[i, j]
        if abs(aij) < ZERO_ROW_TOL:
            continue
        # substitute x_j = (beta - sum_{l != j} a_il x_l) / a_ij into the rest
        others = np.arange(m) != i
        Ao = A[others]
        bo = b[others]
        col = Ao[:, j]
        sub_A = np.delete(Ao, j, axis=1) - np.outer(col / aij, np.delete(A[i], j))
        sub_b = bo + col * (beta / aij)
        norms = np.linalg.norm(sub_A, axis=1)
        dead = norms < ZERO_ROW_TOL
        if np.any(sub_b[dead] > FEAS_TOL):
            continue  # facet misses the body entirely
        live = ~dead
        sub_A = sub_A[live] / norms[live, None]
        sub_b = sub_b[live] / norms[live]
        face = _volume_raw(sub_A, sub_b)
        if face != 0.0:
            total += (beta / abs(aij)) * face
    return max(0.0, total / k)


def _interval_length(A: np.ndarray, b: np.ndarray) -> float:
    a = A[:, 0]
    lo, hi = -np.inf, np.inf
    pos = a > 0
    if np.any(pos):
        hi = np.min(-b[pos] / a[pos])
    neg = a < 0
    if np.any(neg):
        lo = np.max(-b[neg] / a[neg])
    if np.isinf(lo) or np.isinf(hi):
        raise UnboundedError("1-d system lacks a bound")
    return max(0.0, hi - lo)


def _box_volume(A: np.ndarray, b: np.ndarray) -> float:
    k = A.shape[1]
    lo = np.full(k, -np.inf)
    hi = np.full(k, np.inf)
    axes = np.argmax(np.abs(A), axis=1)
    vals = -b / A[np.arange(A.shape[0]), axes]
    for r, j in enumerate(axes):
        if A[r, j] > 0:
            hi[j] = min(hi[j], vals[r])
        else:
            lo[j] = max(lo[j], vals[r])
    if np.any(np.isinf(lo)) or np.any(np.isinf(hi)):
        raise UnboundedError("axis-aligned system lacks a bound")
    return float(np.prod(np.maximum(hi - lo, 0.0)))


# functional aliases mirroring the method surface
def intersect(p: Polytope, q: Polytope) -> Polytope:
    return p.intersect(q)


def axis_bounds(p: Polytope, axis: int) -> Interval:
    return p.axis_bounds(axis)


def slice_polytope(p: Polytope, axis: int, value: float) -> Polytope:
    return p.slice(axis, value)


def volume(p: Polytope) -> float:
    return p.volume()


def contains(p: Polytope, x, tol: float = FEAS_TOL) -> bool:
    return p.contains(x, tol)


def chebyshev_center(p: Polytope) -> np.ndarray:
    return p.chebyshev_center()
