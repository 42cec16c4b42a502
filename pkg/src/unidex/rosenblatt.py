"""Conditional CDFs over polytopes and the chained transform built on them.

The CDF of one axis of a polytope is the normalized integral of
cross-section volumes:

    F(t) = (1/V) * integral_{lo}^{t} vol(slice(p, axis, s)) ds

The normalizer is the same quadrature run to the upper bound, which makes
F(hi) exactly 1 and keeps F monotone regardless of quadrature error.
Slice volumes are memoized per CDF because the inverse solve re-evaluates
overlapping prefixes many times.

The inverse transform walks the axes of a conditioning order: each axis's
CDF lives on the polytope sliced at all previously fixed axes, and u
column j always feeds axis j (not order position j), so on independent
axes the result does not depend on the order.
"""

from __future__ import annotations

import numpy as np

from .errors import UnidexError, ZeroVolumeError
from .geometry import Polytope
from .glp import HypercubeDesign
from .design_io import Design
from .numeric import adaptive_simpson, brent_solve
from .scene import ConditioningOrder, JointDomain, SceneGraph

SIMPSON_TOL = 1e-10
U_RESIDUAL_TOL = 1e-11


class ConditionalCdf:
    """Marginal CDF of one axis of a polytope (all other axes integrated
    out), built lazily from slice volumes."""

    def __init__(self, restricted: Polytope, axis: int):
        self.polytope = restricted
        self.axis = axis
        iv = restricted.axis_bounds(axis)
        self.lo = iv.lo
        self.hi = iv.hi
        self._vols: dict[float, float] = {}
        self._total: float | None = None

    def _slice_volume(self, s: float) -> float:
        v = self._vols.get(s)
        if v is None:
            if self.polytope.dim == 1:
                v = 1.0  # 0-dim slices inside the bounds are single points
            else:
                v = self.polytope.slice(self.axis, s).volume()
            self._vols[s] = v
        return v

    @property
    def total(self) -> float:
        if self._total is None:
            t = adaptive_simpson(self._slice_volume, self.lo, self.hi, SIMPSON_TOL)
            if t <= 1e-300:
                raise ZeroVolumeError(
                    f"axis {self.axis}: region has zero volume over [{self.lo}, {self.hi}]"
                )
            self._total = t
        return self._total

    def cdf(self, t: float) -> float:
        t = min(max(float(t), self.lo), self.hi)
        if t == self.lo:
            return 0.0
        if t == self.hi:
            return 1.0
        val = adaptive_simpson(self._slice_volume, self.lo, t, SIMPSON_TOL) / self.total
        return min(max(val, 0.0), 1.0)

    def invert(self, u: float) -> float:
        u = float(u)
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"u={u} outside [0, 1]")
        if u == 0.0:
            return self.lo
        if u == 1.0:
            return self.hi
        return brent_solve(lambda t: self.cdf(t) - u, self.lo, self.hi, U_RESIDUAL_TOL)


def marginal_cdf(region: Polytope, axis: int, t: float) -> float:
    """F_axis(t) of the region's uniform distribution."""
    return ConditionalCdf(region, axis).cdf(t)


def invert_cdf(cdf: ConditionalCdf, u: float) -> float:
    return cdf.invert(u)


def _annotate(e: UnidexError, point: int, axis: int) -> UnidexError:
    try:
        return type(e)(f"point {point}, axis {axis}: {e}")
    except TypeError:
        return e


def inverse_rosenblatt(
    domain: JointDomain,
    graph: SceneGraph,
    hd: HypercubeDesign,
    order: ConditioningOrder,
) -> Design:
    """Map hypercube points into the domain along a conditioning order."""
    d = domain.d
    if hd.d != d:
        raise ValueError(f"hypercube design has {hd.d} columns, domain has {d}")
    order = ConditioningOrder.checked(order.perm, graph)
    u = hd.points
    n = u.shape[0]
    out = np.empty((n, d))
    first_cdf = ConditionalCdf(domain.polytope, order.perm[0])
    for i in range(n):
        poly = domain.polytope
        remaining = list(range(d))
        for pos, g in enumerate(order.perm):
            local = remaining.index(g)
            try:
                cdf = first_cdf if pos == 0 else ConditionalCdf(poly, local)
                t = cdf.invert(u[i, g])
                out[i, g] = t
                if pos < d - 1:
                    poly = poly.slice(local, t)
                    remaining.pop(local)
            except UnidexError as e:
                raise _annotate(e, i, g) from e
    return Design(points=out, dim_meta=domain.dim_meta, order_used=order)


def forward_rosenblatt(
    domain: JointDomain,
    graph: SceneGraph,
    design: Design,
    order: ConditioningOrder,
) -> HypercubeDesign:
    """Exact inverse of inverse_rosenblatt on its image."""
    d = domain.d
    x = np.asarray(design.points, dtype=float)
    if x.shape[1] != d:
        raise ValueError(f"design has {x.shape[1]} columns, domain has {d}")
    order = ConditioningOrder.checked(order.perm, graph)
    n = x.shape[0]
    out = np.empty((n, d))
    first_cdf = ConditionalCdf(domain.polytope, order.perm[0])
    for i in range(n):
        poly = domain.polytope
        remaining = list(range(d))
        for pos, g in enumerate(order.perm):
            local = remaining.index(g)
            try:
                cdf = first_cdf if pos == 0 else ConditionalCdf(poly, local)
                out[i, g] = cdf.cdf(x[i, g])
                if pos < d - 1:
                    poly = poly.slice(local, x[i, g])
                    remaining.pop(local)
            except UnidexError as e:
                raise _annotate(e, i, g) from e
    return HypercubeDesign(out, requested_n=n, lattice_n=n)
