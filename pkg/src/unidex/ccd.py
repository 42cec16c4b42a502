"""Central composite discrepancy scoring.

The discrepancy integrates, over every center z in the domain, the squared
gap between each of the 2^d orthant point-proportions and that orthant's
volume fraction. Axis-aligned box domains admit a closed form (derived by
integrating the orthant indicator products axis by axis):

    CCD^2 = 2^-d * [ (1/N^2) sum_{i,i'} prod_j (1 - |u_ij - u_i'j|)
                     - (2/N)  sum_i    prod_j (1/2 + u_ij - u_ij^2)
                     + (2/3)^d ]

on coordinates u rescaled per axis to [0,1]. General polytopes use the
Monte-Carlo estimator: M hit-and-run centers, orthant volume fractions
estimated from a shared pool of P uniform domain points. Both paths share
the scorer so a design synthesized and re-scored with the same seed
reports the identical number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import Polytope
from .sampler import uniform_cloud
from .scene import JointDomain

ZERO_ROW_TOL = 1e-12


@dataclass(frozen=True)
class MCConfig:
    centers: int = 4096
    pool: int = 20000
    seed: int = 0


def is_box(p: Polytope) -> bool:
    """True when every row constrains exactly one axis."""
    if p.n_rows == 0:
        return p.dim == 0
    return bool(np.all((np.abs(p.A) > ZERO_ROW_TOL).sum(axis=1) == 1))


def _exact_box_ccd(u: np.ndarray) -> float:
    n, d = u.shape
    cross = np.prod(1.0 - np.abs(u[:, None, :] - u[None, :, :]), axis=2).sum()
    single = np.prod(0.5 + u - u * u, axis=1).sum()
    sq = (cross / (n * n) - 2.0 * single / n + (2.0 / 3.0) ** d) * 0.5 ** d
    return math.sqrt(max(sq, 0.0))


class CcdScorer:
    """Reusable scorer: the expensive center/pool preparation happens once,
    then each design costs one orthant-count pass."""

    def __init__(
        self,
        domain: JointDomain | Polytope,
        mc: MCConfig | None = None,
        mode: str = "auto",
    ):
        poly = domain.polytope if isinstance(domain, JointDomain) else domain
        self.polytope = poly
        self.mc = mc or MCConfig()
        if mode not in ("auto", "exact", "mc"):
            raise ValueError(f"unknown ccd mode {mode!r}")
        if mode == "auto":
            mode = "exact" if is_box(poly) else "mc"
        if mode == "exact" and not is_box(poly):
            raise ValueError("exact mode requires an axis-aligned box domain")
        self.mode = mode
        lo, hi = poly.bounds()
        self._lo = lo
        self._span = np.where(hi - lo < 1e-12, 1.0, hi - lo)
        if self.mode == "mc":
            ss = np.random.SeedSequence(self.mc.seed)
            child_centers, child_pool = ss.spawn(2)
            rng_c = np.random.Generator(np.random.PCG64(child_centers))
            rng_p = np.random.Generator(np.random.PCG64(child_pool))
            self.centers = uniform_cloud(poly, self.mc.centers, rng_c, stratify_final=True)
            self.pool = uniform_cloud(poly, self.mc.pool, rng_p, stratify_final=True)
            counts = _kernels.orthant_counts(self.pool, self.centers)
            self._pool_frac = counts.astype(float) / self.mc.pool

    def score(self, points: np.ndarray) -> float:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.polytope.dim:
            raise ValueError("design shape does not match domain dimension")
        if self.mode == "exact":
            u = (pts - self._lo) / self._span
            return _exact_box_ccd(u)
        n, d = pts.shape
        counts = _kernels.orthant_counts(pts, self.centers)
        dev = counts.astype(float) / n - self._pool_frac
        mean_sq = float((dev * dev).sum(axis=1).mean())
        return math.sqrt(mean_sq * 0.5 ** d)


def ccd(
    domain: JointDomain | Polytope,
    points: np.ndarray,
    mc: MCConfig | None = None,
    mode: str = "auto",
) -> float:
    """One-shot CCD of a design over a domain."""
    return CcdScorer(domain, mc, mode).score(points)
