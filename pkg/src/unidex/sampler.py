"""Uniform sampling of polytopes and scenes via hit-and-run chains.

The chain walks random chords: pick a direction uniformly on the sphere,
intersect the ray with every half-space to get the feasible segment, and
jump to a uniform point on it. Axes are affinely rescaled to comparable
magnitudes first, otherwise chords in strongly anisotropic domains (a
position axis of width 1 next to a mass axis of width 500) almost never
move the narrow axes.

RNG: numpy PCG64 via np.random.Generator, which has documented stable
streams across platforms and numpy versions.
"""

from __future__ import annotations

import numpy as np

from .design_io import Design
from .errors import EmptyPolytopeError
from .geometry import Polytope
from .scene import ConditioningOrder, SceneGraph

BURN_IN = 100
# at 10 the thinned chain keeps ~5% lag-1 autocorrelation on low-d
# reference bodies; at 20 the integrated autocorrelation time is 1.0
THINNING = 20

_DENOM_TOL = 1e-14


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


class _Rescaled:
    """Polytope mapped axis-wise to comparable scale: x = lo + span * y."""

    def __init__(self, p: Polytope):
        lo, hi = p.bounds()
        span = hi - lo
        span = np.where(span < 1e-12, 1.0, span)
        self.lo = lo
        self.span = span
        # A (lo + span*y) + b <= 0  ->  (A*span) y + (b + A lo) <= 0
        self.A = p.A * span[None, :]
        self.b = p.b + p.A @ lo
        norms = np.linalg.norm(self.A, axis=1)
        keep = norms > 1e-14
        self.A = self.A[keep] / norms[keep, None]
        self.b = self.b[keep] / norms[keep]

    def start(self) -> np.ndarray:
        inner = Polytope(self.A, self.b, validate=False)
        center, radius = inner.chebyshev_ball()
        if radius <= 0:
            raise EmptyPolytopeError("domain has no interior to start a chain")
        return center

    def to_x(self, y: np.ndarray) -> np.ndarray:
        return self.lo + self.span * y


def _chord(A, b, y, direction):
    """Feasible (t_min, t_max) for y + t * direction."""
    slack = -(A @ y + b)
    denom = A @ direction
    t_max = np.inf
    t_min = -np.inf
    pos = denom > _DENOM_TOL
    if np.any(pos):
        t_max = np.min(slack[pos] / denom[pos])
    neg = denom < -_DENOM_TOL
    if np.any(neg):
        t_min = np.max(slack[neg] / denom[neg])
    return t_min, t_max


def hit_and_run(
    p: Polytope,
    n: int,
    seed=0,
    burn_in: int = BURN_IN,
    thinning: int = THINNING,
) -> np.ndarray:
    """n approximately-uniform points from p (single seeded chain)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _as_rng(seed)
    sc = _Rescaled(p)
    k = p.dim
    y = sc.start()
    out = np.empty((n, k))
    produced = 0
    step = 0
    needed = burn_in + n * thinning
    while step < needed:
        direction = rng.standard_normal(k)
        nrm = np.linalg.norm(direction)
        if nrm < 1e-12:
            continue
        direction /= nrm
        t_min, t_max = _chord(sc.A, sc.b, y, direction)
        if np.isfinite(t_min) and np.isfinite(t_max) and t_max > t_min:
            y = y + (t_min + (t_max - t_min) * rng.random()) * direction
        step += 1
        if step > burn_in and (step - burn_in) % thinning == 0:
            out[produced] = y
            produced += 1
            if produced == n:
                break
    return sc.to_x(out)


def uniform_cloud(
    p: Polytope,
    n: int,
    rng,
    steps: int = BURN_IN,
    stratify_final: bool = False,
) -> np.ndarray:
    """n uniform points from p via n vectorized independent chains.

    Used for the large CCD center/pool sets where a single thinned chain
    would be needlessly slow. With stratify_final the chord fraction of
    the last step is stratified across chains: each point keeps the exact
    hit-and-run marginal law, but set-level averages have far lower
    variance (in one dimension every chord spans the whole domain, so the
    final states become a stratified sample of it).
    """
    if n < 1:
        return np.empty((0, p.dim))
    rng = _as_rng(rng)
    sc = _Rescaled(p)
    k = p.dim
    A, b = sc.A, sc.b
    Y = np.tile(sc.start(), (n, 1))
    for step in range(steps):
        dirs = rng.standard_normal((n, k))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        if stratify_final and step == steps - 1:
            # u and -u define the same chord, so forcing a canonical sign
            # is distribution-neutral; it aligns the chord directions so
            # stratified fractions cannot fold onto each other (exact
            # balance in one dimension)
            flip = dirs[:, 0] < 0
            dirs[flip] = -dirs[flip]
        slack = -(Y @ A.T + b)  # n x m, nonnegative
        denom = dirs @ A.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = slack / denom
        t_max = np.where(denom > _DENOM_TOL, ratio, np.inf).min(axis=1)
        t_min = np.where(denom < -_DENOM_TOL, ratio, -np.inf).max(axis=1)
        if stratify_final and step == steps - 1:
            frac = (rng.permutation(n) + rng.random(n)) / n
        else:
            frac = rng.random(n)
        t = t_min + (t_max - t_min) * frac
        ok = np.isfinite(t) & (t_max >= t_min)
        Y = np.where(ok[:, None], Y + t[:, None] * dirs, Y)
    return sc.to_x(Y)


def sample_scene(graph: SceneGraph, n: int, seed=0) -> Design:
    """Random-sampling baseline: each point realizes objects in
    declaration order, instantiating every region at its ancestors'
    already-drawn values and drawing uniformly from it."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _as_rng(seed)
    d = len(graph.free_dims)
    pts = np.empty((n, d))
    # objects in declaration order; nodes dict preserves insertion order
    with_regions = [name for name in graph.nodes if name in graph.regions]
    # constant regions (no parent dims) can be sampled as one vectorized cloud
    const_cloud: dict[str, np.ndarray] = {}
    for name in with_regions:
        reg = graph.regions[name]
        if not reg.parent_dims:
            const_cloud[name] = uniform_cloud(reg.instantiate([]), n, rng)
    for i in range(n):
        for name in with_regions:
            reg = graph.regions[name]
            if name in const_cloud:
                vals = const_cloud[name][i]
            else:
                inst = reg.instantiate(pts[i, list(reg.parent_dims)])
                vals = hit_and_run(inst, 1, rng, burn_in=BURN_IN, thinning=1)[0]
            pts[i, list(reg.own_dims)] = vals
    order = ConditioningOrder(tuple(range(d)))
    return Design(points=pts, dim_meta=graph.free_dims, order_used=order)
