"""Geometric semantics for parsed scenes.

Every object property (center coordinates, derived edges, scalar
properties) is tracked as an affine form over the global free dimensions,
so a specifier like `completely on tr_1` with a movable tray emits rows
that couple the child's axes to the tray's axes. Conventions: x right,
y forward, z up; "back" is max y; positions are base-center coordinates.

Free dimensions are created only by `completely on` (x and y) and
`with <prop> (lo, hi)` (one scalar). Axes without a placement specifier
default to the origin. Per-axis feasibility is proven at build time: the
worst-case gap between each upper/lower bound pair is minimized over the
ancestors' attainable set with an LP, so an empty or flat axis is
reported before any sampling happens.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .errors import (
    EmptyRegionError,
    GeometryError,
    LowerDimensionalError,
    NoFreeDimensionsError,
    UnboundedRegionError,
)
from .geometry import Polytope
from .parser import (
    AheadOf,
    Behind,
    CompletelyOn,
    LeftOf,
    OnPoint,
    OnRegionExpr,
    RightOf,
    SceneSpec,
    WithRange,
)

GAP_TOL = 1e-9


# --- object classes ----------------------------------------------------------

@dataclass(frozen=True)
class ObjectClass:
    name: str
    extent: tuple[float, float, float]  # width (x), depth (y), height (z)

    def __post_init__(self):
        if len(self.extent) != 3 or any(e <= 0 for e in self.extent):
            raise ValueError(f"extent of {self.name} must be 3 positive reals")


DEFAULT_CLASS_TABLE: dict[str, ObjectClass] = {
    "Table": ObjectClass("Table", (1.0, 1.0, 0.7)),
    "Robot": ObjectClass("Robot", (0.2, 0.2, 0.6)),
    "Tray": ObjectClass("Tray", (0.3, 0.2, 0.05)),
    "Cube": ObjectClass("Cube", (0.05, 0.05, 0.05)),
}

CLASS_TABLE_ENV = "UNIDEX_CLASS_TABLE"


def load_class_table(path: str | None = None) -> dict[str, ObjectClass]:
    """Defaults merged with an optional JSON override file.

    Format: { "Table": {"extent": [1.0, 1.0, 0.7]}, ... }. When `path` is
    None the UNIDEX_CLASS_TABLE environment variable is consulted.
    """
    table = dict(DEFAULT_CLASS_TABLE)
    if path is None:
        path = os.environ.get(CLASS_TABLE_ENV) or None
    if path is None:
        return table
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    for name, entry in raw.items():
        table[name] = ObjectClass(name, tuple(float(v) for v in entry["extent"]))
    return table


# --- affine forms over global free dims --------------------------------------

class _Aff:
    """const + sum(coeffs[i] * dim_i); the working currency of this module."""

    __slots__ = ("const", "coeffs")

    def __init__(self, const: float = 0.0, coeffs: dict[int, float] | None = None):
        self.const = float(const)
        self.coeffs = {i: c for i, c in (coeffs or {}).items() if abs(c) > 1e-15}

    @classmethod
    def of_dim(cls, i: int) -> "_Aff":
        return cls(0.0, {i: 1.0})

    def _merge(self, other: "_Aff", sign: float) -> "_Aff":
        coeffs = dict(self.coeffs)
        for i, c in other.coeffs.items():
            coeffs[i] = coeffs.get(i, 0.0) + sign * c
        return _Aff(self.const + sign * other.const, coeffs)

    def __add__(self, other):
        if isinstance(other, _Aff):
            return self._merge(other, 1.0)
        return _Aff(self.const + other, self.coeffs)

    def __sub__(self, other):
        if isinstance(other, _Aff):
            return self._merge(other, -1.0)
        return _Aff(self.const - other, self.coeffs)

    def __neg__(self):
        return _Aff(-self.const, {i: -c for i, c in self.coeffs.items()})

    @property
    def is_const(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        return f"_Aff({self.const}, {self.coeffs})"


# --- graph types --------------------------------------------------------------

@dataclass(frozen=True)
class DimMeta:
    obj: str
    prop: str
    axis: str  # "x" / "y" for positions, "val" for scalars

    @property
    def column_name(self) -> str:
        return f"{self.obj}.{self.prop}.{self.axis}"


@dataclass
class SceneNode:
    name: str
    class_name: str
    extent: tuple[float, float, float]
    cx: _Aff
    cy: _Aff
    base_z: _Aff
    props: dict[str, _Aff] = field(default_factory=dict)
    own_dims: list[int] = field(default_factory=list)
    refs: tuple[str, ...] = ()

    @property
    def width(self) -> float:
        return self.extent[0]

    @property
    def depth(self) -> float:
        return self.extent[1]

    @property
    def height(self) -> float:
        return self.extent[2]

    @property
    def xmin(self) -> _Aff:
        return self.cx - self.width / 2

    @property
    def xmax(self) -> _Aff:
        return self.cx + self.width / 2

    @property
    def ymin(self) -> _Aff:
        return self.cy - self.depth / 2

    @property
    def ymax(self) -> _Aff:
        return self.cy + self.depth / 2

    @property
    def top_z(self) -> _Aff:
        return self.base_z + self.height

    @property
    def cz(self) -> _Aff:
        return self.base_z + self.height / 2


@dataclass
class ParametricRegion:
    """Rows A.x + B.v + c <= 0 over an object's own axes x and the parent
    free dims v it depends on."""

    own_dims: tuple[int, ...]
    parent_dims: tuple[int, ...]
    A: np.ndarray
    B: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if self.A.shape[0] and np.any(np.all(np.abs(self.A) < 1e-15, axis=1)):
            raise GeometryError("region row with all-zero own-axis coefficients")

    def instantiate(self, v) -> Polytope:
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if v.shape != (len(self.parent_dims),):
            raise ValueError(
                f"expected {len(self.parent_dims)} parent values, got {v.shape}"
            )
        offset = self.B @ v + self.c if len(self.parent_dims) else self.c
        return Polytope(self.A, offset)


@dataclass
class SceneGraph:
    nodes: dict[str, SceneNode]
    edges: tuple[tuple[str, str], ...]  # (parent, child)
    free_dims: tuple[DimMeta, ...]
    regions: dict[str, ParametricRegion]
    rows: tuple[tuple[dict[int, float], float], ...]  # global H-rep rows

    @property
    def d(self) -> int:
        return len(self.free_dims)

    def dim_owner(self, i: int) -> str:
        return self.free_dims[i].obj

    def ancestors(self, name: str) -> set[str]:
        parents: dict[str, set[str]] = {}
        for p, ch in self.edges:
            parents.setdefault(ch, set()).add(p)
        out: set[str] = set()
        stack = list(parents.get(name, ()))
        while stack:
            a = stack.pop()
            if a not in out:
                out.add(a)
                stack.extend(parents.get(a, ()))
        return out

    def dim_precedence(self) -> list[frozenset[int]]:
        """preds[j] = set of dims required to appear before dim j."""
        owner_dims: dict[str, list[int]] = {}
        for i, meta in enumerate(self.free_dims):
            owner_dims.setdefault(meta.obj, []).append(i)
        preds: list[set[int]] = [set() for _ in range(self.d)]
        for j, meta in enumerate(self.free_dims):
            for anc in self.ancestors(meta.obj):
                preds[j].update(owner_dims.get(anc, ()))
        return [frozenset(s) for s in preds]


@dataclass
class JointDomain:
    polytope: Polytope
    dim_meta: tuple[DimMeta, ...]

    @property
    def d(self) -> int:
        return len(self.dim_meta)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(m.column_name for m in self.dim_meta)


# --- build -------------------------------------------------------------------

def build_scene_graph(
    spec: SceneSpec, class_table: dict[str, ObjectClass] | None = None
) -> SceneGraph:
    table = class_table if class_table is not None else DEFAULT_CLASS_TABLE
    nodes: dict[str, SceneNode] = {}
    edges: list[tuple[str, str]] = []
    free_dims: list[DimMeta] = []
    rows: list[tuple[dict[int, float], float]] = []
    regions: dict[str, ParametricRegion] = {}

    for decl in spec.statements:
        cls = table[decl.class_name]
        node = SceneNode(
            name=decl.name,
            class_name=decl.class_name,
            extent=cls.extent,
            cx=_Aff(0.0),
            cy=_Aff(0.0),
            base_z=_Aff(0.0),
            refs=decl.references(),
        )
        own_rows: list[tuple[dict[int, float], float]] = []
        prior_dim_count = len(free_dims)
        prior_rows = list(rows)

        def new_dim(prop: str, axis: str) -> int:
            free_dims.append(DimMeta(decl.name, prop, axis))
            idx = len(free_dims) - 1
            node.own_dims.append(idx)
            return idx

        def add_row(expr: _Aff) -> None:
            # expr <= 0; constant rows are resolved now
            if expr.is_const:
                if expr.const > GAP_TOL:
                    raise EmptyRegionError(
                        f"object '{decl.name}': constraint {expr.const:.6g} <= 0 "
                        "is violated by the deterministic placement"
                    )
                return
            if not any(i in node.own_dims for i in expr.coeffs):
                raise GeometryError(
                    f"object '{decl.name}': constraint involves only other "
                    "objects' free dimensions, which is not supported"
                )
            own_rows.append((dict(expr.coeffs), expr.const))

        for s in decl.specifiers:
            if isinstance(s, OnPoint):
                node.cx = _Aff(s.point.x)
                node.cy = _Aff(s.point.y)
                node.base_z = _Aff(s.point.z)
            elif isinstance(s, OnRegionExpr):
                t = nodes[s.target]
                node.cx = t.cx
                node.cy = t.ymax - node.depth / 2
                node.base_z = t.top_z
            elif isinstance(s, CompletelyOn):
                t = nodes[s.target]
                ix = new_dim("pos", "x")
                iy = new_dim("pos", "y")
                node.cx = _Aff.of_dim(ix)
                node.cy = _Aff.of_dim(iy)
                node.base_z = t.top_z
                half_w = (t.width - node.width) / 2
                half_d = (t.depth - node.depth) / 2
                add_row(node.cx - t.cx - half_w)
                add_row(t.cx - node.cx - half_w)
                add_row(node.cy - t.cy - half_d)
                add_row(t.cy - node.cy - half_d)
            elif isinstance(s, AheadOf):
                add_row(node.cy - nodes[s.target].ymin)
            elif isinstance(s, Behind):
                add_row(nodes[s.target].ymax - node.cy)
            elif isinstance(s, LeftOf):
                add_row(node.cx - nodes[s.target].cx)
            elif isinstance(s, RightOf):
                add_row(nodes[s.target].cx - node.cx)
            elif isinstance(s, WithRange):
                iv = new_dim(s.prop, "val")
                val = _Aff.of_dim(iv)
                node.props[s.prop] = val
                add_row(val - s.hi)
                add_row(_Aff(s.lo) - val)
            else:
                raise TypeError(f"unhandled specifier {s!r}")

        _validate_axes(decl.name, node, own_rows, free_dims, prior_dim_count, prior_rows)
        rows.extend(own_rows)
        nodes[decl.name] = node
        for target in dict.fromkeys(node.refs):
            edges.append((target, decl.name))
        if node.own_dims:
            regions[decl.name] = _split_region(node, own_rows)

    return SceneGraph(
        nodes=nodes,
        edges=tuple(edges),
        free_dims=tuple(free_dims),
        regions=regions,
        rows=tuple((dict(c), v) for c, v in rows),
    )


def _split_region(node: SceneNode, own_rows) -> ParametricRegion:
    own = tuple(node.own_dims)
    parent_set: set[int] = set()
    for coeffs, _ in own_rows:
        parent_set.update(i for i in coeffs if i not in node.own_dims)
    parents = tuple(sorted(parent_set))
    m = len(own_rows)
    A = np.zeros((m, len(own)))
    B = np.zeros((m, len(parents)))
    c = np.zeros(m)
    own_pos = {g: i for i, g in enumerate(own)}
    par_pos = {g: i for i, g in enumerate(parents)}
    for r, (coeffs, const) in enumerate(own_rows):
        c[r] = const
        for g, coef in coeffs.items():
            if g in own_pos:
                A[r, own_pos[g]] = coef
            else:
                B[r, par_pos[g]] = coef
    return ParametricRegion(own, parents, A, B, c)


def _validate_axes(name, node, own_rows, free_dims, prior_dim_count, prior_rows):
    """Prove each own axis is bounded with positive extent for every
    attainable ancestor configuration."""
    for j in node.own_dims:
        uppers: list[_Aff] = []  # x_j <= expr
        lowers: list[_Aff] = []  # x_j >= expr
        for coeffs, const in own_rows:
            cj = coeffs.get(j, 0.0)
            if cj == 0.0:
                continue
            others = {i: c for i, c in coeffs.items() if i != j}
            if any(i in node.own_dims for i in others):
                raise GeometryError(
                    f"object '{name}': a row couples two of its own axes"
                )
            bound = _Aff(-const / cj, {i: -c / cj for i, c in others.items()})
            (uppers if cj > 0 else lowers).append(bound)
        meta = free_dims[j].column_name
        if not uppers or not lowers:
            raise UnboundedRegionError(
                f"axis {meta} lacks {'an upper' if not uppers else 'a lower'} bound"
            )
        worst = np.inf
        for up in uppers:
            for lo in lowers:
                gap = up - lo
                if gap.is_const:
                    worst = min(worst, gap.const)
                else:
                    worst = min(worst, _min_over_prior(gap, prior_dim_count, prior_rows))
        if worst < -GAP_TOL:
            raise EmptyRegionError(
                f"axis {meta} is empty (worst-case extent {worst:.6g})"
            )
        if worst <= GAP_TOL:
            raise LowerDimensionalError(
                f"axis {meta} has zero extent for some ancestor placement"
            )


def _min_over_prior(gap: _Aff, n_dims: int, prior_rows) -> float:
    """Minimum of an affine form over the polytope of all earlier dims."""
    c = np.zeros(n_dims)
    for i, coef in gap.coeffs.items():
        c[i] = coef
    G = np.zeros((len(prior_rows), n_dims))
    h = np.zeros(len(prior_rows))
    for r, (coeffs, const) in enumerate(prior_rows):
        for i, coef in coeffs.items():
            G[r, i] = coef
        h[r] = -const
    res = lp.solve_lp(-c, G, h)  # maximize -c.v, i.e. minimize c.v
    if res.status != lp.OPTIMAL:
        raise GeometryError(f"ancestor feasibility LP returned {res.status}")
    return gap.const - float(res.value)


def assemble_joint_domain(graph: SceneGraph) -> JointDomain:
    d = graph.d
    if d == 0:
        raise NoFreeDimensionsError("scene has no free dimensions to design over")
    A = np.zeros((len(graph.rows), d))
    b = np.zeros(len(graph.rows))
    for r, (coeffs, const) in enumerate(graph.rows):
        for i, coef in coeffs.items():
            A[r, i] = coef
        b[r] = const
    return JointDomain(Polytope(A, b), graph.free_dims)


# --- conditioning orders -------------------------------------------------------

@dataclass(frozen=True)
class ConditioningOrder:
    perm: tuple[int, ...]

    @classmethod
    def checked(cls, perm, graph: SceneGraph) -> "ConditioningOrder":
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(graph.d)):
            raise ValueError(f"{perm} is not a permutation of 0..{graph.d - 1}")
        preds = graph.dim_precedence()
        pos = {dim: i for i, dim in enumerate(perm)}
        for j in range(graph.d):
            for p in preds[j]:
                if pos[p] > pos[j]:
                    raise ValueError(
                        f"order {perm} places dim {j} before its ancestor dim {p}"
                    )
        return cls(perm)

    def __len__(self):
        return len(self.perm)


def _linear_extensions(preds: list[frozenset[int]], d: int, limit: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []
    used = [False] * d

    def rec():
        if len(out) >= limit:
            return
        if len(chosen) == d:
            out.append(tuple(chosen))
            return
        placed = set(chosen)
        for j in range(d):
            if not used[j] and preds[j] <= placed:
                used[j] = True
                chosen.append(j)
                rec()
                chosen.pop()
                used[j] = False
                if len(out) >= limit:
                    return

    rec()
    return out


ENUMERATION_CEILING = 200_000


def viable_orders(graph: SceneGraph, cap: int = 720, seed: int = 0) -> list[ConditioningOrder]:
    """All conditioning orders compatible with the dependency partial
    order, in lexicographic order; a seeded uniform subset of size `cap`
    (always containing the identity layout order) when there are more."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    d = graph.d
    if d == 0:
        return []
    preds = graph.dim_precedence()
    all_orders = _linear_extensions(preds, d, ENUMERATION_CEILING)
    if len(all_orders) <= cap:
        return [ConditioningOrder(p) for p in all_orders]
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = sorted(rng.choice(len(all_orders), size=cap, replace=False).tolist())
    subset = [all_orders[i] for i in idx]
    identity = tuple(range(d))
    if identity not in subset:
        subset[-1] = identity
        subset.sort()
    return [ConditioningOrder(p) for p in subset]
