"""Shared fixtures: canonical bodies, the two reference scenes, and a helper
for wrapping a bare polytope as a design domain with independent axes."""

from __future__ import annotations

import pathlib

import numpy as np
import pytest

from unidex.geometry import Polytope
from unidex.parser import parse
from unidex.scene import (
    DimMeta,
    JointDomain,
    SceneGraph,
    assemble_joint_domain,
    build_scene_graph,
    load_class_table,
)

SPEC_DIR = pathlib.Path(__file__).resolve().parent.parent / "specs"


def free_domain(poly: Polytope) -> tuple[JointDomain, SceneGraph]:
    """Wrap a polytope as a JointDomain with a dependency-free graph, so the
    transform operations can run on hand-built geometry."""
    dm = tuple(DimMeta(f"v{i}", "val", "") for i in range(poly.dim))
    graph = SceneGraph(nodes={}, edges=(), free_dims=dm, regions={}, rows=())
    return JointDomain(polytope=poly, dim_meta=dm), graph


@pytest.fixture(scope="session")
def triangle() -> Polytope:
    # {x >= 0, y >= 0, x + y <= 1}
    return Polytope([[-1, 0], [0, -1], [1, 1]], [0, 0, -1])


@pytest.fixture(scope="session")
def unit_square() -> Polytope:
    return Polytope.from_bounds([0, 0], [1, 1])


@pytest.fixture(scope="session")
def unit_cube() -> Polytope:
    return Polytope.from_bounds([0, 0, 0], [1, 1, 1])


@pytest.fixture(scope="session")
def simplex3() -> Polytope:
    # {x, y, z >= 0, x + y + z <= 1}, volume 1/6
    return Polytope(
        [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 1]], [0, 0, 0, -1]
    )


@pytest.fixture(scope="session")
def cube_table_src() -> str:
    return (SPEC_DIR / "cube_table.prs").read_text()


@pytest.fixture(scope="session")
def tray_src() -> str:
    return (SPEC_DIR / "tray_cube_table.prs").read_text()


@pytest.fixture(scope="session")
def cube_table_graph(cube_table_src):
    return build_scene_graph(parse(cube_table_src), load_class_table())


@pytest.fixture(scope="session")
def cube_table_domain(cube_table_graph):
    return assemble_joint_domain(cube_table_graph)


@pytest.fixture(scope="session")
def tray_graph(tray_src):
    return build_scene_graph(parse(tray_src), load_class_table())


@pytest.fixture(scope="session")
def tray_domain(tray_graph):
    return assemble_joint_domain(tray_graph)
