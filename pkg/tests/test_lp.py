"""Simplex solver tests: hand oracles, a classic cycling instance, and
randomized cross-checks against scipy's LP solver."""

import numpy as np
import pytest
from scipy.optimize import linprog

from unidex import lp


def test_box_corner():
    # maximize x + 2y over [0,1]^2 -> corner (1,1), value 3
    G = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
    h = np.array([1, 0, 1, 0], dtype=float)
    res = lp.solve_lp(np.array([1.0, 2.0]), G, h)
    assert res.status == lp.OPTIMAL
    assert res.value == pytest.approx(3.0, abs=1e-9)
    assert np.allclose(res.x, [1, 1], atol=1e-9)


def test_free_variable_negative_optimum():
    # maximize -x subject to x >= 2 -> value -2 (needs the u-w split)
    res = lp.solve_lp(np.array([-1.0]), np.array([[-1.0]]), np.array([-2.0]))
    assert res.status == lp.OPTIMAL
    assert res.value == pytest.approx(-2.0, abs=1e-9)
    assert res.x[0] == pytest.approx(2.0, abs=1e-9)


def test_infeasible():
    # x <= -1 and x >= 1
    G = np.array([[1.0], [-1.0]])
    h = np.array([-1.0, -1.0])
    res = lp.solve_lp(np.array([1.0]), G, h)
    assert res.status == lp.INFEASIBLE


def test_unbounded():
    res = lp.solve_lp(np.array([1.0]), np.array([[-1.0]]), np.array([0.0]))
    assert res.status == lp.UNBOUNDED


def test_degenerate_duplicate_rows():
    # duplicated and redundant rows force degenerate pivots
    G = np.array(
        [[1, 0], [1, 0], [0, 1], [0, 1], [-1, 0], [0, -1], [1, 1]], dtype=float
    )
    h = np.array([1, 1, 1, 1, 0, 0, 2], dtype=float)
    res = lp.solve_lp(np.array([1.0, 1.0]), G, h)
    assert res.status == lp.OPTIMAL
    assert res.value == pytest.approx(2.0, abs=1e-9)


def test_beale_cycling_instance():
    # the textbook instance that cycles under naive pivoting; Bland's rule
    # must terminate at value 0.05
    c = np.array([0.75, -150.0, 0.02, -6.0])
    G = np.array(
        [
            [0.25, -60.0, -1.0 / 25.0, 9.0],
            [0.5, -90.0, -1.0 / 50.0, 3.0],
            [0.0, 0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]
    )
    h = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    res = lp.solve_lp(c, G, h)
    assert res.status == lp.OPTIMAL
    assert res.value == pytest.approx(0.05, abs=1e-9)


def test_negative_rhs_feasible():
    # constraints with negative rhs exercise the artificial-variable phase
    G = np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]])
    h = np.array([-1.0, -1.0, 4.0])
    res = lp.solve_lp(np.array([1.0, 1.0]), G, h)
    assert res.status == lp.OPTIMAL
    assert res.value == pytest.approx(4.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(25))
def test_random_cross_check(seed):
    # random bounded feasible regions: box plus random cuts through an
    # interior point, random objective; compare against scipy
    rng = np.random.default_rng(seed)
    k = rng.integers(1, 5)
    m_extra = rng.integers(0, 6)
    lo = rng.uniform(-3, 0, k)
    hi = rng.uniform(0.5, 3, k)
    eye = np.eye(k)
    G = [np.vstack([eye, -eye])]
    h = [np.concatenate([hi, -lo])]
    x0 = rng.uniform(lo, hi)  # kept feasible by construction
    for _ in range(m_extra):
        a = rng.normal(size=k)
        G.append(a[None, :])
        h.append(np.atleast_1d(a @ x0 + rng.uniform(0.1, 2.0)))
    G = np.vstack(G)
    h = np.concatenate(h)
    c = rng.normal(size=k)

    res = lp.solve_lp(c, G, h)
    ref = linprog(-c, A_ub=G, b_ub=h, bounds=[(None, None)] * k, method="highs")
    assert res.status == lp.OPTIMAL
    assert ref.status == 0
    assert res.value == pytest.approx(-ref.fun, abs=1e-7, rel=1e-7)
    # reported point must be feasible and attain the value
    assert np.all(G @ res.x <= h + 1e-7)
    assert c @ res.x == pytest.approx(res.value, abs=1e-7)
