"""Dense two-phase simplex solver for small linear programs.

Solves   maximize c.x  subject to  G x <= h   with x sign-free.

Sized for the polytopes handled here (k <= ~10 variables, m <= ~60 rows).
Sign-free variables are split x = u - w with u, w >= 0; rows with a
negative right-hand side get an artificial variable and phase 1 drives
the artificials to zero. Bland's rule prevents cycling, which keeps the
solver deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LpError

_EPS = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    x: np.ndarray | None = None
    value: float | None = None


def _pivot(tab: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    colvals = tab[:, col].copy()
    colvals[row] = 0.0
    tab -= np.outer(colvals, tab[row])
    tab[row, col] = 1.0
    tab[:, col][np.abs(tab[:, col]) < 1e-13] = 0.0
    basis[row] = col


def _simplex(tab: np.ndarray, basis: np.ndarray, ncols: int) -> str:
    """Iterate on a tableau whose last row holds reduced profits (maximize)
    and last column the rhs. Returns OPTIMAL or UNBOUNDED."""
    m = tab.shape[0] - 1
    rows = np.arange(m)
    for _ in range(20000):
        improving = np.flatnonzero(tab[-1, :ncols] > _EPS)
        if improving.size == 0:
            return OPTIMAL
        col = improving[0]  # Bland: smallest improving index
        a = tab[:m, col]
        ok = a > _EPS
        if not ok.any():
            return UNBOUNDED
        ratios = np.full(m, np.inf)
        ratios[ok] = tab[:m, -1][ok] / a[ok]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12]
        row = tied[np.argmin(basis[tied])]  # Bland on the leaving variable
        _pivot(tab, basis, row, col)
    raise LpError("simplex iteration limit exceeded")


def solve_lp(c: np.ndarray, G: np.ndarray, h: np.ndarray) -> LpResult:
    """Maximize c.x subject to G x <= h, x free. Returns an LpResult."""
    c = np.asarray(c, dtype=float)
    G = np.asarray(G, dtype=float)
    h = np.asarray(h, dtype=float).ravel()
    if G.ndim != 2:
        raise LpError("G must be a matrix")
    m, n = G.shape
    if c.shape != (n,) or h.shape != (m,):
        raise LpError("inconsistent LP dimensions")
    if m == 0:
        if np.any(np.abs(c) > _EPS):
            return LpResult(UNBOUNDED)
        return LpResult(OPTIMAL, np.zeros(n), 0.0)

    # columns: u(n) | w(n) | slack(m) | artificial(na) | rhs
    rows = np.hstack([G, -G, np.eye(m)])
    rhs = h.copy()
    neg = rhs < 0
    rows[neg] *= -1.0
    rhs[neg] *= -1.0
    art_rows = np.flatnonzero(neg)
    na = art_rows.size
    ncols = 2 * n + m
    tab = np.zeros((m + 1, ncols + na + 1))
    tab[:m, :ncols] = rows
    tab[:m, -1] = rhs
    basis = 2 * n + np.arange(m)  # slacks
    for k, r in enumerate(art_rows):
        tab[r, ncols + k] = 1.0
        basis[r] = ncols + k

    if na:
        # phase 1: maximize -sum(artificials)
        tab[-1, :] = tab[art_rows, :].sum(axis=0)
        tab[-1, ncols:ncols + na] = 0.0
        status = _simplex(tab, basis, ncols + na)
        if status != OPTIMAL or tab[-1, -1] > 1e-7:
            return LpResult(INFEASIBLE)
        # drive leftover artificials out of the basis
        for r in range(m):
            if basis[r] >= ncols:
                nz = np.flatnonzero(np.abs(tab[r, :ncols]) > _EPS)
                if nz.size:
                    _pivot(tab, basis, r, nz[0])

    # phase 2
    tab[:, ncols:ncols + na] = 0.0
    tab[-1, :] = 0.0
    tab[-1, :n] = c
    tab[-1, n:2 * n] = -c
    for r in range(m):
        j = basis[r]
        if j < ncols and abs(tab[-1, j]) > 1e-14:
            tab[-1] -= tab[-1, j] * tab[r]
    status = _simplex(tab, basis, ncols)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)

    sol = np.zeros(ncols)
    inb = basis < ncols
    sol[basis[inb]] = tab[:m, -1][inb]
    x = sol[:n] - sol[n:2 * n]
    return LpResult(OPTIMAL, x, float(c @ x))
