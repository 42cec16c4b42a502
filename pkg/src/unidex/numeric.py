"""Scalar numerics: Brent root bracketing and adaptive Simpson quadrature.

Both are deliberately self-contained so results are bit-reproducible
across platforms and dependency versions.
"""

from __future__ import annotations

from typing import Callable

from .errors import ConvergenceFailureError

BRENT_MAX_ITER = 200


def brent_solve(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    f_tol: float = 1e-11,
    x_tol: float = 1e-13,
    max_iter: int = BRENT_MAX_ITER,
) -> float:
    """Root of f on [lo, hi] with f(lo), f(hi) of opposite sign.

    Combines bisection, secant, and inverse quadratic steps (Brent's
    method). Raises ConvergenceFailure when the residual never drops
    below f_tol.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise ConvergenceFailureError(
            f"root not bracketed: f({a})={fa}, f({b})={fb}"
        )
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * 2.220446049250313e-16 * abs(b) + 0.5 * x_tol
        xm = 0.5 * (c - b)
        if abs(fb) <= f_tol:
            return b
        if abs(xm) <= tol1:
            if abs(fb) <= 1e-9:
                return b
            raise ConvergenceFailureError(
                f"interval collapsed with residual {fb}"
            )
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if xm > 0 else -tol1
        fb = f(b)
    if abs(fb) <= 1e-9:
        return b
    raise ConvergenceFailureError(
        f"no convergence in {max_iter} iterations; residual {fb}"
    )


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 48,
) -> float:
    """Integral of f over [a, b] to absolute tolerance tol."""
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth) -> float:
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    half = 0.5 * tol
    return _simpson_rec(f, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_rec(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )
