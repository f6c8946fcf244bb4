"""Quadrature helpers: composite Simpson on samples, adaptive Simpson on callables."""

from __future__ import annotations

import numpy as np


def simpson_samples(y: np.ndarray, h: float):
    """Composite Simpson integral of uniformly sampled values.

    Handles an even number of intervals directly; an odd count is closed with
    a Simpson 3/8 rule on the last three intervals so no sample is wasted on
    a trapezoid.
    """
    y = np.asarray(y)
    n = y.shape[0]
    if n < 2:
        raise ValueError("need at least two samples")
    if n == 2:
        return (y[0] + y[1]) * (h / 2.0)
    if n % 2 == 1:
        return (h / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())
    # even sample count: Simpson on the first n-4 intervals, 3/8 on the last 3
    if n == 4:
        return (3.0 * h / 8.0) * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3])
    head = (h / 3.0) * (y[0] + y[-4] + 4.0 * y[1:-4:2].sum() + 2.0 * y[2:-4:2].sum())
    tail = (3.0 * h / 8.0) * (y[-4] + 3.0 * y[-3] + 3.0 * y[-2] + y[-1])
    return head + tail


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 48):
    """Adaptive Simpson quadrature with interval bisection.

    Args:
        f: scalar callable.
        a, b: integration bounds, a < b.
        tol: absolute tolerance, distributed over subintervals.
        max_depth: recursion cap; exceeding it raises RuntimeError.
    """
    if not b > a:
        raise ValueError("need a < b")
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _adapt(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _adapt(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise RuntimeError("adaptive Simpson failed to converge (depth exhausted)")
    return (
        _adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + _adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    )
