"""One-dimensional maximization helpers."""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_max(f, a: float, b: float, tol: float = 1e-5):
    """Maximize a unimodal ``f`` on ``[a, b]`` by golden-section search.

    Returns ``(x, f(x))`` with the bracket shrunk below ``tol``.  When the
    maximum sits on an end point the search converges onto that end point,
    which is then also compared explicitly.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c, d = a + INV_PHI2 * h, a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc > fd:
            b, d, fd = d, c, fc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= INV_PHI
            d = a + INV_PHI * h
            fd = f(d)
    best = (c, fc) if fc > fd else (d, fd)
    for end in (a, b):
        fe = f(end)
        if fe > best[1]:
            best = (end, fe)
    return best


def grid_search_max(f, a: float, b: float, points: int = 2001):
    """Brute-force maximum on a uniform grid; a cross-check for the above."""
    xs = np.linspace(a, b, points)
    ys = np.array([f(x) for x in xs])
    i = int(np.argmax(ys))
    return float(xs[i]), float(ys[i])
