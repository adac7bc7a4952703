"""Adaptive Gauss-Legendre quadrature for smooth (here: rational) integrands.

Panels are judged by comparing a 7-point and a 15-point rule; a panel whose
disagreement exceeds its share of the tolerance is bisected.  Integrands must
accept numpy arrays (all callers evaluate recurrences in batch).
"""

from __future__ import annotations

import numpy as np

from .errors import JacobiWeylError

_X7, _W7 = np.polynomial.legendre.leggauss(7)
_X15, _W15 = np.polynomial.legendre.leggauss(15)


def _panel(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    lo = half * np.sum(_W7 * f(mid + half * _X7))
    hi = half * np.sum(_W15 * f(mid + half * _X15))
    return hi, abs(hi - lo)


def adaptive_integral(f, a: float, b: float, tol: float = 1e-10,
                      max_panels: int = 20_000) -> float:
    """Integral of f over [a, b] to absolute tolerance tol.

    Globally adaptive: the panel with the largest error estimate is bisected
    until the summed estimate falls below tol (worst-first refinement handles
    sharply peaked integrands without starving narrow panels of budget).
    """
    if not a < b:
        raise JacobiWeylError("need a < b")
    import heapq

    val, err = _panel(f, a, b)
    heap = [(-err, a, b, val)]
    total_err = err
    panels = 1
    while total_err > tol and panels < max_panels:
        neg_err, x0, x1, v = heapq.heappop(heap)
        if (x1 - x0) < 1e-15 * (b - a):
            heapq.heappush(heap, (0.0, x0, x1, v))
            total_err += neg_err
            continue
        total_err += neg_err          # remove this panel's estimate
        xm = 0.5 * (x0 + x1)
        v1, e1 = _panel(f, x0, xm)
        v2, e2 = _panel(f, xm, x1)
        heapq.heappush(heap, (-e1, x0, xm, v1))
        heapq.heappush(heap, (-e2, xm, x1, v2))
        total_err += e1 + e2
        panels += 1
    if total_err > tol:
        raise JacobiWeylError("adaptive quadrature exceeded the panel budget")
    return float(sum(item[3] for item in heap))


def integral_with_algebraic_tail(f, core_radius: float, decay_power: float,
                                 tol: float = 1e-10, max_doublings: int = 60) -> float:
    """Integral of f over the whole line for |f| ~ |x|^(-decay_power) tails.

    Integrates [-R, R] adaptively, then doubles R until both the last shell
    contribution and the analytic tail bound (from the measured endpoint
    values and the known decay power) drop below tol.
    """
    if decay_power <= 1.0:
        raise JacobiWeylError("tail decay power must exceed 1 for integrability")
    radius = max(core_radius, 1.0)
    total = adaptive_integral(f, -radius, radius, tol=0.25 * tol)
    for _ in range(max_doublings):
        shell = (adaptive_integral(f, -2.0 * radius, -radius, tol=0.125 * tol)
                 + adaptive_integral(f, radius, 2.0 * radius, tol=0.125 * tol))
        total += shell
        radius *= 2.0
        edge = abs(float(np.max(np.abs(f(np.array([-radius, radius]))))))
        tail_bound = 2.0 * edge * radius / (decay_power - 1.0)
        if abs(shell) <= 0.25 * tol and tail_bound <= 0.25 * tol:
            return total
    raise JacobiWeylError("tail did not fall below tolerance while doubling the cutoff")
