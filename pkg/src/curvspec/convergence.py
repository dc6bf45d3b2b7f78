"""Observed convergence orders from refinement sequences."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidArgument


def observed_order(h, errors) -> float:
    """Least-squares slope of ``log|error|`` against ``log h`` (known limit)."""
    h = np.asarray(h, dtype=float)
    e = np.abs(np.asarray(errors, dtype=float))
    if h.size < 2 or h.shape != e.shape:
        raise InvalidArgument("need matching spacing and error sequences of length >= 2")
    if np.any(e == 0):
        return math.nan
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])


def richardson_order(h, values) -> float:
    """Order ``p`` from three refinements with unknown limit.

    Solves ``(q1 - q2)/(q2 - q3) = (h1^p - h2^p)/(h2^p - h3^p)``; this
    reduces to ``log2`` of the difference ratio when ``h`` halves exactly.
    Returns ``nan`` when the differences vanish or change sign.
    """
    h = np.asarray(h, dtype=float)
    q = np.asarray(values, dtype=float)
    if h.size != 3 or q.size != 3:
        raise InvalidArgument("Richardson order needs exactly three grids")
    d1, d2 = q[0] - q[1], q[1] - q[2]
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return math.nan
    target = d1 / d2

    def f(p):
        return (h[0] ** p - h[1] ** p) / (h[1] ** p - h[2] ** p) - target

    lo, hi = 0.05, 12.0
    if f(lo) * f(hi) > 0:
        return math.nan
    return float(brentq(f, lo, hi, xtol=1e-12))


def extrapolate(h, values, p: float) -> float:
    """Richardson-extrapolated limit from the two finest grids."""
    h1, h2 = float(h[-2]), float(h[-1])
    q1, q2 = float(values[-2]), float(values[-1])
    w = (h1 / h2) ** p
    return (w * q2 - q1) / (w - 1.0)
