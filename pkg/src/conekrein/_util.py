"""Small shared numerics helpers: sequence acceleration, derivatives."""

from __future__ import annotations

import math

import numpy as np

from .errors import ExtrapolationError


def aitken_limit(seq, rtol: float = 1e-8, atol: float = 1e-12):
    """Iterated Aitken delta-squared limit of a convergent sequence.

    Accepts real or complex values.  The limit estimate at each depth is
    the deepest table's last entry; iteration stops when successive
    estimates settle (or start drifting on roundoff noise).  Raises
    ExtrapolationError when they never settle to ``rtol``/``atol``.
    """
    s = [complex(v) for v in seq]
    if len(s) < 3:
        raise ExtrapolationError("need at least three terms to accelerate")
    est = s[-1]
    change = math.inf
    table = s
    while len(table) >= 3:
        nxt = []
        for i in range(len(table) - 2):
            d1 = table[i + 1] - table[i]
            d2 = table[i + 2] - 2 * table[i + 1] + table[i]
            if abs(d2) < 1e-300:
                nxt.append(table[i + 2])
            else:
                nxt.append(table[i] - d1 * d1 / d2)
        table = nxt
        new_change = abs(table[-1] - est)
        est = table[-1]
        if new_change <= max(rtol * abs(est), atol):
            return est
        if new_change > change:
            break  # roundoff floor reached; keep the settled estimate
        change = new_change
    if change > max(rtol * abs(est), atol):
        raise ExtrapolationError(
            f"sequence acceleration stalled at residual {change:.2e}"
        )
    return est


def richardson_fixed_ratio(values, ratio: float):
    """Eliminate power-law errors from values on a fixed-ratio parameter grid.

    ``values[j]`` is f(h0 / ratio**j); assumes f(h) = L + c1 h + c2 h^2 + ...
    and removes one power per level.
    """
    v = [complex(x) for x in values]
    level = 1
    while len(v) > 1:
        r = ratio**level
        v = [(r * v[i + 1] - v[i]) / (r - 1.0) for i in range(len(v) - 1)]
        level += 1
    return v[0]


def central_derivative(f, x: float, h: float):
    """5-point central first derivative, one Richardson step (O(h^6))."""
    def d(hh):
        return (8.0 * (f(x + hh) - f(x - hh)) - (f(x + 2 * hh) - f(x - 2 * hh))) / (
            12.0 * hh
        )

    d1, d2 = d(h), d(0.5 * h)
    return (16.0 * d2 - d1) / 15.0


def geometric_grid(start: float, stop: float, n: int) -> np.ndarray:
    """Geometric grid between two same-sign endpoints (handles negatives)."""
    if start == 0 or stop == 0 or (start < 0) != (stop < 0):
        raise ValueError("geometric grid needs same-sign nonzero endpoints")
    sgn = -1.0 if start < 0 else 1.0
    return sgn * np.geomspace(abs(start), abs(stop), n)
