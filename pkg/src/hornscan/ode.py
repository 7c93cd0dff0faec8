"""Fixed-step classical Runge-Kutta for small systems of plain floats."""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

Rhs = Callable[[float, tuple], tuple]


def rk4(f: Rhs, y0: Sequence[float], t0: float, t1: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Integrate y' = f(t, y) from t0 to t1 in ``steps`` equal steps.

    ``f`` takes and returns tuples of floats; avoiding numpy inside the loop
    keeps a 10k-step run well under a tenth of a second.

    Returns the sample abscissae (steps + 1,) and states (steps + 1, len(y0)).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = (t1 - t0) / steps
    n = len(y0)
    out = np.empty((steps + 1, n))
    y = tuple(float(v) for v in y0)
    out[0] = y
    for i in range(steps):
        t = t0 + i * h
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, tuple(y[j] + 0.5 * h * k1[j] for j in range(n)))
        k3 = f(t + 0.5 * h, tuple(y[j] + 0.5 * h * k2[j] for j in range(n)))
        k4 = f(t + h, tuple(y[j] + h * k3[j] for j in range(n)))
        y = tuple(y[j] + h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]) for j in range(n))
        out[i + 1] = y
    ts = t0 + h * np.arange(steps + 1)
    ts[-1] = t1
    return ts, out


def convergence_order(errors: Sequence[float], steps: Sequence[int]) -> float:
    """Least-squares slope of log(error) against log(step size)."""
    h = 1.0 / np.asarray(steps, dtype=float)
    slope, _ = np.polyfit(np.log(h), np.log(np.asarray(errors, dtype=float)), 1)
    return float(slope)
