"""Least-squares fits behind the convergence and growth reports."""

from __future__ import annotations

import math

import numpy as np


def fit_offset_inverse(sizes, values) -> tuple[float, float]:
    """Fit values ~ delta + beta/size; returns (delta, beta)."""
    x = np.array([1.0 / s for s in sizes], dtype=float)
    y = np.asarray(values, dtype=float)
    a = np.column_stack([np.ones_like(x), x])
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    return float(sol[0]), float(sol[1])


def fit_loglog(sizes, counts) -> tuple[float, float]:
    """Log-log slope and intercept; probes with count <= 0 are dropped."""
    pts = [(math.log(s), math.log(c)) for s, c in zip(sizes, counts) if c > 0]
    if len(pts) < 2:
        return 0.0, 0.0
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    a = np.column_stack([x, np.ones_like(x)])
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    return float(sol[0]), float(sol[1])
