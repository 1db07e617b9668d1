"""Kolmogorov-Smirnov statistics and critical values.

Only the pieces the test battery needs: the one- and two-sample KS
statistics and the asymptotic critical value at a given significance
level, c(a) = sqrt(-ln(a/2)/2) scaled by the effective sample size.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

__all__ = ["ks_1samp", "ks_2samp", "ks_critical_1samp", "ks_critical_2samp"]


def ks_1samp(samples: np.ndarray, cdf: Callable[[float], float]) -> float:
    """sup_x |F_emp(x) - F(x)| for a continuous reference cdf."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("need at least one sample")
    f = np.array([cdf(v) for v in x])
    if np.any((f < 0.0) | (f > 1.0)):
        raise ValueError("cdf values must lie in [0, 1]")
    grid = np.arange(1, n + 1) / n
    return float(max(np.max(grid - f), np.max(f - (grid - 1.0 / n))))


def ks_2samp(a: np.ndarray, b: np.ndarray) -> float:
    """sup_x |F_a(x) - F_b(x)| between two empirical cdfs."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("need at least one sample on each side")
    pooled = np.concatenate([a, b])
    pooled.sort(kind="mergesort")
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def _ks_scale(level: float) -> float:
    if not (0.0 < level < 1.0):
        raise ValueError(f"significance level must lie in (0, 1), got {level}")
    return math.sqrt(-0.5 * math.log(level / 2.0))


def ks_critical_1samp(level: float, n: int) -> float:
    """Asymptotic one-sample critical value at significance ``level``."""
    if n < 1:
        raise ValueError("need at least one sample")
    return _ks_scale(level) / math.sqrt(n)


def ks_critical_2samp(level: float, n: int, m: int) -> float:
    """Asymptotic two-sample critical value at significance ``level``."""
    if n < 1 or m < 1:
        raise ValueError("need at least one sample on each side")
    return _ks_scale(level) * math.sqrt((n + m) / (n * m))
