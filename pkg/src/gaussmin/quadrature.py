"""Adaptive one-dimensional quadrature.

Gauss-Kronrod 7-15 panels driven by a worst-interval-first refinement
queue. Each panel supplies both a value and an error estimate (the
difference between the embedded Gauss and Kronrod rules); subdivision
continues until the summed estimate meets an absolute target or the
evaluation cap is reached. Nodes are interior, so integrands may be
defined by a limit value at an endpoint.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

DEFAULT_ABS_TOL = 1e-12
MAX_EVALUATIONS = 10 ** 6

# Kronrod-15 abscissae on [-1, 1] (positive half, descending) and weights;
# the embedded Gauss-7 rule uses the odd-indexed abscissae.
_XGK = (
    0.9914553711208126392068547,
    0.9491079123427585245261897,
    0.8648644233597690727897128,
    0.7415311855993944398638648,
    0.5860872354676911302941448,
    0.4058451513773971669066064,
    0.2077849550078984676006894,
)
_WGK = (
    0.0229353220105292249637320,
    0.0630920926299785532907007,
    0.1047900103222501838398763,
    0.1406532597155259187451896,
    0.1690047266392679028265834,
    0.1903505780647854099132564,
    0.2044329400752988924141620,
)
_WGK_CENTER = 0.2094821410847278280129992
_WG = (
    0.1294849661688696932706114,
    0.2797053914892766679014678,
    0.3818300505051189449503698,
)
_WG_CENTER = 0.4179591836734693877551020


@dataclass(frozen=True)
class QuadratureResult:
    """Value with an error estimate and the evaluation count that produced it."""

    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise ValueError("error estimate must be nonnegative")


def _panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    result_k = _WGK_CENTER * fc
    result_g = _WG_CENTER * fc
    for j, x in enumerate(_XGK):
        dx = half * x
        f_lo = f(center - dx)
        f_hi = f(center + dx)
        result_k += _WGK[j] * (f_lo + f_hi)
        if j % 2 == 1:
            result_g += _WG[j // 2] * (f_lo + f_hi)
    value = result_k * half
    return value, abs((result_k - result_g) * half)


def integrate(f: Callable[[float], float], a: float, b: float,
              abs_tol: float = DEFAULT_ABS_TOL,
              max_evaluations: int = MAX_EVALUATIONS) -> QuadratureResult:
    """Integrate f over [a, b] to an absolute error target.

    Refinement always splits the interval with the worst error estimate,
    so integrands that are steep near one endpoint get their subdivisions
    concentrated there. Stops early at ``max_evaluations``; the returned
    error estimate reports whatever accuracy was reached.
    """
    if not (b >= a):
        raise ValueError(f"bad integration range [{a}, {b}]")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    evaluations = 15
    value, err = _panel(f, a, b)
    heap = [(-err, a, b, value, err)]
    total_err = err
    while total_err > abs_tol and evaluations + 30 <= max_evaluations:
        _, lo, hi, val, err = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # interval at float resolution, cannot refine further
            heapq.heappush(heap, (0.0, lo, hi, val, err))
            total_err -= err
            continue
        val_l, err_l = _panel(f, lo, mid)
        val_r, err_r = _panel(f, mid, hi)
        evaluations += 30
        total_err += err_l + err_r - err
        heapq.heappush(heap, (-err_l, lo, mid, val_l, err_l))
        heapq.heappush(heap, (-err_r, mid, hi, val_r, err_r))
    value = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return QuadratureResult(value, total_err, evaluations)
