"""Gamma function via the Lanczos approximation (g = 7, 9 coefficients).

Relative accuracy is around 1e-14 over the arguments used here (real,
moderate magnitude); the accompanying tests pin that down against a
high-precision reference. The reflection formula extends the
approximation below 1/2.
"""

from __future__ import annotations

import math

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = 2.5066282746310002


def gamma(x: float) -> float:
    """Gamma(x) for real x; poles at nonpositive integers raise ValueError."""
    if x != x:
        raise ValueError("gamma of nan")
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma pole at {x}")
    if x < 0.5:
        # reflection: gamma(x) gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (z + 0.5) * math.exp(-t) * acc
