"""Exact law of the minimum absolute coordinate under the cosine family.

For the rank-two cosine correlation matrix on n coordinates, the minimum
absolute coordinate has the law of R sin(Theta) with R a Rayleigh radius
(R^2 chi-squared with two degrees of freedom) and Theta uniform on
[0, pi/(2n)], independent. That gives single integrals for the tail and
the moments, and a closed form for the second moment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadratureResult, integrate
from .special import gamma
from .streams import RngStream, rayleigh_from_uniforms

__all__ = [
    "CosineLaw",
    "QuadratureResult",
    "cos_tail",
    "cos_moment",
    "cos_moment_p2",
    "identity_tail",
    "sample_cos_min",
]


def _check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"dimension must be an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return int(n)


def cos_tail(n: int, t: float) -> float:
    """P[min |g_i| >= t] for g drawn from the n-dimensional cosine law.

    Equals (2n/pi) * integral_0^{pi/2n} exp(-t^2 / (2 sin^2 theta)) d theta.
    The integrand vanishes at theta = 0 (limit value) and the quadrature
    target is scaled so the returned probability is accurate to about 1e-12.
    """
    n = _check_n(n)
    t = float(t)
    if t < 0.0 or t != t:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    if t == 0.0:
        return 1.0
    upper = math.pi / (2 * n)
    half_tsq = 0.5 * t * t

    def integrand(theta: float) -> float:
        if theta <= 0.0:
            return 0.0
        s = math.sin(theta)
        return math.exp(-half_tsq / (s * s))

    res = integrate(integrand, 0.0, upper, abs_tol=0.5e-12 * upper)
    value = (2 * n / math.pi) * res.value
    return min(1.0, max(0.0, value))


def cos_moment(n: int, p: float) -> float:
    """E[(min |g_i|)^p] under the n-dimensional cosine law, for p > 0.

    Independence of radius and angle factors the moment:
    2^{p/2} Gamma(1 + p/2) * (2n/pi) * integral_0^{pi/2n} sin^p theta d theta.
    """
    n = _check_n(n)
    p = float(p)
    if not p > 0.0:
        raise ValueError(f"moment exponent must be positive, got {p}")
    upper = math.pi / (2 * n)
    res = integrate(lambda theta: math.sin(theta) ** p if theta > 0.0 else 0.0,
                    0.0, upper, abs_tol=0.5e-12 * upper)
    radial = 2.0 ** (0.5 * p) * gamma(1.0 + 0.5 * p)
    return radial * (2 * n / math.pi) * res.value


def cos_moment_p2(n: int) -> float:
    """Closed form for the second moment: 1 - n sin(pi/n) / pi."""
    n = _check_n(n)
    return 1.0 - n * math.sin(math.pi / n) / math.pi


def identity_tail(n: int, t: float) -> float:
    """P[min |g_i| >= t] for n independent standard Gaussians: erfc(t/sqrt 2)^n."""
    n = _check_n(n)
    t = float(t)
    if t < 0.0 or t != t:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    return math.erfc(t / math.sqrt(2.0)) ** n


def sample_cos_min(n: int, count: int, stream: RngStream) -> np.ndarray:
    """Draw ``count`` exact samples of the cosine-law minimum.

    Draw order: 2*count uniforms from the stream; the first half feeds the
    Rayleigh radii, the second half the angles theta = (pi/2n) * u.
    """
    n = _check_n(n)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    u = stream.open().uniforms(2 * count)
    radius = rayleigh_from_uniforms(u[:count])
    theta = (math.pi / (2 * n)) * u[count:]
    return radius * np.sin(theta)


@dataclass(frozen=True)
class CosineLaw:
    """The law of the minimum absolute coordinate for the cosine family."""

    n: int

    def __post_init__(self):
        _check_n(self.n)

    def tail(self, t: float) -> float:
        return cos_tail(self.n, t)

    def moment(self, p: float) -> float:
        return cos_moment(self.n, p)

    def moment_p2(self) -> float:
        return cos_moment_p2(self.n)

    def sample(self, count: int, stream: RngStream) -> np.ndarray:
        return sample_cos_min(self.n, count, stream)
