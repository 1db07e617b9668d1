"""Spherical zones and the geometric route to the minimum's law.

A zone Z(u, alpha) on the unit sphere S^{d-1} is the set of directions v
with |<v, u>| <= sin(alpha). The law of the minimum absolute coordinate
reduces to the expected normalized measure of a union of such zones with
a radius-dependent half-width, which is what slab_prob_via_zones
estimates. The scan compares the evenly-spaced union against random
configurations of the same size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .corrmat import CorrelationMatrix, GramFactor, gram_factor
from .montecarlo import Z99, DOMINANCE_GUARD_SES
from .quadrature import integrate
from .streams import RngStream

__all__ = [
    "ZoneConfig", "MeasureEstimate", "ZoneScanReport",
    "evenly_spaced_config", "single_zone_measure",
    "union_measure_mc", "union_measure_d2_exact",
    "alpha_of", "slab_prob_via_zones", "zone_conjecture_scan",
]

UNIT_NORM_TOL = 1e-12
# slack used when deciding that arcs touch or that the circle is covered;
# absorbs the last-ulp noise of representing directions as float angles
_ARC_TOL = 1e-12

_BLOCK = 1 << 18


@dataclass(frozen=True)
class ZoneConfig:
    """A common half-width alpha and the unit center directions of each zone."""

    d: int
    alpha: float
    centers: np.ndarray

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"ambient dimension must be >= 2, got {self.d}")
        if not (0.0 <= self.alpha <= math.pi / 2):
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")
        c = np.asarray(self.centers, dtype=np.float64)
        if c.ndim != 2 or c.shape[1] != self.d or c.shape[0] == 0:
            raise ValueError(f"centers must have shape (n, {self.d}) with n >= 1")
        norms = np.linalg.norm(c, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValueError("zone centers must be unit vectors")
        c.setflags(write=False)
        object.__setattr__(self, "centers", c)

    @property
    def n(self) -> int:
        return self.centers.shape[0]


@dataclass(frozen=True)
class MeasureEstimate:
    """Normalized spherical measure with uncertainty; exact results carry half_width 0."""

    value: float
    half_width: float
    method: str

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"measure must lie in [0, 1], got {self.value}")
        if self.half_width < 0.0:
            raise ValueError("half width must be nonnegative")
        if self.method not in ("exact", "monte_carlo"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class ZoneScanReport:
    """Evenly-spaced union measure against random configurations of equal size."""

    even: MeasureEstimate
    random_values: np.ndarray
    exceedance_zs: np.ndarray
    max_random: float
    max_exceedance_z: float
    flagged: bool
    samples: int

    def to_json_dict(self) -> dict:
        return {
            "even_measure": self.even.value,
            "even_half_width": self.even.half_width,
            "trials": int(self.random_values.size),
            "max_random": float(self.max_random),
            "max_exceedance_z": float(self.max_exceedance_z),
            "flagged": bool(self.flagged),
            "samples": int(self.samples),
        }


def evenly_spaced_config(n: int, d: int, alpha: float) -> ZoneConfig:
    """Centers at angles (j-1) pi / n, j = 1..n, in a fixed 2-plane of R^d."""
    if n < 1:
        raise ValueError(f"need at least one zone, got n={n}")
    centers = np.zeros((n, d), dtype=np.float64)
    for j in range(n):
        angle = j * math.pi / n
        centers[j, 0] = math.cos(angle)
        centers[j, 1] = math.sin(angle)
    return ZoneConfig(d=d, alpha=alpha, centers=centers)


def single_zone_measure(d: int, alpha: float) -> float:
    """Exact normalized measure of one zone Z(u, alpha) on S^{d-1}.

    Writing v's coordinate along u as sin(phi) turns the measure into
    int_{-alpha}^{alpha} cos(phi)^{d-2} dphi over the same integral on
    [-pi/2, pi/2]; the integrand is smooth, so the quadrature is exact to
    its 1e-12 target. d = 2 reduces to 2 alpha / pi, d = 3 to sin(alpha).
    """
    if d < 2:
        raise ValueError(f"ambient dimension must be >= 2, got {d}")
    if not (0.0 <= alpha <= math.pi / 2):
        raise ValueError(f"alpha must lie in [0, pi/2], got {alpha}")
    if alpha == 0.0:
        return 0.0
    f = lambda phi: math.cos(phi) ** (d - 2)
    num = integrate(f, -alpha, alpha)
    den = integrate(f, -math.pi / 2, math.pi / 2)
    return min(1.0, max(0.0, num.value / den.value))


def _normalized_gaussians(cursor, count: int, d: int) -> np.ndarray:
    g = cursor.gaussian_matrix(count, d)
    norms = np.linalg.norm(g, axis=1)
    # a zero row has probability ~2^-53 per sample; map it to a fixed
    # direction rather than dividing by zero
    bad = norms == 0.0
    if np.any(bad):
        g[bad, 0] = 1.0
        norms[bad] = 1.0
    return g / norms[:, None]


def union_measure_mc(config: ZoneConfig, count: int, stream: RngStream) -> MeasureEstimate:
    """Monte Carlo measure of the union of a config's zones.

    Uniform directions come from normalized Gaussians; a direction is in
    the union when its smallest |dot| against the centers is <= sin(alpha).
    """
    if count < 1000:
        raise ValueError(f"count must be >= 1000, got {count}")
    sin_alpha = math.sin(config.alpha)
    covers_all = sin_alpha >= 1.0
    cursor = stream.open()
    hits = 0
    done = 0
    while done < count:
        block = min(_BLOCK, count - done)
        v = _normalized_gaussians(cursor, block, config.d)
        if covers_all:
            hits += block
        else:
            m = _kernels.min_abs_dot(v, config.centers)
            hits += int(np.count_nonzero(m <= sin_alpha))
        done += block
    est = hits / count
    half = Z99 * math.sqrt(est * (1.0 - est) / count)
    return MeasureEstimate(value=est, half_width=half, method="monte_carlo")


def union_measure_d2_exact(config: ZoneConfig) -> MeasureEstimate:
    """Exact union measure on the circle by merging arcs.

    Each zone contributes the two arcs of half-width alpha around the
    directions perpendicular to its center. Arcs are treated as closed
    with tolerance _ARC_TOL, so a family that covers the circle with
    touching endpoints (the critical half-width) measures exactly 1.
    """
    if config.d != 2:
        raise ValueError(f"exact arc union needs d = 2, got d = {config.d}")
    if config.alpha == 0.0:
        return MeasureEstimate(value=0.0, half_width=0.0, method="exact")
    two_pi = 2.0 * math.pi
    arcs = []
    for x, y in config.centers:
        base = math.atan2(y, x)
        for perp in (base + math.pi / 2, base - math.pi / 2):
            start = (perp - config.alpha) % two_pi
            arcs.append((start, 2.0 * config.alpha))
    # split arcs crossing the seam so every piece lies inside [0, 2 pi]
    pieces = []
    for start, length in arcs:
        end = start + length
        if end <= two_pi:
            pieces.append((start, end))
        else:
            pieces.append((start, two_pi))
            pieces.append((0.0, end - two_pi))
    pieces.sort()
    merged_total = 0.0
    cur_lo, cur_hi = pieces[0]
    for lo, hi in pieces[1:]:
        if lo <= cur_hi + _ARC_TOL:
            cur_hi = max(cur_hi, hi)
        else:
            merged_total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
    merged_total += cur_hi - cur_lo
    blank = two_pi - merged_total
    if blank <= (2 * len(pieces) + 2) * _ARC_TOL:
        value = 1.0
    else:
        value = min(1.0, max(0.0, merged_total / two_pi))
    return MeasureEstimate(value=value, half_width=0.0, method="exact")


def alpha_of(t: float, r: float) -> float:
    """Zone half-width for threshold t at radius r: arcsin(t/r), capped at pi/2."""
    if not r > 0.0:
        raise ValueError(f"radius must be positive, got {r}")
    if t < 0.0 or t != t:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    if r <= t:
        return math.pi / 2
    return math.asin(t / r)


def slab_prob_via_zones(matrix, t: float, count: int, stream: RngStream) -> MeasureEstimate:
    """Estimate P[M(Sigma) <= t] through the zone identity.

    Conditioned on the radius r of the underlying rank-k Gaussian, the
    event M <= t is the event that the direction falls in the union of
    zones of half-width alpha_of(t, r) around the Gram rows; averaging
    the indicator over radius and direction together gives the estimate.
    """
    if not t > 0.0:
        raise ValueError(f"threshold must be positive, got {t}")
    if count < 1000:
        raise ValueError(f"count must be >= 1000, got {count}")
    gf = matrix if isinstance(matrix, GramFactor) else gram_factor(matrix)
    cursor = stream.open()
    hits = 0
    done = 0
    while done < count:
        block = min(_BLOCK, count - done)
        g = cursor.gaussian_matrix(block, gf.k)
        r = np.linalg.norm(g, axis=1)
        bad = r == 0.0
        if np.any(bad):
            g[bad, 0] = 1.0
            r[bad] = 1.0
        v = g / r[:, None]
        m = _kernels.min_abs_dot(v, gf.vectors)
        sin_alpha = np.where(r <= t, 1.0, np.sin(np.arcsin(np.minimum(t / r, 1.0))))
        hits += int(np.count_nonzero(m <= sin_alpha))
        done += block
    est = hits / count
    half = Z99 * math.sqrt(est * (1.0 - est) / count)
    return MeasureEstimate(value=est, half_width=half, method="monte_carlo")


def zone_conjecture_scan(n: int, d: int, alpha: float, trials: int, count: int,
                         stream: RngStream) -> ZoneScanReport:
    """Compare the evenly-spaced union measure against random center sets.

    All configurations are evaluated on the same sample of directions
    (drawn from stream.split(0)); random trial centers come from
    stream.split(1 + trial). Each trial gets a paired z-score for the
    hypothesis that its union measure exceeds the evenly-spaced one, and
    the report flags the scan when any z exceeds DOMINANCE_GUARD_SES.
    """
    if trials < 1:
        raise ValueError(f"need at least one random trial, got {trials}")
    if count < 1000:
        raise ValueError(f"count must be >= 1000, got {count}")
    even = evenly_spaced_config(n, d, alpha)
    trial_centers = []
    for trial in range(trials):
        g = stream.split(1 + trial).gaussian_matrix(n, d)
        norms = np.linalg.norm(g, axis=1)
        if np.any(norms == 0.0):
            raise RuntimeError("degenerate random center; reseed the scan")
        trial_centers.append(g / norms[:, None])
    sin_alpha = math.sin(alpha)
    cursor = stream.split(0).open()
    hits_even = 0
    hits_rand = np.zeros(trials, dtype=np.int64)
    # paired counts: random covers but even does not, and vice versa
    only_rand = np.zeros(trials, dtype=np.int64)
    only_even = np.zeros(trials, dtype=np.int64)
    done = 0
    while done < count:
        block = min(_BLOCK, count - done)
        v = _normalized_gaussians(cursor, block, d)
        in_even = _kernels.min_abs_dot(v, even.centers) <= sin_alpha
        hits_even += int(np.count_nonzero(in_even))
        for trial in range(trials):
            in_rand = _kernels.min_abs_dot(v, trial_centers[trial]) <= sin_alpha
            hits_rand[trial] += int(np.count_nonzero(in_rand))
            only_rand[trial] += int(np.count_nonzero(in_rand & ~in_even))
            only_even[trial] += int(np.count_nonzero(~in_rand & in_even))
        done += block
    even_est = hits_even / count
    even_half = Z99 * math.sqrt(even_est * (1.0 - even_est) / count)
    rand_vals = hits_rand / count
    # paired one-sided z for mean(1_rand - 1_even) > 0
    zs = np.zeros(trials, dtype=np.float64)
    for trial in range(trials):
        mean_diff = (only_rand[trial] - only_even[trial]) / count
        mean_sq = (only_rand[trial] + only_even[trial]) / count
        var = max(0.0, mean_sq - mean_diff * mean_diff)
        se = math.sqrt(var / count)
        zs[trial] = mean_diff / se if se > 0.0 else 0.0
    max_z = float(zs.max()) if trials else 0.0
    return ZoneScanReport(
        even=MeasureEstimate(value=even_est, half_width=even_half, method="monte_carlo"),
        random_values=rand_vals,
        exceedance_zs=zs,
        max_random=float(rand_vals.max()) if trials else 0.0,
        max_exceedance_z=max_z,
        flagged=bool(max_z > DOMINANCE_GUARD_SES),
        samples=count,
    )
