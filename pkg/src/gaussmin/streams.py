"""Deterministic seeded random streams.

Every stochastic routine in this package draws from an :class:`RngStream`,
a value type keyed by ``(seed, stream_id)``. Uniforms come from the Philox
counter-based generator (keyed, not sequentially seeded), so distinct
stream ids give statistically independent sequences and results never
depend on scheduling or worker count. Gaussians are produced by an
explicit Box-Muller transform on those uniforms rather than the library's
normal sampler, keeping the draw order a documented part of the contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * np.pi


def _mix64(x: int) -> int:
    """SplitMix64 finalizer; spreads stream ids so child keys never collide
    with sibling or parent keys in practice."""
    x &= _MASK64
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


@dataclass(frozen=True)
class RngStream:
    """Immutable handle for one reproducible random sequence.

    ``(seed, stream_id)`` fully determines the output. The same stream can
    be opened any number of times and always replays the same sequence.
    """

    seed: int
    stream_id: int = 0

    def open(self) -> "StreamCursor":
        """Start reading this stream from the beginning."""
        key = (self.seed & _MASK64) | ((self.stream_id & _MASK64) << 64)
        return StreamCursor(Generator(Philox(key=key)))

    def split(self, index: int) -> "RngStream":
        """Derive an independent child stream.

        Children of distinct (parent, index) pairs get well-separated
        Philox keys; use one child per worker/chunk/matrix so parallel
        layouts cannot change results.
        """
        child = _mix64((self.stream_id & _MASK64) * 0x9E3779B97F4A7C15 + index + 1)
        return RngStream(self.seed, child)

    # Convenience one-shot draws: each opens a fresh cursor, so the result
    # is a pure function of (seed, stream_id, count).

    def uniforms(self, count: int) -> np.ndarray:
        return self.open().uniforms(count)

    def gaussians(self, count: int) -> np.ndarray:
        return self.open().gaussians(count)

    def gaussian_matrix(self, rows: int, cols: int) -> np.ndarray:
        return self.open().gaussian_matrix(rows, cols)


class StreamCursor:
    """Stateful reader over one stream, for chunked consumption."""

    def __init__(self, generator: Generator):
        self._gen = generator

    def uniforms(self, count: int) -> np.ndarray:
        """``count`` float64 uniforms in [0, 1)."""
        return self._gen.random(int(count))

    def gaussians(self, count: int) -> np.ndarray:
        """``count`` standard normals via Box-Muller.

        Draw order: 2*ceil(count/2) uniforms, first half feeding the radii
        r = sqrt(-2 log(1 - u)) and second half the angles, then the
        cos/sin pair of each (r, angle) interleaved.
        """
        count = int(count)
        pairs = (count + 1) // 2
        u = self.uniforms(2 * pairs)
        rad = np.sqrt(-2.0 * np.log1p(-u[:pairs]))
        ang = _TWO_PI * u[pairs:]
        out = np.empty(2 * pairs)
        out[0::2] = rad * np.cos(ang)
        out[1::2] = rad * np.sin(ang)
        return out[:count]

    def gaussian_matrix(self, rows: int, cols: int) -> np.ndarray:
        """(rows, cols) standard normals, filled row-major."""
        return self.gaussians(int(rows) * int(cols)).reshape(int(rows), int(cols))


def rayleigh_from_uniforms(u: np.ndarray) -> np.ndarray:
    """Map uniforms in [0,1) to radii r with r^2 chi-squared(2 dof)."""
    return np.sqrt(-2.0 * np.log1p(-u))
