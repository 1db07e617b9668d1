"""Correlation matrices: construction, validation, Gram factorization, and
comparison up to signed permutations.

A correlation matrix here is symmetric positive semidefinite with unit
diagonal. The minimum of the absolute coordinates of a Gaussian vector with
such a covariance is invariant under conjugating the matrix by coordinate
permutations and sign flips, so matrix comparison is done modulo that group.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .streams import RngStream

PSD_TOL = 1e-9
RANK_TOL = 1e-9
UNIT_NORM_TOL = 1e-12
GRAM_RECONSTRUCTION_TOL = 1e-8

# exhaustive signed-permutation search: n! * 2^(n-1) terms
EXHAUSTIVE_MAX_N = 10
EXHAUSTIVE_WARN_N = 9


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric PSD matrix with unit diagonal, stored as float64."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"correlation matrix must be square, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_json_dict(self) -> dict:
        return {"n": self.n, "entries": self.entries.tolist()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "CorrelationMatrix":
        entries = np.asarray(data["entries"], dtype=np.float64)
        if int(data["n"]) != entries.shape[0]:
            raise ValueError("matrix JSON 'n' does not match entries shape")
        return cls(entries)


@dataclass(frozen=True)
class GramFactor:
    """Unit vectors whose pairwise inner products realize a correlation matrix."""

    n: int
    k: int
    vectors: np.ndarray  # (n, k), unit rows

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.shape != (self.n, self.k):
            raise ValueError(f"expected vectors of shape {(self.n, self.k)}, got {vectors.shape}")
        norms = np.linalg.norm(vectors, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValueError("Gram factor rows must be unit vectors")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    def gram(self) -> np.ndarray:
        g = self.vectors @ self.vectors.T
        return 0.5 * (g + g.T)


@dataclass(frozen=True)
class SignedPermutation:
    """Coordinate permutation composed with per-coordinate sign flips."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        if len(self.signs) != n or any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be a length-n vector of +-1")

    def apply(self, matrix):
        """Conjugate: D P m P^T D with D = diag(signs).

        Accepts a CorrelationMatrix or a plain array and returns the same kind.
        """
        wrap = isinstance(matrix, CorrelationMatrix)
        m = np.asarray(matrix.entries if wrap else matrix, dtype=np.float64)
        p = np.asarray(self.perm)
        s = np.asarray(self.signs, dtype=np.float64)
        out = (s[:, None] * s[None, :]) * m[np.ix_(p, p)]
        if wrap:
            np.fill_diagonal(out, 1.0)
            return CorrelationMatrix(out)
        return out


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the correlation-matrix checks; failures are encoded, not raised."""

    n: int
    unit_diagonal: bool
    max_diagonal_deviation: float
    symmetric: bool
    max_asymmetry: float
    entries_in_range: bool
    worst_entry: float
    min_eigenvalue: float
    psd: bool
    first_violation: str = ""

    @property
    def valid(self) -> bool:
        return self.unit_diagonal and self.symmetric and self.entries_in_range and self.psd


def _as_entries(m) -> np.ndarray:
    if isinstance(m, CorrelationMatrix):
        return m.entries
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def cosine_covariance(n: int) -> CorrelationMatrix:
    """Rank-two family with entries cos(pi*(i-j)/n): the Gram matrix of n
    directions evenly spaced over a half turn of the plane."""
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = np.arange(n)
    gaps = np.abs(idx[:, None] - idx[None, :])  # symmetric by construction
    return CorrelationMatrix(np.cos(np.pi * gaps / n))


def simplex_covariance(n: int) -> CorrelationMatrix:
    """Gram matrix of the n vertices of a regular simplex in R^(n-1):
    unit diagonal, off-diagonal -1/(n-1)."""
    if n < 2:
        raise ValueError("simplex covariance needs n >= 2")
    entries = np.full((n, n), -1.0 / (n - 1))
    np.fill_diagonal(entries, 1.0)
    return CorrelationMatrix(entries)


def identity_covariance(n: int) -> CorrelationMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    return CorrelationMatrix(np.eye(n))


def random_correlation(n: int, rank: int, seed: int) -> CorrelationMatrix:
    """Gram matrix of n independent uniform unit vectors in R^rank.

    Uniformity comes from normalizing standard Gaussian vectors, which is
    exact by rotation invariance. Deterministic in ``seed``.
    """
    if rank < 1 or rank > n:
        raise ValueError(f"rank must satisfy 1 <= rank <= n, got rank={rank}, n={n}")
    vectors = RngStream(seed).gaussian_matrix(n, rank)
    norms = np.linalg.norm(vectors, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("degenerate zero-norm Gaussian draw")
    vectors = vectors / norms[:, None]
    return CorrelationMatrix(_gram_to_correlation(vectors))


def _gram_to_correlation(unit_vectors: np.ndarray) -> np.ndarray:
    """Gram matrix of unit rows, cleaned to satisfy the exact invariants
    (symmetry, unit diagonal, entries within [-1, 1])."""
    g = unit_vectors @ unit_vectors.T
    g = 0.5 * (g + g.T)
    g = np.clip(g, -1.0, 1.0)
    np.fill_diagonal(g, 1.0)
    return g


def validate(m) -> ValidationReport:
    """Check unit diagonal, symmetry, entry range and near-PSD spectrum.

    PSD is decided by a symmetric eigendecomposition with the smallest
    eigenvalue allowed down to -PSD_TOL, because the interesting families
    (simplex, cosine) are exactly singular.
    """
    a = _as_entries(m)
    n = a.shape[0]

    diag_dev = np.abs(np.diag(a) - 1.0)
    unit_diag = bool(np.all(diag_dev == 0.0))
    asym = np.abs(a - a.T)
    symmetric = bool(np.all(asym == 0.0))
    worst = float(np.max(np.abs(a))) if n else 1.0
    in_range = bool(worst <= 1.0 + PSD_TOL)
    min_eig = float(np.linalg.eigvalsh(0.5 * (a + a.T)).min())
    psd = bool(min_eig >= -PSD_TOL)

    first = ""
    if not unit_diag:
        i = int(np.argmax(diag_dev))
        first = f"diagonal entry ({i},{i}) = {a[i, i]!r} is not exactly 1"
    elif not symmetric:
        i, j = np.unravel_index(int(np.argmax(asym)), a.shape)
        first = f"asymmetric pair ({i},{j})"
    elif not in_range:
        i, j = np.unravel_index(int(np.argmax(np.abs(a))), a.shape)
        first = f"entry ({i},{j}) = {a[i, j]!r} outside [-1, 1]"
    elif not psd:
        first = f"minimum eigenvalue {min_eig!r} below -{PSD_TOL}"

    return ValidationReport(
        n=n,
        unit_diagonal=unit_diag,
        max_diagonal_deviation=float(diag_dev.max()) if n else 0.0,
        symmetric=symmetric,
        max_asymmetry=float(asym.max()) if n else 0.0,
        entries_in_range=in_range,
        worst_entry=worst,
        min_eigenvalue=min_eig,
        psd=psd,
        first_violation=first,
    )


def gram_factor(m) -> GramFactor:
    """Factor a correlation matrix into unit vectors via eigendecomposition.

    The rank is cut at eigenvalue RANK_TOL (the families of interest are
    rank deficient by design, so triangular factorizations are unusable),
    and rows are renormalized afterwards to restore exact unit norms.
    """
    a = _as_entries(m)
    report = validate(a)
    if not report.valid:
        raise ValueError(f"not a valid correlation matrix: {report.first_violation}")
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    keep = w > RANK_TOL
    k = int(np.count_nonzero(keep))
    vectors = v[:, keep] * np.sqrt(w[keep])[None, :]
    norms = np.linalg.norm(vectors, axis=1)
    vectors = vectors / norms[:, None]
    gf = GramFactor(n=a.shape[0], k=k, vectors=vectors)
    err = np.max(np.abs(gf.gram() - a))
    if err > GRAM_RECONSTRUCTION_TOL:
        raise ValueError(f"Gram factorization failed to reproduce the matrix (error {err:.3e})")
    return gf


def _all_signs(n: int) -> np.ndarray:
    """All sign vectors with the first component fixed to +1 (s and -s act
    identically under conjugation)."""
    count = 1 << max(0, n - 1)
    bits = (np.arange(count)[:, None] >> np.arange(max(0, n - 1))[None, :]) & 1
    signs = np.ones((count, n))
    if n > 1:
        signs[:, 1:] = 1.0 - 2.0 * bits
    return signs


def canonical_distance(a, b) -> float:
    """Frobenius distance between two matrices minimized over all signed
    permutations of one of them; zero exactly when they are equal up to a
    coordinate relabeling and sign flips.

    Exhaustive over n! * 2^(n-1) group elements; limited to n <= 10 (use
    canonical_distance_heuristic beyond that).
    """
    ea = _as_entries(a)
    eb = _as_entries(b)
    n = ea.shape[0]
    if eb.shape[0] != n:
        raise ValueError(f"dimension mismatch: {n} vs {eb.shape[0]}")
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"exhaustive signed-permutation search is infeasible for n={n} "
            f"(limit {EXHAUSTIVE_MAX_N}); use canonical_distance_heuristic for a "
            "non-certified upper bound")
    if n >= EXHAUSTIVE_WARN_N:
        warnings.warn(f"exhaustive signed-permutation search over n={n} is slow "
                      f"({n}! * 2^{n - 1} candidates)", RuntimeWarning, stacklevel=2)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    signs = _all_signs(n)
    # ||DPaP'D - b||^2 = sum(a^2) + sum(b^2) - 2 s'((PaP') * b)s since
    # (s_i s_j)^2 = 1; only the cross term depends on (P, s).
    max_quad = _kernels.signed_perm_max_quad(ea, eb, perms, signs)
    dist_sq = float(np.sum(ea * ea) + np.sum(eb * eb)) - 2.0 * max_quad
    return float(np.sqrt(max(0.0, dist_sq)))


def canonical_distance_heuristic(a, b, restarts: int = 64,
                                 stream: RngStream | None = None) -> float:
    """Non-certified upper bound on canonical_distance for large n.

    Random restarts over permutations with greedy single-coordinate sign
    improvement; the true minimum may be smaller.
    """
    ea = _as_entries(a)
    eb = _as_entries(b)
    n = ea.shape[0]
    if eb.shape[0] != n:
        raise ValueError(f"dimension mismatch: {n} vs {eb.shape[0]}")
    if stream is None:
        stream = RngStream(0)
    cursor = stream.open()
    consts = float(np.sum(ea * ea) + np.sum(eb * eb))
    best_quad = -np.inf
    for _ in range(max(1, restarts)):
        perm = np.argsort(cursor.uniforms(n))
        q = ea[np.ix_(perm, perm)] * eb
        s = np.where(cursor.uniforms(n) < 0.5, -1.0, 1.0)
        improved = True
        while improved:
            improved = False
            for i in range(n):
                # gain from flipping s_i: quad changes by -4 s_i sum_j s_j q_ij (j != i)
                row = s @ q[i] - s[i] * q[i, i]
                if -4.0 * s[i] * row > 1e-15:
                    s[i] = -s[i]
                    improved = True
        quad = float(s @ q @ s)
        if quad > best_quad:
            best_quad = quad
    return float(np.sqrt(max(0.0, consts - 2.0 * best_quad)))


def random_signed_permutation(n: int, stream: RngStream) -> SignedPermutation:
    cursor = stream.open()
    perm = tuple(int(i) for i in np.argsort(cursor.uniforms(n)))
    signs = tuple(1 if u < 0.5 else -1 for u in cursor.uniforms(n))
    return SignedPermutation(perm=perm, signs=signs)


def matrix_from_name(name: str, n: int, seed: int = 0) -> CorrelationMatrix:
    """Build a named family: 'cos', 'simplex', 'identity', or 'random[:rank]'."""
    if name == "cos":
        return cosine_covariance(n)
    if name == "simplex":
        return simplex_covariance(n)
    if name == "identity":
        return identity_covariance(n)
    if name == "random" or name.startswith("random:"):
        rank = n if name == "random" else int(name.split(":", 1)[1])
        return random_correlation(n, rank, seed)
    raise ValueError(f"unknown matrix family {name!r} "
                     "(expected cos, simplex, identity, or random[:rank])")
