"""Hot numeric kernels with numba and pure-numpy implementations.

Every kernel exists twice: an ``@njit`` version and a vectorized numpy
version with the identical floating-point operation order, so the two
backends agree bit for bit wherever no BLAS reduction is involved (the
interval box kernel is exactly reproducible; dot-product kernels may
differ from BLAS by the usual reassociation ulps).

Backend selection: environment variable ``GAUSSMIN_BACKEND`` set to
``numpy`` forces the fallback path; ``numba`` (the default when importable)
uses the JIT kernels. ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_VAR = "GAUSSMIN_BACKEND"

_requested = os.environ.get(_ENV_VAR, "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {_requested!r}")

_HAVE_NUMBA = False
if _requested != "numpy":
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        if _requested == "numba":
            raise
        _HAVE_NUMBA = False

BACKEND = "numba" if _HAVE_NUMBA else "numpy"

_INF = np.inf


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def min_abs_dot_numpy(points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Per row of ``points``: min over rows of ``vectors`` of |<point, vector>|."""
    return np.abs(points @ vectors.T).min(axis=1)


def _nxt_dn(x):
    return np.nextafter(x, -_INF)


def _nxt_up(x):
    return np.nextafter(x, _INF)


def simplex_integrand_boxes_numpy(subdivisions: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-box interval contributions to the simplex second-moment integral.

    Partitions [0,1]^2 into ``subdivisions``^2 boxes with float edges i/N and
    evaluates the outward-rounded interval extension of

        s * (1 - s - s*t)^2 / (1 + s^2 + s^2 t^2)^(5/2)

    times the box area on each box. Returns (lo, hi) arrays flattened in
    (s-index major, t-index minor) order; the caller reduces them. The 12/pi
    prefactor is applied by the caller in interval arithmetic.
    """
    n = int(subdivisions)
    edges = np.arange(n + 1, dtype=np.float64) / n
    s_lo = np.repeat(edges[:-1], n)
    s_hi = np.repeat(edges[1:], n)
    t_lo = np.tile(edges[:-1], n)
    t_hi = np.tile(edges[1:], n)

    def iadd(alo, ahi, blo, bhi):
        return _nxt_dn(alo + blo), _nxt_up(ahi + bhi)

    def isub(alo, ahi, blo, bhi):
        return _nxt_dn(alo - bhi), _nxt_up(ahi - blo)

    def imul(alo, ahi, blo, bhi):
        p1 = alo * blo
        p2 = alo * bhi
        p3 = ahi * blo
        p4 = ahi * bhi
        lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        return _nxt_dn(lo), _nxt_up(hi)

    def idiv(alo, ahi, blo, bhi):
        # denominator strictly positive in this kernel
        q1 = alo / blo
        q2 = alo / bhi
        q3 = ahi / blo
        q4 = ahi / bhi
        lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
        hi = np.maximum(np.maximum(q1, q2), np.maximum(q3, q4))
        return _nxt_dn(lo), _nxt_up(hi)

    def ipow2(alo, ahi):
        # even power: split at zero so sign changes stay tight
        big = np.maximum(alo * alo, ahi * ahi)
        small = np.minimum(alo * alo, ahi * ahi)
        straddles = (alo < 0.0) & (ahi > 0.0)
        lo = np.where(straddles, 0.0, np.maximum(0.0, _nxt_dn(small)))
        hi = _nxt_up(big)
        return lo, hi

    def isqrt(alo, ahi):
        return np.maximum(0.0, _nxt_dn(np.sqrt(alo))), _nxt_up(np.sqrt(ahi))

    one = np.float64(1.0)
    ds_lo, ds_hi = isub(s_hi, s_hi, s_lo, s_lo)
    dt_lo, dt_hi = isub(t_hi, t_hi, t_lo, t_lo)
    area_lo, area_hi = imul(ds_lo, ds_hi, dt_lo, dt_hi)

    s2_lo, s2_hi = ipow2(s_lo, s_hi)
    t2_lo, t2_hi = ipow2(t_lo, t_hi)
    s2t2_lo, s2t2_hi = imul(s2_lo, s2_hi, t2_lo, t2_hi)
    d_lo, d_hi = iadd(s2_lo, s2_hi, s2t2_lo, s2t2_hi)
    d_lo, d_hi = iadd(one, one, d_lo, d_hi)
    rt_lo, rt_hi = isqrt(d_lo, d_hi)
    d2_lo, d2_hi = ipow2(d_lo, d_hi)
    den_lo, den_hi = imul(rt_lo, rt_hi, d2_lo, d2_hi)

    st_lo, st_hi = imul(s_lo, s_hi, t_lo, t_hi)
    lin_lo, lin_hi = isub(one, one, s_lo, s_hi)
    lin_lo, lin_hi = isub(lin_lo, lin_hi, st_lo, st_hi)
    lin2_lo, lin2_hi = ipow2(lin_lo, lin_hi)
    num_lo, num_hi = imul(s_lo, s_hi, lin2_lo, lin2_hi)

    f_lo, f_hi = idiv(num_lo, num_hi, den_lo, den_hi)
    c_lo, c_hi = imul(f_lo, f_hi, area_lo, area_hi)
    return c_lo, c_hi


def signed_perm_max_quad_numpy(a: np.ndarray, b: np.ndarray,
                               perms: np.ndarray, signs: np.ndarray) -> float:
    """max over permutations P and sign vectors s of s^T ((PaP^T) * b) s.

    ``*`` is the elementwise product; this is the only part of the signed
    permutation Frobenius distance that depends on (P, s).
    """
    best = -np.inf
    chunk = max(1, (1 << 22) // max(1, signs.shape[0] * a.shape[0]))
    for start in range(0, perms.shape[0], chunk):
        pc = perms[start:start + chunk]
        conj = a[pc[:, :, None], pc[:, None, :]]  # (c, n, n)
        q = conj * b[None, :, :]
        quad = np.einsum("si,cij,sj->cs", signs, q, signs)
        m = quad.max()
        if m > best:
            best = m
    return float(best)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _min_abs_dot_nb(points, vectors):
        m, k = points.shape
        n = vectors.shape[0]
        out = np.empty(m)
        for i in range(m):
            best = _INF
            for j in range(n):
                acc = 0.0
                for l in range(k):
                    acc += points[i, l] * vectors[j, l]
                a = abs(acc)
                if a < best:
                    best = a
            out[i] = best
        return out

    @njit(cache=True)
    def _simplex_boxes_nb(subdivisions):
        n = subdivisions
        edges = np.arange(n + 1).astype(np.float64) / n
        total = n * n
        out_lo = np.empty(total)
        out_hi = np.empty(total)
        one_lo = 1.0
        one_hi = 1.0
        for i in range(n):
            slo = edges[i]
            shi = edges[i + 1]
            ds_lo = np.nextafter(shi - slo, -_INF)
            ds_hi = np.nextafter(shi - slo, _INF)
            # ipow2 of [slo, shi]: s >= 0 here
            s2_lo = max(0.0, np.nextafter(slo * slo, -_INF))
            s2_hi = np.nextafter(shi * shi, _INF)
            for j in range(n):
                tlo = edges[j]
                thi = edges[j + 1]
                dt_lo = np.nextafter(thi - tlo, -_INF)
                dt_hi = np.nextafter(thi - tlo, _INF)
                # area = ds * dt, all nonnegative
                a1 = ds_lo * dt_lo
                a2 = ds_lo * dt_hi
                a3 = ds_hi * dt_lo
                a4 = ds_hi * dt_hi
                area_lo = np.nextafter(min(min(a1, a2), min(a3, a4)), -_INF)
                area_hi = np.nextafter(max(max(a1, a2), max(a3, a4)), _INF)

                t2_lo = max(0.0, np.nextafter(tlo * tlo, -_INF))
                t2_hi = np.nextafter(thi * thi, _INF)

                m1 = s2_lo * t2_lo
                m2 = s2_lo * t2_hi
                m3 = s2_hi * t2_lo
                m4 = s2_hi * t2_hi
                s2t2_lo = np.nextafter(min(min(m1, m2), min(m3, m4)), -_INF)
                s2t2_hi = np.nextafter(max(max(m1, m2), max(m3, m4)), _INF)

                d_lo = np.nextafter(s2_lo + s2t2_lo, -_INF)
                d_hi = np.nextafter(s2_hi + s2t2_hi, _INF)
                d_lo = np.nextafter(one_lo + d_lo, -_INF)
                d_hi = np.nextafter(one_hi + d_hi, _INF)

                rt_lo = max(0.0, np.nextafter(math.sqrt(d_lo), -_INF))
                rt_hi = np.nextafter(math.sqrt(d_hi), _INF)
                # d >= 1 so d^2 is monotone
                d2_lo = max(0.0, np.nextafter(min(d_lo * d_lo, d_hi * d_hi), -_INF))
                d2_hi = np.nextafter(max(d_lo * d_lo, d_hi * d_hi), _INF)
                e1 = rt_lo * d2_lo
                e2 = rt_lo * d2_hi
                e3 = rt_hi * d2_lo
                e4 = rt_hi * d2_hi
                den_lo = np.nextafter(min(min(e1, e2), min(e3, e4)), -_INF)
                den_hi = np.nextafter(max(max(e1, e2), max(e3, e4)), _INF)

                x1 = slo * tlo
                x2 = slo * thi
                x3 = shi * tlo
                x4 = shi * thi
                st_lo = np.nextafter(min(min(x1, x2), min(x3, x4)), -_INF)
                st_hi = np.nextafter(max(max(x1, x2), max(x3, x4)), _INF)

                lin_lo = np.nextafter(one_lo - shi, -_INF)
                lin_hi = np.nextafter(one_hi - slo, _INF)
                lin_lo2 = np.nextafter(lin_lo - st_hi, -_INF)
                lin_hi2 = np.nextafter(lin_hi - st_lo, _INF)

                big = max(lin_lo2 * lin_lo2, lin_hi2 * lin_hi2)
                small = min(lin_lo2 * lin_lo2, lin_hi2 * lin_hi2)
                if lin_lo2 < 0.0 and lin_hi2 > 0.0:
                    lin2_lo = 0.0
                else:
                    lin2_lo = max(0.0, np.nextafter(small, -_INF))
                lin2_hi = np.nextafter(big, _INF)

                n1 = slo * lin2_lo
                n2 = slo * lin2_hi
                n3 = shi * lin2_lo
                n4 = shi * lin2_hi
                num_lo = np.nextafter(min(min(n1, n2), min(n3, n4)), -_INF)
                num_hi = np.nextafter(max(max(n1, n2), max(n3, n4)), _INF)

                q1 = num_lo / den_lo
                q2 = num_lo / den_hi
                q3 = num_hi / den_lo
                q4 = num_hi / den_hi
                f_lo = np.nextafter(min(min(q1, q2), min(q3, q4)), -_INF)
                f_hi = np.nextafter(max(max(q1, q2), max(q3, q4)), _INF)

                c1 = f_lo * area_lo
                c2 = f_lo * area_hi
                c3 = f_hi * area_lo
                c4 = f_hi * area_hi
                out_lo[i * n + j] = np.nextafter(min(min(c1, c2), min(c3, c4)), -_INF)
                out_hi[i * n + j] = np.nextafter(max(max(c1, c2), max(c3, c4)), _INF)
        return out_lo, out_hi

    @njit(cache=True)
    def _signed_perm_max_quad_nb(a, b, perms, signs):
        n = a.shape[0]
        q = np.empty((n, n))
        best = -_INF
        for p in range(perms.shape[0]):
            for i in range(n):
                pi = perms[p, i]
                for j in range(n):
                    q[i, j] = a[pi, perms[p, j]] * b[i, j]
            for si in range(signs.shape[0]):
                acc = 0.0
                for i in range(n):
                    row = 0.0
                    for j in range(n):
                        row += signs[si, j] * q[i, j]
                    acc += signs[si, i] * row
                if acc > best:
                    best = acc
        return best

    def min_abs_dot_numba(points, vectors):
        return _min_abs_dot_nb(np.ascontiguousarray(points), np.ascontiguousarray(vectors))

    def simplex_integrand_boxes_numba(subdivisions):
        return _simplex_boxes_nb(int(subdivisions))

    def signed_perm_max_quad_numba(a, b, perms, signs):
        return float(_signed_perm_max_quad_nb(
            np.ascontiguousarray(a), np.ascontiguousarray(b),
            np.ascontiguousarray(perms), np.ascontiguousarray(signs)))

    min_abs_dot = min_abs_dot_numba
    simplex_integrand_boxes = simplex_integrand_boxes_numba
    signed_perm_max_quad = signed_perm_max_quad_numba
else:  # pragma: no cover - depends on environment
    min_abs_dot = min_abs_dot_numpy
    simplex_integrand_boxes = simplex_integrand_boxes_numpy
    signed_perm_max_quad = signed_perm_max_quad_numpy
