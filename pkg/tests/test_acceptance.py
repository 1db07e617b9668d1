"""Acceptance battery.

Each test exercises one numbered acceptance criterion end to end at a
pinned tolerance and prints a single PASS/FAIL line (visible with -s or
in captured output). Statistical criteria use fixed seeds, so the whole
battery is deterministic.
"""

import math
import time

import mpmath as mp
import numpy as np

from gaussmin import corrmat, exactlaw, interval, montecarlo, search, stats, zones
from gaussmin.cli import main as cli_main
from gaussmin.streams import RngStream

SIMPLEX_P2_REFERENCE = 0.1421846678981838732938107


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_certificate(tmp_path):
    t0 = time.perf_counter()
    exit_code = cli_main(["verify", "--subdivisions", "400",
                          "--out-dir", str(tmp_path)])
    cert = interval.verify_counterexample(400)
    elapsed = time.perf_counter() - t0
    cos_ok = 0.099683 <= cert.cosine_bound.lo and cert.cosine_bound.hi <= 0.099684
    simp = cert.simplex_bound
    intersects = simp.lo <= 0.144779 and simp.hi >= 0.139622
    gap = simp.lo - cert.cosine_bound.hi
    ok = (exit_code == 0 and cert.verdict and cos_ok and intersects
          and gap >= 0.03 and elapsed < 60.0)
    _report(1, ok, f"exit={exit_code} cosine=[{cert.cosine_bound.lo:.6f},"
                   f"{cert.cosine_bound.hi:.6f}] simplex=[{simp.lo:.6f},{simp.hi:.6f}] "
                   f"gap={gap:.4f} elapsed={elapsed:.1f}s")


def test_criterion_2_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 33):
        closed = 1.0 - n * math.sin(math.pi / n) / math.pi
        worst = max(worst, abs(exactlaw.cos_moment(n, 2.0) - closed))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 1.0
    _report(2, ok, f"worst |quadrature-closed| = {worst:.2e} over n=1..32, "
                   f"elapsed={elapsed * 1000:.0f}ms")


def test_criterion_3_n3_degeneracy():
    dist = corrmat.canonical_distance(corrmat.cosine_covariance(3),
                                      corrmat.simplex_covariance(3))
    x = montecarlo.sample_min(corrmat.cosine_covariance(3), 10 ** 5, RngStream(301))
    y = montecarlo.sample_min(corrmat.simplex_covariance(3), 10 ** 5, RngStream(302))
    d = stats.ks_2samp(x, y)
    crit = stats.ks_critical_2samp(0.001, x.size, y.size)
    ok = dist < 1e-12 and d < crit
    _report(3, ok, f"canonical_distance={dist:.2e}, KS={d:.5f} < {crit:.5f}")


def test_criterion_4_zone_bridge():
    t0 = time.perf_counter()
    count = 10 ** 6
    hits = 0
    cells = []
    for idx, rank in enumerate((1, 2, 3, 4, 5)):
        m = corrmat.random_correlation(5, rank, seed=400 + idx)
        direct_samples = montecarlo.sample_min(m, count, RngStream(410 + idx))
        for t in (0.2, 0.5, 1.0):
            via = zones.slab_prob_via_zones(m, t, count, RngStream(420 + idx))
            direct = float(np.mean(direct_samples <= t))
            se = math.hypot(via.half_width / montecarlo.Z99,
                            math.sqrt(max(direct * (1 - direct), 1e-12) / count))
            z = abs(via.value - direct) / se
            cells.append(z)
            hits += z < 4.0
    elapsed = time.perf_counter() - t0
    ok = hits >= 14 and elapsed < 120.0
    _report(4, ok, f"{hits}/15 cells within 4 SE (worst z={max(cells):.2f}), "
                   f"elapsed={elapsed:.0f}s")


def test_criterion_5_exact_vs_mc():
    agreements = 0
    details = []
    for n in (2, 4, 8):
        m = corrmat.cosine_covariance(n)
        for p in (1.0, 2.0):
            est = montecarlo.estimate_moment(m, p, 10 ** 6,
                                             RngStream(500 + n, stream_id=int(p)))
            exact = exactlaw.cos_moment(n, p)
            z = abs(est.value - exact) / est.std_error
            agreements += z < 4.0
            details.append(f"n={n},p={p:g}:z={z:.2f}")
    ok = agreements == 6
    _report(5, ok, f"{agreements}/6 cells within 4 SE ({'; '.join(details)})")


def test_criterion_6_dominance_scan():
    t0 = time.perf_counter()
    n = 8
    ts = np.linspace(0.1, 2.0, 20)
    count = 10 ** 6
    cosine = corrmat.cosine_covariance(n)
    references = [("simplex", corrmat.simplex_covariance(n)),
                  ("identity", corrmat.identity_covariance(n))]
    for idx in range(50):
        references.append((f"full{idx}", corrmat.random_correlation(n, n, seed=600 + idx)))
    for idx in range(50):
        references.append((f"rank2_{idx}", corrmat.random_correlation(n, 2, seed=700 + idx)))
    total_flags = 0
    worst = -math.inf
    base = RngStream(6000)
    for i, (label, ref) in enumerate(references):
        rep = montecarlo.dominance_check(cosine, ref, ts, count, base.split(i))
        total_flags += len(rep.flagged_thresholds)
        worst = max(worst, rep.max_z)
    elapsed = time.perf_counter() - t0
    ok = total_flags == 0
    _report(6, ok, f"0 required, {total_flags} flagged over {len(references)} "
                   f"references (max z={worst:.2f}), elapsed={elapsed:.0f}s")


def test_criterion_7_zone_oracles():
    within = 0
    for trial in range(20):
        k = 2 + trial % 4
        g = RngStream(7000 + trial).gaussian_matrix(k, 2)
        centers = g / np.linalg.norm(g, axis=1)[:, None]
        alpha = 0.05 + 0.02 * trial
        cfg = zones.ZoneConfig(d=2, alpha=alpha, centers=centers)
        exact = zones.union_measure_d2_exact(cfg)
        mc = zones.union_measure_mc(cfg, 10 ** 5, RngStream(7100 + trial))
        se = mc.half_width / montecarlo.Z99
        within += abs(exact.value - mc.value) < 4.0 * se
    sin_ok = all(abs(zones.single_zone_measure(3, a) - math.sin(a)) < 1e-12
                 for a in np.linspace(0.0, math.pi / 2, 10))
    cover_ok = all(zones.union_measure_d2_exact(
        zones.evenly_spaced_config(n, 2, math.pi / (2 * n))).value == 1.0
        for n in range(2, 9))
    ok = within >= 19 and sin_ok and cover_ok
    _report(7, ok, f"d2 exact-vs-MC {within}/20 within 4 SE; d3 sin(alpha) "
                   f"{'ok' if sin_ok else 'failed'}; covering threshold "
                   f"{'exact' if cover_ok else 'broken'}")


def test_criterion_8_search_rediscovery():
    t0 = time.perf_counter()
    rank2 = search.run_campaign(search.CampaignConfig(
        n=4, rank=2, objective_kind="moment", p=2.0, samples=10 ** 5,
        method="de", seeds=tuple(range(10)), population=32, generations=200))
    rank2_wins = sum(1 for r in rank2.reports
                     if r.best_value < 0.1396
                     and r.distance_to_cosine < search.RECOVERY_THRESHOLD)
    full = search.run_campaign(search.CampaignConfig(
        n=4, rank=4, objective_kind="moment", p=2.0, samples=10 ** 5,
        method="de", seeds=tuple(range(10)), population=32, generations=200))
    full_wins = sum(1 for r in full.reports if r.best_value < 0.1396)
    elapsed = time.perf_counter() - t0
    ok = rank2_wins >= 5 and full_wins >= 8 and elapsed < 900.0
    _report(8, ok, f"rank-2 recovery {rank2_wins}/10 (need >=5), full-rank "
                   f"counterexample {full_wins}/10 (need >=8), elapsed={elapsed:.0f}s")


def test_criterion_9_interval_soundness():
    import random
    mp.mp.prec = 200
    rng = random.Random(99)
    checked = 0
    sound = True
    while checked < 10 ** 4:
        a = interval.Interval(*sorted(rng.uniform(-8, 8) for _ in range(2)))
        b = interval.Interval(*sorted(rng.uniform(-8, 8) for _ in range(2)))
        xa = mp.mpf(a.lo) + (mp.mpf(a.hi) - mp.mpf(a.lo)) * mp.mpf(rng.random())
        xb = mp.mpf(b.lo) + (mp.mpf(b.hi) - mp.mpf(b.lo)) * mp.mpf(rng.random())
        m = rng.randrange(0, 6)
        results = [
            (interval.ivl_add(a, b), xa + xb),
            (interval.ivl_sub(a, b), xa - xb),
            (interval.ivl_mul(a, b), xa * xb),
            (interval.ivl_powi(a, m), xa ** m),
        ]
        if not (b.lo <= 0 <= b.hi):
            results.append((interval.ivl_div(a, b), xa / xb))
        if a.lo >= 0:
            results.append((interval.ivl_sqrt(a), mp.sqrt(xa)))
        for ivl, oracle in results:
            if not (mp.mpf(ivl.lo) <= oracle <= mp.mpf(ivl.hi)):
                sound = False
        checked += len(results)
    nested = True
    prev = interval.simplex_p2_enclosure(25)
    for k in (50, 100, 200, 400):
        cur = interval.simplex_p2_enclosure(k)
        if not (cur.lo >= prev.lo and cur.hi <= prev.hi
                and cur.lo <= SIMPLEX_P2_REFERENCE <= cur.hi):
            nested = False
        prev = cur
    ok = sound and nested
    _report(9, ok, f"{checked} randomized ops enclose a 200-bit oracle "
                   f"({'sound' if sound else 'UNSOUND'}); refinement nesting "
                   f"25->50->100->200->400 {'holds' if nested else 'broken'}")
