"""Command-line interface.

One executable, ``gaussmin``, exposing the certificate, the exact law,
the Monte Carlo experiments, the zone geometry, and the optimization
campaigns. Primary outputs are plain CSV or JSON files; every output
file is accompanied by a ``<name>.manifest.json`` sidecar recording the
command, flags, seed, version, and wall time. The data files themselves
contain no timing, so identical flags and seed reproduce them byte for
byte.

Exit codes: 0 success (and verdict true), 1 verdict false or flagged
violation, 2 usage error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__, corrmat, exactlaw, montecarlo, search, zones
from .interval import verify_counterexample
from .streams import RngStream

SEED_ENV_VAR = "GAUSSMIN_SEED"


@dataclass(frozen=True)
class RunManifest:
    command: str
    flags: dict
    seed: int
    tool_version: str
    wall_time: float

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "flags": self.flags,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "wall_time": self.wall_time,
        }


def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str elsewhere."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_outputs(out_dir: str, name: str, text: str, manifest: RunManifest) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    _write_text(path, text)
    sidecar = json.dumps(manifest.to_json_dict(), indent=2, sort_keys=True) + "\n"
    _write_text(path + ".manifest.json", sidecar)
    return path


def _csv(rows, header: str) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _matrix_csv(matrix: corrmat.CorrelationMatrix) -> str:
    """1-based 'i,j,value' triplets in row-major order."""
    rows = []
    for i in range(matrix.n):
        for j in range(matrix.n):
            rows.append((i + 1, j + 1, matrix.entries[i, j]))
    return _csv(rows, "i,j,value")


def _grid(args) -> np.ndarray:
    if args.grid_steps < 1:
        raise ValueError("--grid-steps must be >= 1")
    if not args.grid_max > 0.0:
        raise ValueError("--grid-max must be positive")
    return np.linspace(args.grid_max / args.grid_steps, args.grid_max, args.grid_steps)


def _named_matrix(name: str, n: int, seed: int) -> corrmat.CorrelationMatrix:
    return corrmat.matrix_from_name(name, n, seed)


def cmd_verify(args, manifest_for) -> int:
    cert = verify_counterexample(args.subdivisions)
    body = cert.to_json_dict()
    text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    path = _write_outputs(args.out_dir, "certificate.json", text, manifest_for())
    print(f"cosine  E[M^2] in [{cert.cosine_bound.lo!r}, {cert.cosine_bound.hi!r}]")
    print(f"simplex E[M^2] in [{cert.simplex_bound.lo!r}, {cert.simplex_bound.hi!r}]")
    print(f"verdict: {'proved' if cert.verdict else 'not separated'} "
          f"({args.subdivisions} subdivisions) -> {path}")
    return 0 if cert.verdict else 1


def cmd_moments(args, manifest_for) -> int:
    rows = []
    for p in args.p:
        if args.exact:
            value = exactlaw.cos_moment(args.n, p)
        else:
            matrix = _named_matrix(args.matrix, args.n, args.seed)
            est = montecarlo.estimate_moment(matrix, p, args.samples,
                                             RngStream(args.seed))
            value = est.value
        rows.append((args.n, p, value))
    text = _csv(rows, "n,p,value")
    _write_outputs(args.out_dir, "moments.csv", text, manifest_for())
    sys.stdout.write(text)
    return 0


def cmd_tails(args, manifest_for) -> int:
    ts = np.asarray(args.t, dtype=np.float64) if args.t else _grid(args)
    if args.exact:
        if args.matrix == "cos":
            tail = lambda t: exactlaw.cos_tail(args.n, t)
        elif args.matrix == "identity":
            tail = lambda t: exactlaw.identity_tail(args.n, t)
        else:
            raise ValueError(f"no exact tail for matrix family {args.matrix!r}")
        rows = [(args.n, t, tail(t)) for t in ts]
        text = _csv(rows, "n,t,tail")
    else:
        matrix = _named_matrix(args.matrix, args.n, args.seed)
        curve = montecarlo.estimate_tail_curve(matrix, np.sort(ts), args.samples,
                                               RngStream(args.seed))
        rows = list(zip(curve.thresholds, curve.estimates, curve.half_widths))
        text = _csv(rows, "t,tail,ci_half")
    _write_outputs(args.out_dir, "tails.csv", text, manifest_for())
    sys.stdout.write(text)
    return 0


def cmd_dominance(args, manifest_for) -> int:
    candidate = _named_matrix(args.candidate, args.n, args.seed)
    reference = _named_matrix(args.reference, args.n, args.seed + 1)
    ts = _grid(args)
    report = montecarlo.dominance_check(candidate, reference, ts, args.samples,
                                        RngStream(args.seed, stream_id=2))
    rows = list(zip(report.thresholds, report.candidate_tail,
                    report.reference_tail, report.z_scores))
    _write_outputs(args.out_dir, "dominance.csv",
                   _csv(rows, "t,candidate_tail,reference_tail,z"), manifest_for())
    summary = json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
    _write_outputs(args.out_dir, "dominance.json", summary, manifest_for())
    sys.stdout.write(summary)
    return 1 if len(report.flagged_thresholds) else 0


def cmd_zones(args, manifest_for) -> int:
    report = zones.zone_conjecture_scan(args.n, args.d, args.alpha, args.trials,
                                        args.samples, RngStream(args.seed, stream_id=3))
    rows = [(i, v, z) for i, (v, z) in
            enumerate(zip(report.random_values, report.exceedance_zs))]
    _write_outputs(args.out_dir, "zone_trials.csv",
                   _csv(rows, "trial,union_measure,exceedance_z"), manifest_for())
    summary = json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
    _write_outputs(args.out_dir, "zones.json", summary, manifest_for())
    sys.stdout.write(summary)
    return 1 if report.flagged else 0


def cmd_search(args, manifest_for) -> int:
    kind, _, value = args.objective.partition(":")
    if kind not in ("moment", "tail") or not value:
        raise ValueError(f"--objective must be moment:<p> or tail:<t>, got {args.objective!r}")
    number = float(value)
    objective = search.Objective(kind=kind,
                                 p=number if kind == "moment" else 0.0,
                                 t=number if kind == "tail" else 0.0,
                                 samples=args.samples, base_seed=args.seed)
    space = search.SearchSpace(n=args.n, rank=args.rank)
    driver = RngStream(args.seed, stream_id=1)
    if args.method == "de":
        report = search.differential_evolution(space, objective, args.population,
                                               args.generations, driver)
    else:
        start = driver.split(0).gaussians(space.param_count)
        report = search.local_search(space, objective, start, args.iterations,
                                     driver.split(1))
    _write_outputs(args.out_dir, "search_history.csv",
                   _csv(list(enumerate(report.history)), "iter,best_value"),
                   manifest_for())
    summary = json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
    _write_outputs(args.out_dir, "search.json", summary, manifest_for())
    print(f"best {objective.describe()} = {report.best_value!r}  "
          f"distance_to_cosine = {report.distance_to_cosine:.4f}")
    return 0


def _figure_cov(args, manifest_for) -> int:
    n = args.n
    for name, matrix in (("cosine", corrmat.cosine_covariance(n)),
                         ("simplex", corrmat.simplex_covariance(n))):
        _write_outputs(args.out_dir, f"figure_cov_{name}_n{n}.csv",
                       _matrix_csv(matrix), manifest_for())
    print(f"wrote covariance grids for n={n}")
    return 0


def _figure_tails(args, manifest_for) -> int:
    n = args.n
    ts = _grid(args)
    rows = []
    for t in ts:
        rows.append(("cosine", t, exactlaw.cos_tail(n, t), 0.0))
    for t in ts:
        rows.append(("identity", t, exactlaw.identity_tail(n, t), 0.0))
    curve = montecarlo.estimate_tail_curve(corrmat.simplex_covariance(n), ts,
                                           args.samples, RngStream(args.seed, stream_id=4))
    for t, est, half in zip(ts, curve.estimates, curve.half_widths):
        rows.append(("simplex", t, est, half))
    base = RngStream(args.seed, stream_id=5)
    for idx in range(50):
        matrix = corrmat.random_correlation(n, rank=n, seed=args.seed + 1000 + idx)
        curve = montecarlo.estimate_tail_curve(matrix, ts, args.samples,
                                               base.split(idx))
        for t, est, half in zip(ts, curve.estimates, curve.half_widths):
            rows.append((f"random_full_{idx:02d}", t, est, half))
    for idx in range(50):
        matrix = corrmat.random_correlation(n, rank=2, seed=args.seed + 2000 + idx)
        curve = montecarlo.estimate_tail_curve(matrix, ts, args.samples,
                                               base.split(50 + idx))
        for t, est, half in zip(ts, curve.estimates, curve.half_widths):
            rows.append((f"random_rank2_{idx:02d}", t, est, half))
    _write_outputs(args.out_dir, f"figure_tails_n{n}.csv",
                   _csv(rows, "label,t,tail,ci_half"), manifest_for())
    print(f"wrote 103 tail curves at n={n} on a {ts.size}-point grid")
    return 0


def _figure_zones(args, manifest_for) -> int:
    config = zones.evenly_spaced_config(args.n, args.d, args.alpha)
    rows = []
    for j in range(config.n):
        rows.append(tuple([j + 1] + [config.centers[j, c] for c in range(config.d)]))
    header = "j," + ",".join(f"x{c + 1}" for c in range(config.d))
    _write_outputs(args.out_dir, f"figure_zones_n{args.n}_d{args.d}.csv",
                   _csv(rows, header), manifest_for())
    print(f"wrote {config.n} zone centers (alpha={args.alpha!r})")
    return 0


def cmd_figure(args, manifest_for) -> int:
    if args.which == "cov":
        return _figure_cov(args, manifest_for)
    if args.which == "tails":
        return _figure_tails(args, manifest_for)
    return _figure_zones(args, manifest_for)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussmin",
        description="Minimum absolute coordinate of correlated Gaussians: "
                    "certificates, exact laws, experiments.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"base seed (default: ${SEED_ENV_VAR} or 0)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker hint; results do not depend on it")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="preferred stdout format where a command supports both")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="write the counterexample certificate")
    p.add_argument("--subdivisions", type=int, default=400)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moments", parents=[common], help="moments of the minimum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, action="append", required=True)
    p.add_argument("--exact", action="store_true",
                   help="quadrature values for the cosine family")
    p.add_argument("--matrix", default="cos")
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("tails", parents=[common], help="tail curve of the minimum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, action="append",
                   help="explicit thresholds (repeatable); otherwise a grid")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--matrix", default="cos")
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--grid-max", type=float, default=2.0)
    p.add_argument("--grid-steps", type=int, default=20)
    p.set_defaults(func=cmd_tails)

    p = sub.add_parser("dominance", parents=[common],
                       help="flag tail-dominance violations between two families")
    p.add_argument("--candidate", default="cos")
    p.add_argument("--reference", default="simplex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--grid-max", type=float, default=2.0)
    p.add_argument("--grid-steps", type=int, default=20)
    p.set_defaults(func=cmd_dominance)

    p = sub.add_parser("zones", parents=[common],
                       help="evenly-spaced vs random zone unions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--samples", type=int, default=10 ** 5)
    p.set_defaults(func=cmd_zones)

    p = sub.add_parser("search", parents=[common],
                       help="minimize a moment or tail objective")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--objective", default="moment:2")
    p.add_argument("--method", choices=("de", "local"), default="de")
    p.add_argument("--population", type=int, default=32)
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--iterations", type=int, default=60)
    p.add_argument("--samples", type=int, default=10 ** 5)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("figure", parents=[common],
                       help="data files behind the standard summary figures")
    p.add_argument("--which", choices=("cov", "tails", "zones"), required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--grid-max", type=float, default=2.0)
    p.add_argument("--grid-steps", type=int, default=40)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        try:
            args.seed = _default_seed()
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    if args.command == "figure" and args.n is None:
        args.n = {"cov": 16, "tails": 8, "zones": 4}[args.which]
    started = time.time()
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("func", "command") and v is not None}

    def manifest_for() -> RunManifest:
        return RunManifest(command=args.command, flags={k: str(v) for k, v in flags.items()},
                           seed=args.seed, tool_version=__version__,
                           wall_time=round(time.time() - started, 3))

    try:
        return args.func(args, manifest_for)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
