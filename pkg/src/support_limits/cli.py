"""
Command-line front end.

    support-limits threshold --figure gt-noiseless --theta 0.05:0.95:0.05
    support-limits simulate --p 16 --k 2 --model gt --decoder ml \
        --n-grid 2:40:2 --trials 500 --seed 1
    support-limits verify [--only NAME] [--perturb 1e-3]

Exit codes: 0 success, 1 failed verification check, 2 configuration error,
3 numerical non-convergence, 4 desk-scale guard refusal.

Config may also be supplied as a JSON file via --config; explicit flags
override file values.  All randomized commands take --seed (a fixed default
is printed if omitted); no wall-clock entropy anywhere.  The environment
variable SUPPORT_LIMITS_THREADS caps worker threads for grid sweeps.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds, numerics, sim, verify
from .model import (
    GuardError,
    ModelSpec,
    ProblemDims,
    SignalPrior,
)
from .numerics import LOG2, NonConvergenceError

DEFAULT_SEED = 20240917

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_GUARD = 4

THRESHOLD_HEADER = ["figure", "x", "curve", "y"]


class ConfigError(ValueError):
    pass


def parse_range(spec: str) -> list[float]:
    """Inclusive numeric range 'start:stop:step'; step > 0 and stop >= start."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError as exc:
        raise ConfigError(f"non-numeric range {spec!r}") from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"range requires step > 0 and stop >= start: {spec!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def worker_count(n_items: int) -> int:
    cap = os.environ.get("SUPPORT_LIMITS_THREADS", "1")
    try:
        cap_n = max(1, int(cap))
    except ValueError:
        cap_n = 1
    return max(1, min(n_items, cap_n, os.cpu_count() or 1))


def _write_rows(path: str | None, header: list[str], rows: list[list], fmt: str):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        if fmt == "csv":
            w = csv.writer(out)
            w.writerow(header)
            w.writerows(rows)
        else:
            for row in rows:
                out.write(json.dumps(dict(zip(header, row))) + "\n")
    finally:
        if path:
            out.close()


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Overlay JSON config under explicit flags (flags win)."""
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        file_cfg = json.load(fh)
    defaults = {a.dest: parser.get_default(a.dest) for a in parser._actions}
    for key, value in file_cfg.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, dest) == defaults.get(dest):
            setattr(args, dest, value)
    return args


# ---------------------------------------------------------------------------
# threshold
# ---------------------------------------------------------------------------


def cmd_threshold(args, parser) -> int:
    args = _merge_config(args, parser)
    fig = args.figure
    if fig == "gt-noiseless":
        thetas = parse_range(args.theta)
        rows = bounds.figure_curves(bounds.FIG_GT_NOISELESS, {"theta": thetas})
        extras = {t: bounds.cor_gt_noiseless(t).nu_star for t in thetas} if args.verbose else {}
        out = [["gt-noiseless", f"{x:.6g}", c, f"{y:.10g}"] for x, c, y in rows]
        if args.verbose:
            for x, c, y in rows:
                print(f"theta={x:.4g} {c} rate={y:.6f} nu*={extras[x]:.6f}")
    elif fig == "gt-noisy":
        thetas = parse_range(args.theta)
        rhos = [float(r) for r in args.rho.split(",")]
        rows = bounds.figure_curves(bounds.FIG_GT_NOISY, {"theta": thetas, "rho": rhos})
        out = [["gt-noisy", f"{x:.6g}", c, f"{y:.10g}"] for x, c, y in rows]
        if args.verbose:
            for t in thetas:
                for r in rhos:
                    res = bounds.cor_gt_noisy(t, r)
                    print(f"theta={t:.4g} rho={r:g} delta2*={res.delta2_star:.6f}")
    elif fig == "partial-recovery":
        snrs = parse_range(args.snr_db)
        grid = {
            "snr_db": snrs,
            "alpha_star": args.alpha_star,
            "sigma": args.sigma,
            "grid_points": args.grid_points,
        }
        rows = _partial_rows_parallel(grid)
        out = [["partial-recovery", f"{x:.6g}", c, f"{y:.10g}"] for x, c, y in rows]
        if args.verbose:
            for snr in snrs:
                cb = args.sigma**2 * 10 ** (snr / 10)
                lin = bounds.cor_linear_partial(cb, args.sigma, args.alpha_star, grid_points=501)
                ob = bounds.cor_1bit_partial(cb, args.sigma, args.alpha_star, grid_points=501)
                print(
                    f"snr={snr:g} linear alpha*={lin.alpha_ach:.4f}/{lin.alpha_conv:.4f} "
                    f"1bit alpha*={ob.alpha_ach:.4f}/{ob.alpha_conv:.4f}"
                )
    else:
        raise ConfigError(f"unknown figure {fig!r}")
    out.sort(key=lambda r: (float(r[1]), r[2]))
    _write_rows(args.output, THRESHOLD_HEADER, out, args.format)
    return EXIT_OK


def _partial_rows_parallel(grid: dict):
    snrs = grid["snr_db"]
    workers = worker_count(len(snrs))

    def one(snr):
        return bounds.figure_curves(
            bounds.FIG_PARTIAL,
            {
                "snr_db": [snr],
                "alpha_star": grid["alpha_star"],
                "sigma": grid["sigma"],
                "grid_points": grid["grid_points"],
            },
        )

    if workers == 1:
        chunks = [one(s) for s in snrs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(one, snrs))
    return [row for chunk in chunks for row in chunk]


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _build_model(args) -> ModelSpec:
    if args.model in ("gt", "group-testing"):
        return ModelSpec.group_testing(rho=args.rho, nu=args.nu)
    if args.model == "linear":
        return ModelSpec.linear(args.sigma)
    if args.model in ("one-bit", "1bit"):
        return ModelSpec.one_bit(args.sigma)
    raise ConfigError(f"unknown model {args.model!r}")


def _build_prior(args, model: ModelSpec, k: int) -> SignalPrior:
    if model.channel == "group-testing":
        return SignalPrior.all_ones()
    if args.b:
        vals = [float(x) for x in args.b.split(",")]
        if len(vals) != k:
            raise ConfigError(f"--b needs {k} entries, got {len(vals)}")
        return SignalPrior.permuted(vals) if args.prior == "permuted" else SignalPrior.fixed(vals)
    if args.prior == "gaussian":
        return SignalPrior.iid_gaussian(args.sigma_beta_sq)
    raise ConfigError("linear/one-bit simulation needs --b or --prior gaussian")


def cmd_simulate(args, parser) -> int:
    args = _merge_config(args, parser)
    for required in ("p", "k", "n_grid"):
        if getattr(args, required) is None:
            raise ConfigError(f"missing required setting --{required.replace('_', '-')}")
    if args.seed is None:
        args.seed = DEFAULT_SEED
        print(f"using default seed {args.seed}", file=sys.stderr)
    model = _build_model(args)
    prior = _build_prior(args, model, args.k)
    dims = ProblemDims(p=args.p, k=args.k, n=0, d_max=args.d_max)
    n_grid = [int(x) for x in parse_range(args.n_grid)]
    decoder_kind = {"ml": "exhaustive-ml", "threshold": "threshold", "comp": "comp-gt"}[
        args.decoder
    ]
    decoder = sim.DecoderSpec(kind=decoder_kind, delta1=args.delta1)
    reports = sim.phase_sweep(model, prior, dims, n_grid, decoder, args.trials, args.seed)
    rows = [r.as_csv_row() for r in sorted(reports, key=lambda r: r.n)]
    _write_rows(args.output, sim.CSV_HEADER, rows, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args, parser) -> int:
    args = _merge_config(args, parser)
    if args.perturb:
        numerics.set_entropy_perturbation(args.perturb)
    try:
        results = verify.run_checks(only=args.only)
    finally:
        numerics.set_entropy_perturbation(0.0)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status}  {r.name:<{width}}  measured={r.measured:.3e} "
            f"tol={r.tolerance:.3e}  ({r.seconds:.2f}s)  {r.detail}"
        )
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    if args.output:
        with open(args.output, "w") as fh:
            json.dump([r.to_dict() for r in results], fh, indent=2)
    return EXIT_OK if n_fail == 0 else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="support-limits", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("threshold", help="threshold curves and figure tables")
    t.add_argument("--figure", required=True, choices=["gt-noiseless", "gt-noisy", "partial-recovery"])
    t.add_argument("--theta", default="0.05:0.95:0.05", help="range start:stop:step")
    t.add_argument("--rho", default="0.11", help="comma-separated crossover values")
    t.add_argument("--snr-db", default="-20:50:1", help="range start:stop:step in dB")
    t.add_argument("--alpha-star", type=float, default=0.1)
    t.add_argument("--sigma", type=float, default=1.0)
    t.add_argument("--grid-points", type=int, default=2001)
    t.add_argument("--config")
    t.add_argument("--output")
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.add_argument("--verbose", action="store_true")
    t.set_defaults(func=cmd_threshold)

    s = sub.add_parser("simulate", help="seeded Monte Carlo decoder sweeps")
    s.add_argument("--p", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--d-max", type=int, default=0)
    s.add_argument("--model", default="gt", choices=["gt", "group-testing", "linear", "one-bit", "1bit"])
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--rho", type=float, default=0.0)
    s.add_argument("--nu", type=float, default=float(np.log(2.0)))
    s.add_argument("--b", help="comma-separated non-zero entries")
    s.add_argument("--prior", default="fixed", choices=["fixed", "permuted", "gaussian"])
    s.add_argument("--sigma-beta-sq", type=float, default=1.0)
    s.add_argument("--decoder", default="ml", choices=["ml", "threshold", "comp"])
    s.add_argument("--delta1", type=float, default=0.1)
    s.add_argument("--n-grid", help="range start:stop:step")
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--seed", type=int)
    s.add_argument("--config")
    s.add_argument("--output")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run the named oracle/invariant checks")
    v.add_argument("--only", help="run a single named check")
    v.add_argument("--perturb", type=float, default=0.0, help="inject an additive fault into H2")
    v.add_argument("--config")
    v.add_argument("--output", help="write a JSON report")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ConfigError, ValueError, FileNotFoundError, KeyError) as exc:
        if isinstance(exc, GuardError):
            print(f"guard refused: {exc}", file=sys.stderr)
            return EXIT_GUARD
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
