"""Command-line front door: bound reports, sweeps, scans, traces.

Exit codes: 0 on success, 1 on usage errors (bad flags/arguments), 2 on
runtime errors (unreadable files, invalid data, internal assertions).
Violations of probabilistic bounds are ordinary data rows, never a
nonzero exit.  ``DOTBOUNDS_OUT_DIR`` sets the default output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__, bounds
from .exceptions import EvenDimension, InputNotRepresentable, ZeroInnerProduct
from .experiments import (
    RELEVANT_BOUNDS,
    ExperimentConfig,
    azuma_monte_carlo,
    default_grid,
    paper_steps_grid,
    run_sweep,
    violation_scan,
)
from .generators import FAMILIES, generate
from .precision import BINARY32, BINARY64, DOUBLE_DOUBLE, PrecisionSpec, UNIT_ROUNDOFF
from .simulate import accumulate, accumulate_value, relative_error, write_trace_csv


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_flag(s: str) -> int:
    """Integer flag accepting scientific notation like 1e6."""
    v = float(s)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    return int(v)


def _out_path(name: str | None, default_name: str) -> str:
    path = name or default_name
    base = os.environ.get("DOTBOUNDS_OUT_DIR", "")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _prec(args) -> PrecisionSpec:
    working = args.precision
    oracle = BINARY64 if working == BINARY32 else DOUBLE_DOUBLE
    return PrecisionSpec(working, oracle)


def _unit_roundoff(args) -> float:
    return UNIT_ROUNDOFF[args.precision] if args.u is None else args.u


def _load_pair(path: str):
    xs, ys = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != 2:
                raise ValueError(f"{path}:{line_no}: expected two comma-separated columns")
            if line_no == 1 and not _is_number(cells[0]):
                continue  # header row
            xs.append(float(cells[0]))
            ys.append(float(cells[1]))
    if not xs:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(xs), np.asarray(ys)


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _get_vectors(args, prec: PrecisionSpec):
    if getattr(args, "input", None):
        x, y = _load_pair(args.input)
        if x.size != y.size:
            raise ValueError("input columns have different lengths")
        dtype = np.float32 if prec.working == BINARY32 else np.float64
        return x.astype(dtype), y.astype(dtype)
    pair = generate(args.family, args.n, args.seed, prec.working)
    return pair.x, pair.y


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--delta", type=float, default=1e-16,
                   help="failure probability of the probabilistic bounds (default: 1e-16)")
    p.add_argument("--u", type=float, default=None,
                   help="unit roundoff for bound evaluation (default: that of --precision)")
    p.add_argument("--precision", choices=(BINARY32, BINARY64), default=BINARY32,
                   help="working precision of the simulated accumulation (default: binary32)")


def _add_family(p: argparse.ArgumentParser, default="mixed-sign"):
    p.add_argument("--family", default=default,
                   help=f"vector family, one of {', '.join(FAMILIES)} (default: {default})")
    p.add_argument("--seed", type=_int_flag, default=1, help="generator seed (default: 1)")


def build_parser() -> _Parser:
    ap = _Parser(prog="dotbounds",
                 description="Error bounds and roundoff experiments for inner products.")
    ap.add_argument("--version", action="version", version=f"dotbounds {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("report", help="evaluate every bound for one vector pair",
                       description="Print every amplifier, bound, the simulated empirical "
                                   "error, and the det/prob crossover verdicts for one instance.")
    _add_family(p)
    p.add_argument("--n", type=_int_flag, default=1000, help="dimension (default: 1000)")
    p.add_argument("--input", default=None,
                   help="CSV file with two columns x,y (overrides --family/--n/--seed)")
    p.add_argument("--json", dest="json_out", default=None,
                   help="also write the report as JSON to this path ('-' for stdout)")
    _add_common(p)

    p = sub.add_parser("sweep", help="run a dimension sweep experiment",
                       description="Sweep a dimension grid, writing one CSV row per "
                                   "(family, n, seed) cell plus a JSON config sidecar.")
    p.add_argument("--experiment", required=False, default="roundoff-general",
                   choices=("amplifiers", "perturbation", "roundoff-indep", "roundoff-general"),
                   help="which empirical comparison to run (default: roundoff-general)")
    p.add_argument("--family", action="append", default=None,
                   help="vector family; repeat the flag for several (default: mixed-sign)")
    p.add_argument("--n-min", type=_int_flag, default=10, help="smallest dimension (default: 10)")
    p.add_argument("--n-max", type=_int_flag, default=10**6, help="largest dimension (default: 1e6)")
    p.add_argument("--grid", choices=("geometric", "paper-steps"), default="geometric",
                   help="grid layout: powers of ten, or 100 linear steps (default: geometric)")
    p.add_argument("--seeds", type=_int_flag, default=3, help="number of seeds 1..N (default: 3)")
    p.add_argument("--dist", choices=("uniform", "two-point"), default="uniform",
                   help="perturbation distribution (perturbation experiment; default: uniform)")
    p.add_argument("--sort", choices=("none", "asc", "desc"), default="none",
                   help="sort products by magnitude before accumulating (default: none)")
    p.add_argument("--fresh-draws", action="store_true",
                   help="draw a fresh vector per grid cell instead of prefix-consistent slices")
    p.add_argument("--out", "-o", default=None, help="output CSV path (default: sweep.csv)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv",
                   help="output format (default: csv)")
    p.add_argument("--config", default=None,
                   help="JSON sidecar from a previous run; reruns that exact configuration")
    _add_common(p)

    p = sub.add_parser("scan", help="scan for the first violating dimension",
                       description="Forward scan over a geometric grid reporting the smallest "
                                   "n where the empirical error exceeds each probabilistic "
                                   "bound, repeated with products sorted asc/desc.")
    p.add_argument("--family", default="same-sign",
                   help="vector family to scan (default: same-sign)")
    p.add_argument("--n-min", type=_int_flag, default=10**4, help="smallest dimension (default: 1e4)")
    p.add_argument("--n-max", type=_int_flag, default=10**7, help="largest dimension (default: 1e7)")
    p.add_argument("--seeds", type=_int_flag, default=1, help="number of seeds 1..N (default: 1)")
    p.add_argument("--out", "-o", default=None, help="output CSV path (default: scan.csv)")
    _add_common(p)

    p = sub.add_parser("azuma", help="Monte-Carlo check of the concentration tail",
                       description="Draw Rademacher sums over a coefficient vector and compare "
                                   "the empirical tail rate with the failure probability.")
    p.add_argument("--coeffs", default="equal:100",
                   help="coefficients: 'equal:N' for N unit entries, or comma-separated values "
                        "(default: equal:100)")
    p.add_argument("--delta", type=float, default=0.05,
                   help="failure probability (default: 0.05)")
    p.add_argument("--trials", type=_int_flag, default=100_000,
                   help="Monte-Carlo trials (default: 100000)")
    p.add_argument("--seed", type=_int_flag, default=1, help="RNG seed (default: 1)")

    p = sub.add_parser("trace", help="dump the per-step accumulation trace",
                       description="Simulate one accumulation and write the 2n-step trace "
                                   "(k, shat, s_exact, delta, z) as CSV.")
    _add_family(p)
    p.add_argument("--n", type=_int_flag, default=8, help="dimension (default: 8)")
    p.add_argument("--input", default=None, help="CSV file with two columns x,y")
    p.add_argument("--out", "-o", default=None, help="output CSV path (default: trace.csv)")
    _add_common(p)
    return ap


def _cmd_report(args) -> int:
    prec = _prec(args)
    x, y = _get_vectors(args, prec)
    u = _unit_roundoff(args)
    value, ip = accumulate_value(x, y, prec)
    emp = relative_error(value, ip)
    rep = bounds.bound_report(x, y, u, args.delta, empirical_rel_error=emp, exact_ip=ip)

    rows = [
        ("n", rep.n),
        ("u", rep.u),
        ("delta", rep.delta),
        ("exact inner product", ip),
        ("computed (working precision)", value),
        ("empirical relative error", emp),
        ("kappa_1", rep.kappa1),
        ("kappa_2", rep.kappa2),
        ("kappa_inf", rep.kappa_inf),
        ("det perturbation (p=2)", rep.det_perturb_p2),
        ("prob perturbation", rep.prob_perturb),
        ("det roundoff traditional", rep.det_trad),
        ("det roundoff independent", rep.det_indep),
        ("prob roundoff independent", rep.prob_indep),
        ("det roundoff martingale", rep.det_martingale),
        ("prob roundoff martingale", rep.prob_martingale),
        ("compact upper (p=1, prob)", rep.compact_upper),
        ("simplest prob bound", rep.simplest_prob),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v!r}" if isinstance(v, float) else f"{k:<{width}}  {v}")

    print()
    for model, det, prob in (
        ("perturbation", rep.det_perturb_p2, rep.prob_perturb),
        ("independent", rep.det_indep, rep.prob_indep),
        ("martingale", rep.det_martingale, rep.prob_martingale),
    ):
        nc = bounds.crossover_dimension(model, args.delta)
        verdict = "tighter" if prob < det else "not tighter"
        print(f"crossover[{model}]: probabilistic {verdict} at n={rep.n} (crossover n={nc})")
    nc = bounds.crossover_dimension("simplest", args.delta, u)
    verdict = "tighter" if rep.simplest_prob < rep.det_trad else "not tighter"
    print(f"crossover[simplest]: probabilistic {verdict} at n={rep.n} (crossover n={nc})")

    # the empirical error here is a roundoff error, so only roundoff bounds
    # are comparable (perturbation bounds cover a different error mechanism)
    roundoff = RELEVANT_BOUNDS["roundoff-general"]
    violated = [k for k in roundoff if rep.violated.get(k, False)]
    print(f"violated roundoff bounds: {'|'.join(violated) if violated else 'none'}")

    if args.json_out:
        payload = dataclasses.asdict(rep)
        payload["exact_inner_product"] = ip
        payload["computed_value"] = value
        text = json.dumps(payload, indent=2, sort_keys=True)
        if args.json_out == "-":
            print(text)
        else:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    return 0


def _seeds(count: int) -> tuple[int, ...]:
    if count < 1:
        raise ValueError("--seeds must be >= 1")
    return tuple(range(1, count + 1))


def _cmd_sweep(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        cfg = ExperimentConfig.from_json_dict(payload.get("config", payload))
        if args.out:
            cfg = dataclasses.replace(cfg, out_path=_out_path(args.out, "sweep.csv"))
    else:
        families = tuple(args.family) if args.family else ("mixed-sign",)
        grid = (
            default_grid(args.n_min, args.n_max)
            if args.grid == "geometric"
            else paper_steps_grid(args.n_min, args.n_max)
        )
        working = args.precision
        cfg = ExperimentConfig(
            experiment=args.experiment,
            n_grid=tuple(grid),
            delta=args.delta,
            working=working,
            oracle=BINARY64 if working == BINARY32 else DOUBLE_DOUBLE,
            u=args.u,
            families=families,
            seeds=_seeds(args.seeds),
            dist=args.dist,
            sort=args.sort,
            fresh_draws=args.fresh_draws,
            out_path=_out_path(args.out, "sweep.csv"),
            format=args.format,
        )
    records = run_sweep(cfg)
    violations = sum(1 for r in records if r.viol_flags)
    print(f"wrote {cfg.out_path} ({len(records)} rows, {violations} with violations) "
          f"and {cfg.out_path}.config.json")
    return 0


def _cmd_scan(args) -> int:
    prec = _prec(args)
    out = _out_path(args.out, "scan.csv")
    result = violation_scan(
        args.family,
        delta=args.delta,
        prec=prec,
        n_max=args.n_max,
        seeds=_seeds(args.seeds),
        n_min=args.n_min,
        out_path=out,
    )
    for bound_name, per_seed in result.first_violation.items():
        for seed, per_sort in per_seed.items():
            summary = ", ".join(f"{sort}: {n if n is not None else '-'}"
                                for sort, n in per_sort.items())
            print(f"first violation of {bound_name} (seed {seed}): {summary}")
    print(f"wrote {out} and {out}.config.json")
    return 0


def _parse_coeffs(spec: str) -> np.ndarray:
    if spec.startswith("equal:"):
        count = int(float(spec.split(":", 1)[1]))
        if count < 1:
            raise ValueError("coefficient count must be >= 1")
        return np.ones(count)
    return np.asarray([float(s) for s in spec.split(",") if s.strip()], dtype=np.float64)


def _cmd_azuma(args) -> int:
    coeffs = _parse_coeffs(args.coeffs)
    count, rate = azuma_monte_carlo(coeffs, args.delta, args.trials, seed=args.seed)
    tail = bounds.azuma_tail(coeffs, args.delta)
    slack = args.delta + 3.0 * math.sqrt(args.delta / args.trials)
    print(f"coefficients: {coeffs.size}, tail radius: {tail!r}")
    print(f"violations: {count}/{args.trials} (rate {rate!r}, delta {args.delta!r}, "
          f"binomial slack bound {slack!r})")
    print(f"within slack: {rate <= slack}")
    return 0


def _cmd_trace(args) -> int:
    prec = _prec(args)
    x, y = _get_vectors(args, prec)
    trace = accumulate(x, y, prec)
    out = _out_path(args.out, "trace.csv")
    write_trace_csv(trace, out)
    print(f"wrote {out} ({2 * trace.n} rows); value {trace.value!r}, "
          f"exact {trace.exact!r}, relative error {trace.rel_error()!r}")
    return 0


_COMMANDS = {
    "report": _cmd_report,
    "sweep": _cmd_sweep,
    "scan": _cmd_scan,
    "azuma": _cmd_azuma,
    "trace": _cmd_trace,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BrokenPipeError:
        return 0
    except (OSError, ValueError, ZeroInnerProduct, InputNotRepresentable, EvenDimension,
            RuntimeError) as exc:
        print(f"dotbounds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
