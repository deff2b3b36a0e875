"""Dimension sweeps, Azuma Monte-Carlo validation, and the violation scan.

Each sweep walks a dimension grid for one or more vector families and
seeds, measures an experiment-specific empirical relative error, and
records every bound of :func:`dotbounds.bounds.bound_report` per cell.
Violations of probabilistic bounds are data (reported in the CSV), never
failures; violations of deterministic bounds are impossible and are
asserted at write time, together with the det/prob ratio identities.

CSV rows follow the fixed schema

    experiment,family,seed,n,emp_err,kappa1,kappa2,kappa_inf,det_perturb,
    prob_perturb,det_trad,det_indep,prob_indep,det_mart,prob_mart,
    simplest_prob,viol_flags

ordered by (experiment, family, n, seed), with round-trip-exact float
formatting, plus a JSON sidecar holding the full configuration, so reruns
of the same configuration are byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import _kernels, bounds
from ._rng import RNG_ALGORITHM, STREAM_SIGNS, stream
from .exceptions import ZeroInnerProduct
from .generators import canonical_family, generate
from .precision import PrecisionSpec, UNIT_ROUNDOFF, check_failure_probability, probabilistic_factor
from .simulate import accumulate_value, exact_inner_product, perturb_vectors, relative_error

__all__ = [
    "ExperimentConfig",
    "SweepRecord",
    "run_sweep",
    "run_amplifiers",
    "run_perturbation",
    "run_roundoff_indep",
    "run_roundoff_general",
    "azuma_monte_carlo",
    "violation_scan",
    "write_sweep_csv",
    "write_sidecar",
    "default_grid",
    "scan_grid",
    "CSV_HEADER",
]

EXPERIMENTS = (
    "amplifiers",
    "perturbation",
    "roundoff-indep",
    "roundoff-general",
    "azuma-mc",
    "violation-scan",
)

_ROUNDOFF_BOUNDS = (
    "det_trad",
    "det_indep",
    "prob_indep",
    "det_martingale",
    "prob_martingale",
    "compact_upper",
    "simplest_prob",
)

#: Bounds whose violation is meaningful per experiment (same error mechanism).
RELEVANT_BOUNDS = {
    "amplifiers": (),
    "perturbation": ("det_perturb_p2", "prob_perturb"),
    "roundoff-indep": _ROUNDOFF_BOUNDS,
    "roundoff-general": _ROUNDOFF_BOUNDS,
    "violation-scan": _ROUNDOFF_BOUNDS,
}

CSV_HEADER = (
    "experiment,family,seed,n,emp_err,kappa1,kappa2,kappa_inf,det_perturb,prob_perturb,"
    "det_trad,det_indep,prob_indep,det_mart,prob_mart,simplest_prob,viol_flags"
)

_DETERMINISTIC = ("det_perturb_p2", "det_trad", "det_indep", "det_martingale")


class InternalConsistencyError(RuntimeError):
    """A write-time sanity assertion failed (a build bug, not a data point)."""


def default_grid(n_min: int = 10, n_max: int = 10**6) -> list[int]:
    """Powers of ten from n_min to n_max inclusive."""
    grid = []
    n = 1
    while n <= n_max:
        if n >= n_min:
            grid.append(n)
        n *= 10
    if not grid:
        raise ValueError("empty grid")
    return grid


def paper_steps_grid(n_min: int, n_max: int, points: int = 100) -> list[int]:
    """Linear grid: multiples of n_max/points, clipped to [n_min, n_max]."""
    step = max(1, n_max // points)
    grid = [n for n in range(step, n_max + 1, step) if n >= n_min]
    if not grid:
        raise ValueError("empty grid")
    return grid


def scan_grid(n_min: int = 10**4, n_max: int = 10**7) -> list[int]:
    """1-2-5 per decade geometric grid for the violation scan."""
    grid = []
    base = 1
    while base <= n_max:
        for m in (1, 2, 5):
            n = m * base
            if n_min <= n <= n_max:
                grid.append(n)
        base *= 10
    if not grid:
        raise ValueError("empty grid")
    return grid


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one sweep/scan/Monte-Carlo invocation."""

    experiment: str
    n_grid: tuple[int, ...] = ()
    delta: float = 1e-16
    working: str = "binary32"
    oracle: str = "binary64"
    u: float | None = None  # defaults to the working precision's unit roundoff
    families: tuple[str, ...] = ("mixed-sign",)
    seeds: tuple[int, ...] = (1, 2, 3)
    dist: str = "uniform"
    trials: int = 100_000
    sort: str = "none"  # none | asc | desc (by |x_k y_k|)
    fresh_draws: bool = False  # False: prefix-consistent vectors across the grid
    out_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        grid = tuple(int(n) for n in self.n_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])) or any(n < 1 for n in grid):
            raise ValueError("n_grid must be strictly increasing with all entries >= 1")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(self, "families", tuple(canonical_family(f) for f in self.families))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        check_failure_probability(self.delta)
        if self.sort not in ("none", "asc", "desc"):
            raise ValueError(f"sort must be none, asc or desc, got {self.sort!r}")
        if self.dist not in ("uniform", "two-point"):
            raise ValueError(f"dist must be uniform or two-point, got {self.dist!r}")
        if self.format not in ("csv", "jsonl"):
            raise ValueError(f"format must be csv or jsonl, got {self.format!r}")
        PrecisionSpec(self.working, self.oracle)  # validates the pairing

    @property
    def prec(self) -> PrecisionSpec:
        return PrecisionSpec(self.working, self.oracle)

    @property
    def unit_roundoff(self) -> float:
        return UNIT_ROUNDOFF[self.working] if self.u is None else float(self.u)

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_json_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass(frozen=True)
class SweepRecord:
    """One grid cell: provenance plus the full bound report."""

    experiment: str
    family: str
    seed: int
    n: int
    report: bounds.BoundReport
    viol_flags: str = ""
    flagged_error: str = ""  # e.g. zero inner product; row kept, not a crash


def _sorted_pair(x: np.ndarray, y: np.ndarray, sort: str):
    if sort == "none":
        return x, y
    order = np.argsort(np.abs(x.astype(np.float64) * y.astype(np.float64)), kind="stable")
    if sort == "desc":
        order = order[::-1]
    return x[order], y[order]


def _cell_seed(seed: int, n: int, fresh: bool) -> int:
    if not fresh:
        return seed
    return (seed * (2**32) + n) % (2**64)


def _evaluate_cell(cfg: ExperimentConfig, family: str, seed: int, x, y, n: int) -> SweepRecord:
    u = cfg.unit_roundoff
    experiment = cfg.experiment
    try:
        if experiment in ("roundoff-indep", "roundoff-general", "violation-scan"):
            value, ip = accumulate_value(x, y, cfg.prec)
            if ip == 0.0:
                raise ZeroInnerProduct("exact inner product is zero")
            emp = relative_error(value, ip)
        elif experiment == "perturbation":
            ip = exact_inner_product(x, y)
            if ip == 0.0:
                raise ZeroInnerProduct("exact inner product is zero")
            xh, yh, _, _ = perturb_vectors(x, y, u, cfg.dist, rng_seed=seed)
            emp = relative_error(exact_inner_product(xh, yh), ip)
        else:  # amplifiers
            ip = exact_inner_product(x, y)
            if ip == 0.0:
                raise ZeroInnerProduct("exact inner product is zero")
            emp = None
        report = bounds.bound_report(x, y, u, cfg.delta, empirical_rel_error=emp, exact_ip=ip)
    except ZeroInnerProduct:
        nanrep = bounds.BoundReport(
            n=n, u=u, delta=cfg.delta, empirical_rel_error=None,
            kappa1=math.nan, kappa2=math.nan, kappa_inf=math.nan,
            det_perturb_p2=math.nan, prob_perturb=math.nan, det_trad=math.nan,
            det_indep=math.nan, prob_indep=math.nan, det_martingale=math.nan,
            prob_martingale=math.nan, compact_upper=math.nan, simplest_prob=math.nan,
        )
        return SweepRecord(experiment, family, seed, n, nanrep, flagged_error="zero-inner-product")

    relevant = RELEVANT_BOUNDS[experiment]
    flags = [name for name in relevant if report.violated.get(name, False)]
    return SweepRecord(experiment, family, seed, n, report, viol_flags="|".join(flags))


def _check_record(rec: SweepRecord) -> None:
    """Write-time internal-consistency assertions (ratio identities, det flags)."""
    if rec.flagged_error:
        return
    r = rec.report
    factor = probabilistic_factor(r.delta)
    pairs = (
        (r.det_perturb_p2, r.prob_perturb, math.sqrt(r.n)),
        (r.det_indep, r.prob_indep, math.sqrt(r.n)),
        (r.det_martingale, r.prob_martingale, math.sqrt(2 * r.n - 1)),
    )
    for det, prob, root in pairs:
        expected = root / factor
        if prob > 0 and abs(det / prob - expected) > 1e-12 * expected:
            raise InternalConsistencyError(
                f"det/prob ratio identity broken at n={r.n}: {det/prob} vs {expected}"
            )
    relevant = RELEVANT_BOUNDS.get(rec.experiment, ())
    for name in _DETERMINISTIC:
        if name in relevant and r.violated.get(name, False):
            raise InternalConsistencyError(
                f"deterministic bound {name} flagged as violated at n={r.n} (build bug)"
            )


def _iter_cells(cfg: ExperimentConfig):
    """Yield one SweepRecord per grid cell (CSV ordering is applied at write
    time); vectors are prefix-consistent across the grid unless fresh draws
    were requested."""
    n_max = max(cfg.n_grid)
    for family in cfg.families:
        for seed in cfg.seeds:
            if not cfg.fresh_draws:
                base = generate(family, n_max, _cell_seed(seed, n_max, False), cfg.working)
            for n in cfg.n_grid:
                if cfg.fresh_draws:
                    pair = generate(family, n, _cell_seed(seed, n, True), cfg.working)
                    x, y = pair.x, pair.y
                else:
                    x, y = base.x[:n], base.y[:n]
                x, y = _sorted_pair(x, y, cfg.sort)
                rec = _evaluate_cell(cfg, family, seed, x, y, n)
                _check_record(rec)
                yield rec


def run_sweep(cfg: ExperimentConfig) -> list[SweepRecord]:
    """Run one sweep experiment; writes output files when out_path is set."""
    if cfg.experiment not in ("amplifiers", "perturbation", "roundoff-indep", "roundoff-general"):
        raise ValueError(f"run_sweep cannot run {cfg.experiment!r}")
    records = list(_iter_cells(cfg))
    if cfg.out_path:
        write_sweep_csv(records, cfg.out_path, fmt=cfg.format)
        write_sidecar(cfg, cfg.out_path)
    return records


def run_amplifiers(cfg: ExperimentConfig) -> list[SweepRecord]:
    return run_sweep(dataclasses.replace(cfg, experiment="amplifiers"))


def run_perturbation(cfg: ExperimentConfig) -> list[SweepRecord]:
    return run_sweep(dataclasses.replace(cfg, experiment="perturbation"))


def run_roundoff_indep(cfg: ExperimentConfig) -> list[SweepRecord]:
    return run_sweep(dataclasses.replace(cfg, experiment="roundoff-indep"))


def run_roundoff_general(cfg: ExperimentConfig) -> list[SweepRecord]:
    return run_sweep(dataclasses.replace(cfg, experiment="roundoff-general"))


def azuma_monte_carlo(coeffs, delta: float, trials: int, seed: int = 0) -> tuple[int, float]:
    """Empirical tail check: Rademacher sums against the concentration radius.

    Draws ``trials`` independent sums sum_k eps_k c_k with eps_k = +/-1
    equiprobable and counts how often |sum| exceeds
    :func:`dotbounds.bounds.azuma_tail`.  Returns (count, rate); the rate
    should stay below delta plus binomial slack.
    """
    delta = check_failure_probability(delta)
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    c = np.asarray(
        coeffs.coeffs if isinstance(coeffs, bounds.CoefficientVector) else coeffs,
        dtype=np.float64,
    )
    tail = bounds.azuma_tail(c, delta)
    gen = stream(seed, STREAM_SIGNS)
    batch = max(1, min(trials, 8_000_000 // max(1, c.size)))
    count = 0
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        signs = gen.integers(0, 2, size=(b, c.size)).astype(np.float64) * 2.0 - 1.0
        sums = signs @ c
        count += int(np.count_nonzero(np.abs(sums) > tail))
        done += b
    return count, count / trials


@dataclass(frozen=True)
class ScanResult:
    """Violation-scan outcome: per-cell records and first-violation summary.

    ``first_violation[bound][seed][sort]`` is the smallest tested n where
    the empirical error exceeded that probabilistic bound, or None.
    """

    records: list[SweepRecord]
    first_violation: dict
    sorts: tuple[str, ...] = ("none", "asc", "desc")


_SCAN_BOUNDS = ("prob_indep", "prob_martingale", "compact_upper", "simplest_prob")


def violation_scan(
    family: str,
    delta: float = 1e-16,
    prec: PrecisionSpec = PrecisionSpec(),
    n_max: int = 10**7,
    seeds=(1,),
    n_min: int = 10**4,
    out_path: str | None = None,
) -> ScanResult:
    """Forward scan for the smallest dimension violating a probabilistic bound.

    Walks a geometric grid up to n_max for each seed, and repeats the scan
    with the products sorted ascending and descending by magnitude as a
    robustness check; the verdict should not depend on the ordering.
    """
    family = canonical_family(family)
    grid = scan_grid(n_min=n_min, n_max=n_max)
    base_cfg = ExperimentConfig(
        experiment="violation-scan",
        n_grid=tuple(grid),
        delta=delta,
        working=prec.working,
        oracle=prec.oracle,
        families=(family,),
        seeds=tuple(seeds),
        out_path=out_path,
    )
    records: list[SweepRecord] = []
    first: dict = {b: {int(s): {} for s in seeds} for b in _SCAN_BOUNDS}
    sorts = ("none", "asc", "desc")
    for sort in sorts:
        cfg = dataclasses.replace(base_cfg, sort=sort, experiment="violation-scan")
        for rec in _iter_cells(cfg):
            rec = dataclasses.replace(rec, experiment=f"violation-scan:{sort}")
            records.append(rec)
            if rec.flagged_error:
                continue
            for b in _SCAN_BOUNDS:
                if rec.report.violated.get(b, False) and sort not in first[b][rec.seed]:
                    first[b][rec.seed][sort] = rec.n
    for b in _SCAN_BOUNDS:
        for s in first[b]:
            for sort in sorts:
                first[b][s].setdefault(sort, None)
    result = ScanResult(records=records, first_violation=first, sorts=sorts)
    if out_path:
        write_sweep_csv(records, out_path, fmt=base_cfg.format)
        write_sidecar(base_cfg, out_path, extra={"first_violation": first, "sorts": list(sorts)})
    return result


def _fmt(v) -> str:
    if v is None:
        return "nan"
    return repr(float(v))


def _record_row(rec: SweepRecord) -> str:
    r = rec.report
    cells = [
        rec.experiment,
        rec.family,
        str(rec.seed),
        str(rec.n),
        _fmt(r.empirical_rel_error),
        _fmt(r.kappa1),
        _fmt(r.kappa2),
        _fmt(r.kappa_inf),
        _fmt(r.det_perturb_p2),
        _fmt(r.prob_perturb),
        _fmt(r.det_trad),
        _fmt(r.det_indep),
        _fmt(r.prob_indep),
        _fmt(r.det_martingale),
        _fmt(r.prob_martingale),
        _fmt(r.simplest_prob),
        rec.viol_flags if not rec.flagged_error else rec.flagged_error,
    ]
    return ",".join(cells)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sweep_csv(records, path, fmt: str = "csv") -> None:
    """Write records in (experiment, family, n, seed) order, atomically."""
    ordered = sorted(records, key=lambda r: (r.experiment, r.family, r.n, r.seed))
    if fmt == "csv":
        lines = [CSV_HEADER]
        lines += [_record_row(r) for r in ordered]
        _atomic_write(str(path), "\n".join(lines) + "\n")
    elif fmt == "jsonl":
        lines = []
        for rec in ordered:
            d = dataclasses.asdict(rec.report)
            d.update(
                experiment=rec.experiment, family=rec.family, seed=rec.seed,
                viol_flags=rec.viol_flags, flagged_error=rec.flagged_error,
            )
            lines.append(json.dumps(d, sort_keys=True))
        _atomic_write(str(path), "\n".join(lines) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def write_sidecar(cfg: ExperimentConfig, csv_path, extra: dict | None = None) -> str:
    """Write the JSON provenance sidecar next to the CSV; returns its path."""
    payload = {
        "config": cfg.to_json_dict(),
        "rng_algorithm": RNG_ALGORITHM,
        "backend": _kernels.active_name(),
        "schema": CSV_HEADER,
    }
    if extra:
        payload.update(extra)
    side = str(csv_path) + ".config.json"
    _atomic_write(side, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return side
