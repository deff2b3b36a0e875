"""Closed-form error bounds and amplifiers for inner-product accumulation.

Everything here is pure binary64 evaluation of explicit formulas: the
growth factor gamma, the three condition-number-like amplifiers, the
deterministic and probabilistic perturbation bounds, per-summand roundoff
coefficient vectors for two roundoff models, and the concentration-based
roundoff bounds built from them.  Denominators use the exact inner product
from :mod:`dotbounds.simulate` (never the working-precision value); a
precomputed value can be passed to avoid recomputation.

Every probabilistic bound carries the shared factor sqrt(2 ln(2/delta)),
where delta is the allowed failure probability; its deterministic
counterpart replaces that factor by sqrt(n) (or sqrt(2n-1) for the
martingale model), so each det/prob pair differs by exactly that ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exceptions import ZeroInnerProduct
from .precision import check_failure_probability, check_unit_roundoff, probabilistic_factor
from .simulate import exact_inner_product

__all__ = [
    "CoefficientVector",
    "BoundReport",
    "gamma",
    "gamma_classic_bound",
    "amplifier",
    "det_perturbation_bound",
    "prob_perturbation_bound",
    "coeffs_indep",
    "coeffs_martingale",
    "azuma_tail",
    "det_roundoff_trad",
    "det_roundoff_indep",
    "prob_roundoff_indep",
    "det_roundoff_martingale",
    "prob_roundoff_martingale",
    "compact_upper",
    "simplest_prob_bound",
    "bound_report",
    "crossover_dimension",
]

PERTURBATION_MODEL = "perturbation"
INDEP_MODEL = "independent"
MARTINGALE_MODEL = "martingale"
_MODELS = (PERTURBATION_MODEL, INDEP_MODEL, MARTINGALE_MODEL)

#: Relative-error bound fields of a BoundReport, in report order.
BOUND_FIELDS = (
    "det_perturb_p2",
    "prob_perturb",
    "det_trad",
    "det_indep",
    "prob_indep",
    "det_martingale",
    "prob_martingale",
    "compact_upper",
    "simplest_prob",
)


def gamma(k: int, u: float) -> float:
    """Accumulated-roundoff growth factor (1+u)**k - 1.

    Evaluated as expm1(k*log1p(u)) so small u does not cancel.
    """
    u = check_unit_roundoff(u)
    k = int(k)
    if k < 1:
        raise ValueError(f"gamma requires k >= 1, got {k}")
    return float(math.expm1(k * math.log1p(u)))


def gamma_classic_bound(k: int, u: float) -> float:
    """Classical upper estimate k*u/(1 - k*u); requires k*u < 1."""
    u = check_unit_roundoff(u)
    k = int(k)
    if k < 1:
        raise ValueError(f"gamma_classic_bound requires k >= 1, got {k}")
    ku = k * u
    if ku >= 1.0:
        raise ValueError(f"gamma_classic_bound requires k*u < 1, got k*u = {ku}")
    return ku / (1.0 - ku)


def _gamma_vec(ks: np.ndarray, u: float) -> np.ndarray:
    return np.expm1(ks * math.log1p(u))


def _abs_products(x, y) -> np.ndarray:
    x64 = np.asarray(x, dtype=np.float64)
    y64 = np.asarray(y, dtype=np.float64)
    if x64.ndim != 1 or x64.shape != y64.shape:
        raise ValueError("x and y must be one-dimensional vectors of equal length")
    if x64.size == 0:
        raise ValueError("vectors must have length >= 1")
    return np.abs(x64 * y64)


def _denominator(x, y, exact_ip: float | None) -> float:
    ip = exact_inner_product(np.asarray(x), np.asarray(y)) if exact_ip is None else float(exact_ip)
    if ip == 0.0:
        raise ZeroInnerProduct("the exact inner product is zero")
    return abs(ip)


def _one_norm_products(x, y) -> float:
    """|x|^T |y|, accumulated by the same exact oracle as the denominator.

    Sharing the oracle makes kappa_1 exactly 1 for same-sign vectors.
    """
    return exact_inner_product(np.abs(np.asarray(x)), np.abs(np.asarray(y)))


def amplifier(p, x, y, *, exact_ip: float | None = None) -> float:
    """Condition-number-like amplifier of the u-term in the relative bounds.

    p selects the norm pairing: 1 gives ||x.y||_1/|x^T y| (the classical
    inner-product condition number), 2 gives sqrt(n)*||x.y||_2/|x^T y|,
    and inf gives n*||x.y||_inf/|x^T y|.
    """
    absp = _abs_products(x, y)
    denom = _denominator(x, y, exact_ip)
    n = absp.size
    if p == 1:
        return _one_norm_products(x, y) / denom
    if p == 2:
        return math.sqrt(n) * float(np.linalg.norm(absp)) / denom
    if p == math.inf:
        return n * float(np.max(absp)) / denom
    raise ValueError(f"p must be 1, 2 or inf, got {p!r}")


def det_perturbation_bound(x, y, u: float, p=2, *, exact_ip: float | None = None) -> float:
    """Worst-case relative error under componentwise perturbations of size u."""
    u = check_unit_roundoff(u)
    return amplifier(p, x, y, exact_ip=exact_ip) * (u * (2.0 + u))


def prob_perturbation_bound(x, y, u: float, delta: float, *, exact_ip: float | None = None) -> float:
    """Relative perturbation error bound holding with probability >= 1-delta.

    Uses the unscaled two-norm amplifier ||x.y||_2/|x^T y| times
    sqrt(2 ln(2/delta)) * u*(2+u); independent zero-mean perturbations.
    """
    u = check_unit_roundoff(u)
    factor = probabilistic_factor(delta)
    absp = _abs_products(x, y)
    denom = _denominator(x, y, exact_ip)
    return float(np.linalg.norm(absp)) / denom * factor * (u * (2.0 + u))


@dataclass(frozen=True)
class CoefficientVector:
    """Per-step bound coefficients of one roundoff model.

    ``coeffs`` has length n for the perturbation and independent models
    and 2n-1 for the martingale model (n multiply steps interleaved with
    n-1 add steps); all entries are non-negative.  ``u`` records the unit
    roundoff the coefficients were built from.
    """

    model: str
    coeffs: np.ndarray
    u: float

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}, got {self.model!r}")
        self.coeffs.flags.writeable = False

    @property
    def sumsq(self) -> float:
        return float(np.sum(self.coeffs * self.coeffs))


def coeffs_indep(x, y, u: float) -> CoefficientVector:
    """Local-error coefficients when every roundoff acts independently.

    The first summand rides through all n-1 later adds: its coefficient is
    |x_1 y_1|*gamma_n; summand k >= 2 gets |x_k y_k|*gamma_{n-k+2}.
    """
    u = check_unit_roundoff(u)
    absp = _abs_products(x, y)
    n = absp.size
    exps = np.empty(n)
    exps[0] = n
    exps[1:] = np.arange(n, 1, -1, dtype=np.float64)
    return CoefficientVector(INDEP_MODEL, absp * _gamma_vec(exps, u), u)


def coeffs_martingale(x, y, u: float) -> CoefficientVector:
    """Increment coefficients of the partial-sum error martingale.

    Odd entries (steps 1, 3, ...) bound the exact pre-rounding partial
    sums; even entries are the bare |x_k y_k|.  Computed incrementally in
    O(n): each odd coefficient is (previous + |x_k y_k|) * (1+u).
    """
    u = check_unit_roundoff(u)
    absp = _abs_products(x, y)
    return CoefficientVector(MARTINGALE_MODEL, _kernels.active().martingale_coeffs(absp, u), u)


def azuma_tail(coeffs, delta: float) -> float:
    """Concentration radius sqrt(sum c_k^2) * sqrt(2 ln(2/delta)).

    With probability at least 1-delta, a sum of zero-mean increments
    bounded by the c_k stays within this radius of zero.
    """
    factor = probabilistic_factor(delta)
    c = np.asarray(coeffs.coeffs if isinstance(coeffs, CoefficientVector) else coeffs, dtype=np.float64)
    if c.size == 0:
        raise ValueError("coefficient vector must be non-empty")
    return float(np.sqrt(np.sum(c * c))) * factor


def _indep_root(x, y, u: float, exact_ip: float | None) -> float:
    """sqrt(sum of squared independent-model coefficients) / |x^T y|."""
    cv = coeffs_indep(x, y, u)
    return math.sqrt(cv.sumsq) / _denominator(x, y, exact_ip)


def _martingale_root(x, y, u: float, exact_ip: float | None) -> float:
    """sqrt(sum of squared martingale coefficients) / |x^T y|."""
    u = check_unit_roundoff(u)
    absp = _abs_products(x, y)
    sumsq = float(_kernels.active().martingale_sumsq(absp, u))
    return math.sqrt(sumsq) / _denominator(x, y, exact_ip)


def det_roundoff_trad(x, y, u: float, *, exact_ip: float | None = None) -> float:
    """Traditional worst-case roundoff bound: kappa_1 * gamma_n."""
    u = check_unit_roundoff(u)
    n = _abs_products(x, y).size
    return _one_norm_products(x, y) / _denominator(x, y, exact_ip) * gamma(n, u)


def det_roundoff_indep(x, y, u: float, *, exact_ip: float | None = None) -> float:
    """Deterministic companion of the independent-roundoff bound (factor sqrt(n))."""
    n = _abs_products(x, y).size
    return math.sqrt(n) * _indep_root(x, y, u, exact_ip)


def prob_roundoff_indep(x, y, u: float, delta: float, *, exact_ip: float | None = None) -> float:
    """Roundoff bound for independent zero-mean roundoffs, probability >= 1-delta."""
    return probabilistic_factor(delta) * _indep_root(x, y, u, exact_ip)


def det_roundoff_martingale(x, y, u: float, *, exact_ip: float | None = None) -> float:
    """Deterministic companion of the martingale bound (factor sqrt(2n-1))."""
    u = check_unit_roundoff(u)
    n = _abs_products(x, y).size
    return math.sqrt(2 * n - 1) * _martingale_root(x, y, u, exact_ip) * u


def prob_roundoff_martingale(x, y, u: float, delta: float, *, exact_ip: float | None = None) -> float:
    """Martingale roundoff bound, probability >= 1-delta, no independence assumed."""
    u = check_unit_roundoff(u)
    return probabilistic_factor(delta) * _martingale_root(x, y, u, exact_ip) * u


def compact_upper(x, y, u: float, p=1, delta: float | None = None, *, exact_ip: float | None = None) -> float:
    """Martingale bound with the coefficient sum relaxed via Hoelder prefixes.

    Replaces sum(c_k^2) by ||x.y||_2^2 plus, for each k >= 2, the squared
    Hoelder pairing of the leading-k product prefix (p-norm) with the
    matching vector of (1+u) powers (conjugate q-norm).  With ``delta``
    the probabilistic factor sqrt(2 ln(2/delta)) applies, otherwise the
    deterministic sqrt(2n-1).
    """
    u = check_unit_roundoff(u)
    absp = _abs_products(x, y)
    denom = _denominator(x, y, exact_ip)
    n = absp.size
    lg = math.log1p(u)

    total = float(np.sum(absp * absp))
    if n > 1:
        k = np.arange(2.0, n + 1.0)
        if p == 1:
            prefix = np.cumsum(absp)[1:]
            pw = np.exp((k - 1.0) * lg)  # max entry of the power vector
            total += float(np.sum((prefix * pw) ** 2))
        elif p == 2:
            prefix_sq = np.cumsum(absp * absp)[1:]
            # squared 2-norm of the power vector: (1+u)^(2(k-1)) + sum_{m=1..k-1} (1+u)^(2m),
            # the geometric tail being (gamma_2k - (u^2+2u)) / (u^2+2u)
            ratio_m1 = u * (u + 2.0)
            powsq = np.exp(2.0 * (k - 1.0) * lg) + (np.expm1(2.0 * k * lg) - ratio_m1) / ratio_m1
            total += float(np.sum(prefix_sq * powsq))
        elif p == math.inf:
            prefix_max = np.maximum.accumulate(absp)[1:]
            # 1-norm of the power vector: (1+u)^(k-1) + sum_{m=1..k-1} (1+u)^m,
            # the geometric tail being (gamma_k - u) / u
            pow1 = np.exp((k - 1.0) * lg) + (np.expm1(k * lg) - u) / u
            total += float(np.sum((prefix_max * pow1) ** 2))
        else:
            raise ValueError(f"p must be 1, 2 or inf, got {p!r}")
    factor = probabilistic_factor(delta) if delta is not None else math.sqrt(2 * n - 1)
    return math.sqrt(total) / denom * factor * u


def simplest_prob_bound(x, y, u: float, delta: float, *, exact_ip: float | None = None) -> float:
    """Fully closed-form probabilistic roundoff bound.

    kappa_1 * sqrt(2 ln(2/delta)) * sqrt(u*gamma_{2n}/2); the square-root
    term grows like sqrt(n)*u, against gamma_n ~ n*u in the traditional
    deterministic bound.
    """
    u = check_unit_roundoff(u)
    factor = probabilistic_factor(delta)
    n = _abs_products(x, y).size
    kappa1 = _one_norm_products(x, y) / _denominator(x, y, exact_ip)
    return kappa1 * factor * math.sqrt(u * gamma(2 * n, u) / 2.0)


@dataclass(frozen=True)
class BoundReport:
    """Every implemented bound and amplifier for one (x, y, u, delta) instance.

    ``compact_upper`` is the probabilistic p=1 variant, so the chain
    prob_martingale <= compact_upper <= simplest_prob holds.  ``violated``
    maps bound names to ``empirical > bound``; it is empty when no
    empirical error was supplied.
    """

    n: int
    u: float
    delta: float
    empirical_rel_error: float | None
    kappa1: float
    kappa2: float
    kappa_inf: float
    det_perturb_p2: float
    prob_perturb: float
    det_trad: float
    det_indep: float
    prob_indep: float
    det_martingale: float
    prob_martingale: float
    compact_upper: float
    simplest_prob: float
    violated: dict = field(default_factory=dict)


def bound_report(
    x,
    y,
    u: float,
    delta: float,
    *,
    empirical_rel_error: float | None = None,
    exact_ip: float | None = None,
) -> BoundReport:
    """Evaluate all amplifiers and bounds for one instance."""
    u = check_unit_roundoff(u)
    delta = check_failure_probability(delta)
    denom = _denominator(x, y, exact_ip)
    report = BoundReport(
        n=_abs_products(x, y).size,
        u=u,
        delta=delta,
        empirical_rel_error=empirical_rel_error,
        kappa1=amplifier(1, x, y, exact_ip=denom),
        kappa2=amplifier(2, x, y, exact_ip=denom),
        kappa_inf=amplifier(math.inf, x, y, exact_ip=denom),
        det_perturb_p2=det_perturbation_bound(x, y, u, p=2, exact_ip=denom),
        prob_perturb=prob_perturbation_bound(x, y, u, delta, exact_ip=denom),
        det_trad=det_roundoff_trad(x, y, u, exact_ip=denom),
        det_indep=det_roundoff_indep(x, y, u, exact_ip=denom),
        prob_indep=prob_roundoff_indep(x, y, u, delta, exact_ip=denom),
        det_martingale=det_roundoff_martingale(x, y, u, exact_ip=denom),
        prob_martingale=prob_roundoff_martingale(x, y, u, delta, exact_ip=denom),
        compact_upper=compact_upper(x, y, u, p=1, delta=delta, exact_ip=denom),
        simplest_prob=simplest_prob_bound(x, y, u, delta, exact_ip=denom),
    )
    if empirical_rel_error is not None:
        for name in BOUND_FIELDS:
            report.violated[name] = bool(empirical_rel_error > getattr(report, name))
    return report


def crossover_dimension(model: str, delta: float, u: float | None = None) -> int:
    """Smallest dimension where the probabilistic bound beats the deterministic one.

    For ``"perturbation"`` and ``"independent"`` the pair differs by
    sqrt(n) vs sqrt(2 ln(2/delta)); for ``"martingale"`` by sqrt(2n-1);
    for ``"simplest"`` the comparison is gamma_n vs the sqrt(u*gamma_2n/2)
    term and needs ``u``.  Determined by plain < comparisons of the
    evaluated factors (no special tie handling).
    """
    factor = probabilistic_factor(delta)
    if model in (PERTURBATION_MODEL, INDEP_MODEL):
        def tighter(n):
            return factor < math.sqrt(n)
    elif model == MARTINGALE_MODEL:
        def tighter(n):
            return factor < math.sqrt(2 * n - 1)
    elif model == "simplest":
        if u is None:
            raise ValueError("crossover for 'simplest' needs the unit roundoff u")
        uu = check_unit_roundoff(u)

        def tighter(n):
            return factor * math.sqrt(uu * gamma(2 * n, uu) / 2.0) < gamma(n, uu)
    else:
        raise ValueError(f"unknown model {model!r}")
    n = 1
    while not tighter(n):
        n += 1
        if n > 10**9:
            raise RuntimeError("no crossover found below 1e9")
    return n
