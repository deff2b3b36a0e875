"""Reduced-precision inner-product accumulation with roundoff extraction.

The accumulation runs left to right in the working precision, storing each
product before the add so no multiply-add fusion can occur.  Every
operation's exact relative roundoff is recovered with error-free
transformations (TwoSum for adds; products are exact in the wider format).
A step-indexed trace interleaves multiply and add stages: odd steps hold
the exact pre-rounding sums, even steps the working-precision values, so
step 2n is the computed result.

The oracle reference uses compensated binary64 accumulation for binary32
work (products exact, error second order in 2**-53) and a double-double
running sum for binary64 work.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._rng import STREAM_DELTA, STREAM_THETA, stream
from .exceptions import InputNotRepresentable, ZeroInnerProduct
from .precision import BINARY32, BINARY64, PrecisionSpec

__all__ = [
    "RoundoffTrace",
    "accumulate",
    "accumulate_value",
    "accumulate_model1",
    "exact_inner_product",
    "perturb_vectors",
    "relative_error",
    "write_trace_csv",
]


def relative_error(approx: float, exact: float) -> float:
    """|approx - exact| / |exact|; the exact value must be nonzero."""
    if exact == 0.0:
        raise ZeroInnerProduct("relative error undefined: exact value is zero")
    return abs(float(approx) - float(exact)) / abs(float(exact))


def _as_working(v, working: str, name: str) -> np.ndarray:
    """Coerce to the working dtype, rejecting values that would round."""
    arr = np.asarray(v)
    if working == BINARY32:
        if arr.dtype == np.float32:
            return arr
        narrowed = arr.astype(np.float64).astype(np.float32)
        if not np.array_equal(narrowed.astype(np.float64), arr.astype(np.float64)):
            raise InputNotRepresentable(f"{name} has entries not representable in binary32")
        return narrowed
    if arr.dtype == np.float64:
        return arr
    return arr.astype(np.float64)


def _check_pair(x, y, prec: PrecisionSpec):
    x = _as_working(x, prec.working, "x")
    y = _as_working(y, prec.working, "y")
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise ValueError("x and y must be one-dimensional vectors of equal length")
    if x.size == 0:
        raise ValueError("vectors must have length >= 1")
    return x, y


@dataclass(frozen=True)
class RoundoffTrace:
    """Per-step record of one simulated accumulation.

    ``shat[i]`` and ``s_exact[i]`` are the computed and exact partial sums
    at step i+1 (1-based steps 1..2n), ``deltas[i]`` the roundoff applied
    between steps i+1 and i+2, and ``z = shat - s_exact`` the partial-sum
    error trajectory (z[0] == 0).  Values are stored as binary64; odd-step
    exact sums may carry one binary64 rounding.
    """

    n: int
    working: str
    shat: np.ndarray
    s_exact: np.ndarray
    deltas: np.ndarray
    z: np.ndarray = field(repr=False)

    def __post_init__(self):
        for a in (self.shat, self.s_exact, self.deltas, self.z):
            a.flags.writeable = False

    @property
    def value(self) -> float:
        """The working-precision result, step 2n."""
        return float(self.shat[-1])

    @property
    def exact(self) -> float:
        """The oracle inner product, step 2n of the exact column."""
        return float(self.s_exact[-1])

    def rel_error(self) -> float:
        return relative_error(self.value, self.exact)


def accumulate(x, y, prec: PrecisionSpec = PrecisionSpec()) -> RoundoffTrace:
    """Simulate the accumulation and extract every per-operation roundoff.

    The final working-precision value is bit-identical to a plain
    ``total += fl(x[k]*y[k])`` loop; memory is O(n).  For large n where
    only the final error matters, use :func:`accumulate_value`.
    """
    x, y = _check_pair(x, y, prec)
    kern = _kernels.active()
    if prec.working == BINARY32:
        shat, s_exact, deltas = kern.accumulate_trace_b32(x, y)
    else:
        shat, s_exact, deltas = kern.accumulate_trace_b64(x, y)
    z = shat - s_exact
    return RoundoffTrace(
        n=x.size, working=prec.working, shat=shat, s_exact=s_exact, deltas=deltas, z=z
    )


def accumulate_value(x, y, prec: PrecisionSpec = PrecisionSpec()) -> tuple[float, float]:
    """Streaming accumulation: (working-precision result, oracle inner product).

    Same arithmetic as :func:`accumulate` without per-step storage.
    """
    x, y = _check_pair(x, y, prec)
    kern = _kernels.active()
    if prec.working == BINARY32:
        return kern.accumulate_final_b32(x, y)
    return kern.accumulate_final_b64(x, y)


def accumulate_model1(x, y, prec: PrecisionSpec = PrecisionSpec()):
    """Accumulation under the summand-wise bookkeeping of the traditional model.

    Returns ``(value, local_errors)`` where ``value`` is bit-identical to
    :func:`accumulate`'s step-2n result (same arithmetic, different
    bookkeeping) and ``local_errors[k]`` is the realized error contribution
    of summand k: its product times the accumulated relative factor from
    its own multiply roundoff and every later add roundoff, minus one.
    """
    trace = accumulate(x, y, prec)
    n = trace.n
    deltas = trace.deltas
    theta = np.empty(n)  # multiply roundoffs, one per summand
    theta[0] = deltas[0]
    theta[1:] = deltas[1::2]
    add_roundoffs = deltas[2::2]  # add roundoffs for summands 2..n

    p = np.asarray(x, dtype=np.float64) * np.asarray(y, dtype=np.float64)
    if prec.working == BINARY64:
        # binary64 products round; recover the exact products to f64 accuracy
        p = p / (1.0 + theta)

    local = np.empty(n)
    if n == 1:
        local[0] = p[0] * theta[0]
    else:
        # suffix[i] = prod of (1 + add roundoff) over summands i+2 .. n
        suffix = np.cumprod((1.0 + add_roundoffs)[::-1])[::-1]
        local[0] = p[0] * ((1.0 + theta[0]) * suffix[0] - 1.0)
        local[1:] = p[1:] * ((1.0 + theta[1:]) * suffix - 1.0)
    return trace.value, local


def exact_inner_product(x, y, oracle: str = BINARY64) -> float:
    """Inner product accumulated in the oracle precision.

    For binary32 inputs with a binary64 oracle every product is exact and
    only the (compensated) additions round.  binary64 inputs always go
    through exact TwoProduct plus a double-double-quality sum, regardless
    of the requested oracle name.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be one-dimensional vectors of equal length")
    kern = _kernels.active()
    if x.dtype == np.float32 and y.dtype == np.float32:
        return float(kern.exact_dot_b32(x, y))
    return float(kern.exact_dot_b64(x.astype(np.float64), y.astype(np.float64)))


def perturb_vectors(x, y, u: float, dist: str = "uniform", rng_seed: int = 0):
    """Apply componentwise relative perturbations of magnitude at most u.

    ``dist`` is ``"uniform"`` (iid uniform on [-u, u]) or ``"two-point"``
    (iid +/-u with equal probability, the worst-case-magnitude variant).
    Returns ``(xh, yh, deltas, thetas)``; the perturbed entries are formed
    in binary64 so the perturbation is the only error source.
    """
    x64 = np.asarray(x, dtype=np.float64)
    y64 = np.asarray(y, dtype=np.float64)
    u = float(u)
    if u < 0:
        raise ValueError("perturbation level u must be non-negative")
    gd = stream(rng_seed, STREAM_DELTA)
    gt = stream(rng_seed, STREAM_THETA)
    if dist == "uniform":
        deltas = u * (2.0 * gd.random(x64.size) - 1.0)
        thetas = u * (2.0 * gt.random(y64.size) - 1.0)
    elif dist == "two-point":
        deltas = u * (2.0 * gd.integers(0, 2, x64.size).astype(np.float64) - 1.0)
        thetas = u * (2.0 * gt.integers(0, 2, y64.size).astype(np.float64) - 1.0)
    else:
        raise ValueError(f"unknown perturbation distribution {dist!r}")
    return x64 * (1.0 + deltas), y64 * (1.0 + thetas), deltas, thetas


def write_trace_csv(trace: RoundoffTrace, path) -> None:
    """Dump a trace as CSV with columns (k, shat, s_exact, delta, z).

    One row per step k = 1..2n; the delta cell is empty at k = 2n (there
    are only 2n-1 roundoffs).  Floats use round-trip-exact formatting.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("k,shat,s_exact,delta,z\n")
        for i in range(2 * trace.n):
            d = repr(float(trace.deltas[i])) if i < 2 * trace.n - 1 else ""
            fh.write(
                f"{i + 1},{float(trace.shat[i])!r},{float(trace.s_exact[i])!r},"
                f"{d},{float(trace.z[i])!r}\n"
            )
