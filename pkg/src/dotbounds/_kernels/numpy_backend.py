"""Pure-numpy kernel implementations.

Sequential working-precision sums are obtained from ``np.cumsum``, which
accumulates strictly left to right, and the per-operation roundoffs are
recovered with vectorized error-free transformations (Knuth TwoSum, and
exact products via the widened precision or a Dekker split).

The binary32 paths are arithmetic-for-arithmetic identical to the numba
backend: same operation sequence, so bit-identical results.  binary64
oracle paths use a vectorized two-pass compensation instead of a running
double-double sum and may differ from numba in the last ulp.
"""

from __future__ import annotations

import numpy as np

_F32 = np.float32
_F64 = np.float64

# Chunk length for streaming accumulation; bounds peak memory at a few MB.
_CHUNK = 1 << 20

# 2**27 + 1, Dekker's splitter for binary64.
_SPLITTER = 134217729.0


def _cumsum_residuals(csum: np.ndarray, terms: np.ndarray, prev) -> np.ndarray:
    """Exact TwoSum residuals of each add in a sequential cumulative sum.

    ``csum[i] = fl(csum[i-1] + terms[i])`` with ``csum[-1]`` taken as
    ``prev``; the returned ``e`` satisfies ``csum[i-1] + terms[i] ==
    csum[i] + e[i]`` exactly (round-to-nearest).
    """
    a = np.empty_like(csum)
    a[0] = prev
    a[1:] = csum[:-1]
    bp = csum - a
    return (a - (csum - bp)) + (terms - bp)


def _compensated_cumsum(terms: np.ndarray, prev_sum, prev_comp):
    """Sequential cumsum of ``terms`` plus a running compensation term.

    Returns ``(csum, comp, best)`` where ``csum`` are the plain sequential
    partial sums continuing from ``prev_sum``, ``comp`` the running sum of
    the TwoSum residuals continuing from ``prev_comp`` (chained exactly as
    a scalar ``comp += e`` loop would), and ``best = csum + comp`` the
    compensated per-step estimates (error is second order in the binary64
    roundoff).
    """
    buf = np.empty(terms.size + 1, dtype=_F64)
    buf[0] = prev_sum
    buf[1:] = terms
    csum = np.cumsum(buf)[1:]
    e = _cumsum_residuals(csum, terms, prev_sum)
    buf[0] = prev_comp
    buf[1:] = e
    comp = np.cumsum(buf)[1:]
    return csum, comp, csum + comp


def _products_b32(x32: np.ndarray, y32: np.ndarray, with_deltas: bool = True):
    """Exact products, working-precision products, and multiply roundoffs.

    For binary32 inputs the binary64 product is exact, so the relative
    multiply roundoff is recovered directly (0 where the product is 0).
    """
    p64 = x32.astype(_F64) * y32.astype(_F64)
    p32 = p64.astype(_F32)
    if not with_deltas:
        return p64, p32, None
    with np.errstate(divide="ignore", invalid="ignore"):
        dmult = (p32.astype(_F64) - p64) / p64
    dmult[p64 == 0.0] = 0.0
    return p64, p32, dmult


def _working_sums_b32(p32: np.ndarray, prev):
    """Sequential binary32 partial sums and exact per-add residuals."""
    buf = np.empty(p32.size + 1, dtype=_F32)
    buf[0] = prev
    buf[1:] = p32
    w = np.cumsum(buf)[1:]
    e = _cumsum_residuals(w, p32, _F32(prev))
    return w, e


def accumulate_trace_b32(x32: np.ndarray, y32: np.ndarray):
    """Full 2n-step trace of the binary32 accumulation model."""
    n = x32.size
    p64, p32, dmult = _products_b32(x32, y32)
    w, e = _working_sums_b32(p32, _F32(0.0))

    # exact value entering each add, representable in binary64
    odd = w.astype(_F64) + e.astype(_F64)
    with np.errstate(divide="ignore", invalid="ignore"):
        dadd = -e.astype(_F64) / odd
    dadd[odd == 0.0] = 0.0

    shat = np.empty(2 * n, dtype=_F64)
    shat[0] = p64[0]
    shat[1::2] = w
    shat[2::2] = odd[1:]

    deltas = np.empty(2 * n - 1, dtype=_F64)
    deltas[0] = dmult[0]
    deltas[1::2] = dmult[1:]
    deltas[2::2] = dadd[1:]

    _, _, best = _compensated_cumsum(p64, 0.0, 0.0)
    s_exact = np.repeat(best, 2)
    return shat, s_exact, deltas


def accumulate_final_b32(x32: np.ndarray, y32: np.ndarray):
    """Streaming binary32 accumulation: final sum and compensated oracle."""
    w = _F32(0.0)
    csum = 0.0
    comp = 0.0
    for lo in range(0, x32.size, _CHUNK):
        p64, p32, _ = _products_b32(x32[lo : lo + _CHUNK], y32[lo : lo + _CHUNK], with_deltas=False)
        wc, _ = _working_sums_b32(p32, w)
        w = wc[-1]
        cs, cp, _ = _compensated_cumsum(p64, csum, comp)
        csum = cs[-1]
        comp = cp[-1]
    return float(w), csum + comp


def _split(a: np.ndarray):
    """Dekker split into high/low parts with non-overlapping 26-bit halves."""
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(x64: np.ndarray, y64: np.ndarray):
    """Exact binary64 products: ``hi + lo == x*y`` with ``hi = fl(x*y)``."""
    hi = x64 * y64
    xh, xl = _split(x64)
    yh, yl = _split(y64)
    lo = ((xh * yh - hi) + xh * yl + xl * yh) + xl * yl
    return hi, lo


def _products_b64(x64: np.ndarray, y64: np.ndarray):
    hi, lo = _two_prod(x64, y64)
    with np.errstate(divide="ignore", invalid="ignore"):
        dmult = -lo / (hi + lo)
    dmult[hi + lo == 0.0] = 0.0
    return hi, lo, dmult


def accumulate_trace_b64(x64: np.ndarray, y64: np.ndarray):
    """Full trace of the binary64 accumulation model (double-double oracle).

    Stored odd-index partial sums are rounded to binary64; the extracted
    roundoffs themselves are exact to binary64 resolution.
    """
    n = x64.size
    hi, lo, dmult = _products_b64(x64, y64)

    buf = np.empty(n + 1, dtype=_F64)
    buf[0] = 0.0
    buf[1:] = hi
    w = np.cumsum(buf)[1:]
    e = _cumsum_residuals(w, hi, 0.0)
    odd = w + e  # rounds back to w; kept for the zero guard
    with np.errstate(divide="ignore", invalid="ignore"):
        dadd = -e / odd
    dadd[odd == 0.0] = 0.0

    shat = np.empty(2 * n, dtype=_F64)
    shat[0] = hi[0] + lo[0]
    shat[1::2] = w
    shat[2::2] = odd[1:]

    deltas = np.empty(2 * n - 1, dtype=_F64)
    deltas[0] = dmult[0]
    deltas[1::2] = dmult[1:]
    deltas[2::2] = dadd[1:]

    s_exact = np.repeat(_dd_prefix(hi, lo), 2)
    return shat, s_exact, deltas


def _dd_prefix(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    """Per-step double-double prefix sums of exact products, rounded once."""
    out = np.empty(hi.size, dtype=_F64)
    sh = 0.0
    sl = 0.0
    for i in range(hi.size):
        sh, sl = _dd_add(sh, sl, hi[i])
        sh, sl = _dd_add(sh, sl, lo[i])
        out[i] = sh + sl
    return out


def _dd_add(sh: float, sl: float, b: float):
    s = sh + b
    bp = s - sh
    err = (sh - (s - bp)) + (b - bp)
    err += sl
    hi = s + err
    return hi, err - (hi - s)


def accumulate_final_b64(x64: np.ndarray, y64: np.ndarray):
    """Streaming binary64 accumulation with a compensated oracle.

    The oracle is a two-pass compensation over the exact product hi parts
    plus the accumulated lo parts; accurate to a couple of ulps.
    """
    w = 0.0
    csum = 0.0
    comp = 0.0
    losum = 0.0
    for start in range(0, x64.size, _CHUNK):
        hi, lo, _ = _products_b64(x64[start : start + _CHUNK], y64[start : start + _CHUNK])
        buf = np.empty(hi.size + 1, dtype=_F64)
        buf[0] = w
        buf[1:] = hi
        wc = np.cumsum(buf)[1:]
        w = wc[-1]
        cs, cp, _ = _compensated_cumsum(hi, csum, comp)
        csum = cs[-1]
        comp = cp[-1]
        losum += float(np.sum(lo))
    return float(w), csum + (comp + losum)


def exact_dot_b32(x32: np.ndarray, y32: np.ndarray) -> float:
    """Compensated binary64 dot product of binary32 vectors (products exact)."""
    csum = 0.0
    comp = 0.0
    for lo in range(0, x32.size, _CHUNK):
        p64 = x32[lo : lo + _CHUNK].astype(_F64) * y32[lo : lo + _CHUNK].astype(_F64)
        cs, cp, _ = _compensated_cumsum(p64, csum, comp)
        csum = cs[-1]
        comp = cp[-1]
    return csum + comp


def exact_dot_b64(x64: np.ndarray, y64: np.ndarray) -> float:
    """Compensated dot product of binary64 vectors via exact TwoProduct."""
    csum = 0.0
    comp = 0.0
    losum = 0.0
    for start in range(0, x64.size, _CHUNK):
        hi, lo = _two_prod(x64[start : start + _CHUNK], y64[start : start + _CHUNK])
        cs, cp, _ = _compensated_cumsum(hi, csum, comp)
        csum = cs[-1]
        comp = cp[-1]
        losum += float(np.sum(lo))
    return csum + (comp + losum)


def martingale_coeffs(absp: np.ndarray, u: float) -> np.ndarray:
    """All 2n-1 increment coefficients of the partial-sum error martingale.

    Odd entries bound the exact pre-rounding partial sums and satisfy
    ``C_k = (C_{k-1} + |p_k|) * (1+u)`` for k >= 2 with ``C_1 = |p_1|``;
    even entries are the bare products.  Evaluated in O(n) via a scaled
    cumulative sum.
    """
    n = absp.size
    lg = np.log1p(u)
    j = np.arange(n, dtype=_F64)
    terms = absp * np.exp((1.0 - j) * lg)
    terms[0] = absp[0]
    bracket = np.cumsum(terms)
    odd = bracket * np.exp(j * lg)

    out = np.empty(2 * n - 1, dtype=_F64)
    out[0::2] = odd
    out[1::2] = absp[1:]
    return out


def martingale_sumsq(absp: np.ndarray, u: float) -> float:
    """Sum of squared martingale coefficients without materializing them."""
    n = absp.size
    lg = np.log1p(u)
    j = np.arange(n, dtype=_F64)
    terms = absp * np.exp((1.0 - j) * lg)
    terms[0] = absp[0]
    bracket = np.cumsum(terms)
    odd = bracket * np.exp(j * lg)
    return float(np.sum(odd * odd) + np.sum(absp[1:] * absp[1:]))
