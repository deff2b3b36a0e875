"""Numba-jitted kernel implementations.

Same kernel contract as :mod:`dotbounds._kernels.numpy_backend`.  The
binary32 accumulation loops perform the identical operation sequence, so
the two backends agree bit for bit there; coefficient and binary64 oracle
kernels may differ from the numpy backend in the last ulp (different but
equally accurate summation orders).

None of the kernels is compiled with fastmath: the roundoff model requires
strict IEEE semantics with no reassociation and no multiply-add fusion.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SPLITTER = 134217729.0  # 2**27 + 1


@njit(cache=True)
def accumulate_trace_b32(x32, y32):
    n = x32.size
    shat = np.empty(2 * n, dtype=np.float64)
    s_exact = np.empty(2 * n, dtype=np.float64)
    deltas = np.empty(2 * n - 1, dtype=np.float64)

    w = np.float32(0.0)
    csum = 0.0
    comp = 0.0
    for i in range(n):
        p64 = np.float64(x32[i]) * np.float64(y32[i])
        p32 = np.float32(p64)
        dmult = 0.0 if p64 == 0.0 else (np.float64(p32) - p64) / p64

        wprev = w
        w = np.float32(wprev + p32)
        bp = np.float32(w - wprev)
        e32 = np.float32(wprev - np.float32(w - bp)) + np.float32(p32 - bp)
        odd = np.float64(w) + np.float64(e32)
        dadd = 0.0 if odd == 0.0 else -np.float64(e32) / odd

        s = csum + p64
        bp64 = s - csum
        e64 = (csum - (s - bp64)) + (p64 - bp64)
        csum = s
        comp = comp + e64
        best = csum + comp

        if i == 0:
            shat[0] = p64
            deltas[0] = dmult
        else:
            shat[2 * i] = odd
            deltas[2 * i - 1] = dmult
            deltas[2 * i] = dadd
        shat[2 * i + 1] = np.float64(w)
        s_exact[2 * i] = best
        s_exact[2 * i + 1] = best
    return shat, s_exact, deltas


@njit(cache=True)
def accumulate_final_b32(x32, y32):
    w = np.float32(0.0)
    csum = 0.0
    comp = 0.0
    for i in range(x32.size):
        p64 = np.float64(x32[i]) * np.float64(y32[i])
        p32 = np.float32(p64)
        w = np.float32(w + p32)
        s = csum + p64
        bp = s - csum
        e = (csum - (s - bp)) + (p64 - bp)
        csum = s
        comp = comp + e
    return np.float64(w), csum + comp


@njit(cache=True)
def exact_dot_b32(x32, y32):
    csum = 0.0
    comp = 0.0
    for i in range(x32.size):
        p64 = np.float64(x32[i]) * np.float64(y32[i])
        s = csum + p64
        bp = s - csum
        e = (csum - (s - bp)) + (p64 - bp)
        csum = s
        comp = comp + e
    return csum + comp


@njit(cache=True, inline="always")
def _two_prod(a, b):
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


@njit(cache=True, inline="always")
def _dd_add(sh, sl, b):
    s = sh + b
    bp = s - sh
    err = (sh - (s - bp)) + (b - bp)
    err = err + sl
    hi = s + err
    return hi, err - (hi - s)


@njit(cache=True)
def accumulate_trace_b64(x64, y64):
    n = x64.size
    shat = np.empty(2 * n, dtype=np.float64)
    s_exact = np.empty(2 * n, dtype=np.float64)
    deltas = np.empty(2 * n - 1, dtype=np.float64)

    w = 0.0
    sh = 0.0
    sl = 0.0
    for i in range(n):
        hi, lo = _two_prod(x64[i], y64[i])
        exact_p = hi + lo
        dmult = 0.0 if exact_p == 0.0 else -lo / exact_p

        wprev = w
        w = wprev + hi
        bp = w - wprev
        e = (wprev - (w - bp)) + (hi - bp)
        odd = w + e
        dadd = 0.0 if odd == 0.0 else -e / odd

        sh, sl = _dd_add(sh, sl, hi)
        sh, sl = _dd_add(sh, sl, lo)
        best = sh + sl

        if i == 0:
            shat[0] = exact_p
            deltas[0] = dmult
        else:
            shat[2 * i] = odd
            deltas[2 * i - 1] = dmult
            deltas[2 * i] = dadd
        shat[2 * i + 1] = w
        s_exact[2 * i] = best
        s_exact[2 * i + 1] = best
    return shat, s_exact, deltas


@njit(cache=True)
def accumulate_final_b64(x64, y64):
    w = 0.0
    sh = 0.0
    sl = 0.0
    for i in range(x64.size):
        hi, lo = _two_prod(x64[i], y64[i])
        w = w + hi
        sh, sl = _dd_add(sh, sl, hi)
        sh, sl = _dd_add(sh, sl, lo)
    return w, sh + sl


@njit(cache=True)
def exact_dot_b64(x64, y64):
    sh = 0.0
    sl = 0.0
    for i in range(x64.size):
        hi, lo = _two_prod(x64[i], y64[i])
        sh, sl = _dd_add(sh, sl, hi)
        sh, sl = _dd_add(sh, sl, lo)
    return sh + sl


@njit(cache=True)
def martingale_coeffs(absp, u):
    n = absp.size
    out = np.empty(2 * n - 1, dtype=np.float64)
    one_plus_u = 1.0 + u
    running = absp[0]
    out[0] = running
    for k in range(1, n):
        out[2 * k - 1] = absp[k]
        running = (running + absp[k]) * one_plus_u
        out[2 * k] = running
    return out


@njit(cache=True)
def martingale_sumsq(absp, u):
    one_plus_u = 1.0 + u
    running = absp[0]
    total = running * running
    for k in range(1, absp.size):
        total += absp[k] * absp[k]
        running = (running + absp[k]) * one_plus_u
        total += running * running
    return total
