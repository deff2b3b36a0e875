"""Seeded construction of the test-vector families.

Families
--------
``mixed-sign``
    Entries iid standard normal (the default sign-varying family).
``same-sign``
    Absolute values of the same normal draws: all entries positive, so
    the classical condition number kappa_1 is exactly 1.
``uniform-positive``
    Entries iid uniform on [0, 1): positive, matching generators that draw
    raw uniforms instead of normals.
``uniform-symmetric``
    Entries iid uniform on [-1, 1): the sign-varying uniform counterpart.
``equal-products``
    x = ones, y = w * ones: every product equals w, the no-cancellation
    extreme where the unscaled two-norm amplifier squared is 1/n.
``alternating-products``
    x = ones, y_k = (-1)^k * w with n odd: the severe-cancellation extreme
    where the unscaled two-norm amplifier squared is n.

All values are quantized to the working precision, draws come from
per-(seed, axis) Philox streams, and a length-n draw is a prefix of any
longer draw with the same seed, so dimension sweeps can share vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import STREAM_X, STREAM_Y, stream
from .exceptions import EvenDimension
from .precision import BINARY32, BINARY64

__all__ = ["FAMILIES", "VectorPair", "generate", "write_vectors_csv"]

MIXED_SIGN = "mixed-sign"
SAME_SIGN = "same-sign"
UNIFORM_POSITIVE = "uniform-positive"
UNIFORM_SYMMETRIC = "uniform-symmetric"
EQUAL_PRODUCTS = "equal-products"
ALTERNATING_PRODUCTS = "alternating-products"

FAMILIES = (
    MIXED_SIGN,
    SAME_SIGN,
    UNIFORM_POSITIVE,
    UNIFORM_SYMMETRIC,
    EQUAL_PRODUCTS,
    ALTERNATING_PRODUCTS,
)

_ALIASES = {
    "mixed": MIXED_SIGN,
    "same": SAME_SIGN,
    "normal": MIXED_SIGN,
}


def canonical_family(name: str) -> str:
    name = name.strip().lower()
    name = _ALIASES.get(name, name)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return name


@dataclass(frozen=True)
class VectorPair:
    """Two equal-length working-precision vectors plus their provenance."""

    x: np.ndarray
    y: np.ndarray
    family: str
    seed: int
    n: int

    def __post_init__(self):
        self.x.flags.writeable = False
        self.y.flags.writeable = False


def generate(family: str, n: int, seed: int = 0, working: str = BINARY32, w: float = 1.0) -> VectorPair:
    """Build the (x, y) pair of one family, deterministic in (family, n, seed).

    ``w`` is the common product magnitude of the equal/alternating-products
    families and must be nonzero.
    """
    family = canonical_family(family)
    n = int(n)
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if working not in (BINARY32, BINARY64):
        raise ValueError(f"working precision must be binary32 or binary64, got {working!r}")
    dtype = np.float32 if working == BINARY32 else np.float64

    if family == EQUAL_PRODUCTS:
        if w == 0.0:
            raise ValueError("equal-products requires w != 0")
        x = np.ones(n, dtype=dtype)
        y = np.full(n, w, dtype=dtype)
    elif family == ALTERNATING_PRODUCTS:
        if w == 0.0:
            raise ValueError("alternating-products requires w != 0")
        if n % 2 == 0:
            raise EvenDimension(f"alternating-products requires odd n, got {n}")
        x = np.ones(n, dtype=dtype)
        signs = np.where(np.arange(1, n + 1) % 2 == 0, 1.0, -1.0)
        y = (signs * w).astype(dtype)
    else:
        gx = stream(seed, STREAM_X)
        gy = stream(seed, STREAM_Y)
        if family in (MIXED_SIGN, SAME_SIGN):
            x = gx.standard_normal(n)
            y = gy.standard_normal(n)
            if family == SAME_SIGN:
                x = np.abs(x)
                y = np.abs(y)
        elif family == UNIFORM_POSITIVE:
            x = gx.random(n)
            y = gy.random(n)
        else:  # uniform-symmetric
            x = 2.0 * gx.random(n) - 1.0
            y = 2.0 * gy.random(n) - 1.0
        x = x.astype(dtype)
        y = y.astype(dtype)
    return VectorPair(x=x, y=y, family=family, seed=int(seed), n=n)


def write_vectors_csv(pair: VectorPair, path) -> None:
    """Export a pair as CSV (x,y columns, round-trip-exact decimal values)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y\n")
        for a, b in zip(pair.x, pair.y):
            fh.write(f"{float(a)!r},{float(b)!r}\n")
