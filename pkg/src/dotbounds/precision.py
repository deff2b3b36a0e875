"""Precision descriptors and shared validation helpers.

The simulator runs in a *working* precision (binary32 or binary64) whose
unit roundoff drives all the bounds, and keeps an *oracle* reference that
must be strictly wider than the working precision: binary64 for binary32
work, a double-double / exactly-rounded scheme for binary64 work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BINARY32 = "binary32"
BINARY64 = "binary64"
DOUBLE_DOUBLE = "double-double"

#: Unit roundoff of each supported precision (round-to-nearest).
UNIT_ROUNDOFF = {
    BINARY32: 2.0**-24,
    BINARY64: 2.0**-53,
    DOUBLE_DOUBLE: 2.0**-106,
}

_WORKING = (BINARY32, BINARY64)
_ORACLES = (BINARY64, DOUBLE_DOUBLE)


def check_unit_roundoff(u: float) -> float:
    """Validate a unit roundoff: a real with 0 < u < 1."""
    u = float(u)
    if not 0.0 < u < 1.0:
        raise ValueError(f"unit roundoff must satisfy 0 < u < 1, got {u!r}")
    return u


def check_failure_probability(delta: float) -> float:
    """Validate a failure probability: a real with 0 < delta < 1."""
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"failure probability must satisfy 0 < delta < 1, got {delta!r}")
    return delta


def probabilistic_factor(delta: float) -> float:
    """The concentration factor sqrt(2 ln(2/delta)) shared by all probabilistic bounds."""
    delta = check_failure_probability(delta)
    return math.sqrt(2.0 * math.log(2.0 / delta))


@dataclass(frozen=True)
class PrecisionSpec:
    """Working/oracle precision pair used by the accumulation simulator.

    The oracle must have a strictly smaller unit roundoff than the working
    precision; ``binary32/binary64`` is the default pairing, and binary64
    work requires the ``double-double`` oracle.
    """

    working: str = BINARY32
    oracle: str = BINARY64

    def __post_init__(self) -> None:
        if self.working not in _WORKING:
            raise ValueError(f"working precision must be one of {_WORKING}, got {self.working!r}")
        if self.oracle not in _ORACLES:
            raise ValueError(f"oracle precision must be one of {_ORACLES}, got {self.oracle!r}")
        if UNIT_ROUNDOFF[self.oracle] >= UNIT_ROUNDOFF[self.working]:
            raise ValueError(
                f"oracle ({self.oracle}) must be strictly wider than working ({self.working})"
            )

    @property
    def u(self) -> float:
        """Unit roundoff of the working precision."""
        return UNIT_ROUNDOFF[self.working]

    @property
    def u_oracle(self) -> float:
        """Unit roundoff of the oracle precision."""
        return UNIT_ROUNDOFF[self.oracle]
