"""Working-precision modes.

All model quantities are carried as mpmath numbers. Hermite-type polynomials
in the monomial basis cancel catastrophically when contracted against Gaussian
moments (roughly 18 digits are lost at degree 30, 55 at degree 100), so the
"standard" mode is already multi-precision.
"""

from __future__ import annotations

import mpmath as mp

DPS = {"standard": 50, "extended": 120}


def dps_for(precision: str) -> int:
    try:
        return DPS[precision]
    except KeyError:
        raise ValueError(f"unknown precision {precision!r}; expected one of {sorted(DPS)}") from None


def workdps(dps: int):
    """Context manager running the enclosed block at `dps` decimal digits."""
    return mp.workdps(dps)
