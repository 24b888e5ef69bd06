"""Batched sum-of-divisors over integer segments.

A divisor-pair sieve: every d <= sqrt(n) contributes d + n/d to sigma(n),
with the square root compensated once. All arithmetic is int64 with an
explicit headroom guard, so results are exact, never floating point.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["MAX_SEGMENT", "SieveBudgetError", "sigma_range"]

MAX_SEGMENT = 1 << 24
# sigma(n) < 4n well past this point, so int64 never overflows below it.
_VALUE_LIMIT = 1 << 50


class SieveBudgetError(Exception):
    """Requested segment exceeds the in-memory sieve budget; split it."""


def sigma_range(lo: int, hi: int, *, max_elements: int = MAX_SEGMENT) -> np.ndarray:
    """sigma(n) for every n in [lo, hi) as an int64 array.

    Raises SieveBudgetError when the segment is too wide for the memory
    budget or sits too high for int64 arithmetic.
    """
    if not 1 <= lo < hi:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if hi - lo > max_elements:
        raise SieveBudgetError(
            f"segment of {hi - lo} elements exceeds budget of {max_elements}"
        )
    if hi - 1 > _VALUE_LIMIT:
        raise SieveBudgetError(f"values past {_VALUE_LIMIT} would overflow the sieve")

    n = np.arange(lo, hi, dtype=np.int64)
    sig = np.zeros(hi - lo, dtype=np.int64)
    root = math.isqrt(hi - 1)
    for d in range(1, root + 1):
        start = max(lo, d * d)
        start = -(-start // d) * d
        if start >= hi:
            continue
        window = slice(start - lo, hi - lo, d)
        sig[window] += d + n[window] // d
    # Perfect squares had their root counted as both halves of a pair.
    r = math.isqrt(lo - 1) + 1
    while r * r < hi:
        sig[r * r - lo] -= r
        r += 1
    return sig
