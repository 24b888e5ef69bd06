"""Abundancy-index algebra: exact sigma(n)/n ratios, friends, solitary certificates.

The index of n is sigma(n)/n as a reduced fraction. Two distinct integers
sharing an index are friends; an integer with no friend is solitary. Index
equality is always decided on exact rationals, never floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from . import sieve
from .arith import Factorization, factorize, is_prime, sigma

__all__ = [
    "FriendPair",
    "SolitaryVerdict",
    "abundancy_index",
    "are_friends",
    "find_friends",
    "index_upper_bound",
    "solitary_certificate",
]

# Above this bound a friend scan falls back to factoring each value.
SIEVE_SCAN_LIMIT = 10 ** 8
_SEGMENT = 1 << 20
_I64_GUARD = 1 << 62


def abundancy_index(f: Union[Factorization, int]) -> Fraction:
    """sigma(n)/n in lowest terms.

    Computed per prime power as (p^(e+1) - 1) / (p^e (p - 1)) and reduced
    exactly, so n itself never has to be materialized.
    """
    if isinstance(f, int):
        f = factorize(f)
    out = Fraction(1)
    for p, e in f:
        out *= Fraction(p ** (e + 1) - 1, p ** e * (p - 1))
    return out


def index_upper_bound(primes: Iterable[int]) -> Fraction:
    """Strict bound prod p/(p-1) on the index of anything with this support."""
    ps = tuple(primes)
    if not ps:
        raise ValueError("prime support must be non-empty")
    if len(set(ps)) != len(ps):
        raise ValueError("primes must be distinct")
    out = Fraction(1)
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        out *= Fraction(p, p - 1)
    return out


def are_friends(m: int, n: int) -> bool:
    """Whether m and n are distinct and share an abundancy index."""
    if m < 1 or n < 1:
        raise ValueError("friendship is defined on positive integers")
    return m != n and abundancy_index(m) == abundancy_index(n)


def find_friends(n: int, bound: int, *, segment_size: int = _SEGMENT) -> list[int]:
    """Every m <= bound, m != n, with m's index equal to n's, ascending.

    Up to 10^8 the scan runs on the batched sigma sieve; past that each
    value is factored individually (slow, but the same contract).
    """
    if n < 1:
        raise ValueError("n must be positive")
    target = abundancy_index(n)
    num, den = target.numerator, target.denominator
    hits: list[int] = []
    if bound <= SIEVE_SCAN_LIMIT:
        for lo in range(1, bound + 1, segment_size):
            hi = min(lo + segment_size, bound + 1)
            sig = sieve.sigma_range(lo, hi)
            hits.extend(_segment_hits(sig, lo, hi, num, den))
    else:
        for m in range(1, bound + 1):
            if sigma(factorize(m)) * den == m * num:
                hits.append(m)
    return [m for m in hits if m != n]


def _segment_hits(sig: np.ndarray, lo: int, hi: int, num: int, den: int) -> list[int]:
    # den*sigma(m) == num*m, vectorized only while int64 cannot overflow
    if den * int(sig.max()) < _I64_GUARD and num * (hi - 1) < _I64_GUARD:
        values = np.arange(lo, hi, dtype=np.int64)
        return [int(v) for v in values[sig * den == values * num]]
    return [lo + i for i, s in enumerate(sig.tolist()) if s * den == (lo + i) * num]


class SolitaryVerdict(Enum):
    CERTIFIED_SOLITARY = "certified-solitary"
    INCONCLUSIVE = "inconclusive"


def solitary_certificate(n: int) -> SolitaryVerdict:
    """Certify n solitary when gcd(n, sigma(n)) = 1; otherwise stay agnostic.

    The coprime case makes sigma(n)/n already reduced, which forces any
    friend to be a proper multiple of n, impossible since the index grows
    strictly under multiplication. No gcd value can certify the opposite:
    friendliness is only ever established by exhibiting a witness pair.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(n, sigma(factorize(n))) == 1:
        return SolitaryVerdict.CERTIFIED_SOLITARY
    return SolitaryVerdict.INCONCLUSIVE


@dataclass(frozen=True)
class FriendPair:
    """Two distinct integers with the same abundancy index."""

    smaller: int
    larger: int
    shared_index: Fraction

    def __post_init__(self):
        if not 1 <= self.smaller < self.larger:
            raise ValueError("need 1 <= smaller < larger")
        for member in (self.smaller, self.larger):
            if abundancy_index(member) != self.shared_index:
                raise ValueError(f"{member} does not have index {self.shared_index}")

    @classmethod
    def of(cls, m: int, n: int) -> "FriendPair":
        if not are_friends(m, n):
            raise ValueError(f"{m} and {n} are not friends")
        return cls(min(m, n), max(m, n), abundancy_index(m))
