"""Exact integer arithmetic: primality, factoring, divisor sums, orders, CRT.

Everything stays in arbitrary-precision integers; nothing rounds through a
float. Values are immutable and safe to share across workers. The one piece
of shared state, the small-prime sieve, is built under a lock and is
read-only afterwards.
"""

from __future__ import annotations

import bisect
import math
import random
import threading
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "DEFAULT_MR_ROUNDS",
    "DEFAULT_RHO_BUDGET",
    "DEFAULT_TRIAL_BOUND",
    "FactoringBudgetError",
    "Factorization",
    "crt",
    "factorize",
    "is_prime",
    "multiplicative_order",
    "p_adic_valuation",
    "primes_below",
    "sigma",
    "sigma_prime_power",
]

DEFAULT_TRIAL_BOUND = 10 ** 6
DEFAULT_RHO_BUDGET = 1 << 22
DEFAULT_MR_ROUNDS = 40

# Sufficient deterministic witness set for every n < 3.3e24, which covers
# the whole 64-bit range.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 1 << 64


class FactoringBudgetError(Exception):
    """Factoring would exceed its iteration budget.

    Range scanners catch this to skip or defer a stubborn value instead of
    stalling the whole scan.
    """

    def __init__(self, n: int, budget: int):
        super().__init__(f"factoring budget of {budget} iterations exhausted on {n}")
        self.n = n
        self.budget = budget


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int, *, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Primality test: exact below 2^64, Miller-Rabin above.

    Below 2^64 a fixed witness set decides exactly. At or above, ``rounds``
    extra pseudorandom witnesses (seeded by n, so results are reproducible)
    bound the false-positive probability by 4**-rounds.
    """
    if n < 2:
        return False
    for p in _WITNESSES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _DETERMINISTIC_LIMIT:
        return _miller_rabin(n, _WITNESSES)
    rng = random.Random(n)
    extra = tuple(rng.randrange(2, n - 1) for _ in range(rounds))
    return _miller_rabin(n, _WITNESSES + extra)


def _eratosthenes(limit: int) -> tuple[int, ...]:
    if limit <= 2:
        return ()
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit, p)))
    return tuple(i for i in range(limit) if flags[i])


_sieve_lock = threading.Lock()
_sieve_limit = 0
_sieve_primes: tuple[int, ...] = ()
_slice_memo: dict[int, tuple[int, ...]] = {}


def primes_below(limit: int) -> tuple[int, ...]:
    """All primes < limit, served from a grow-only cached sieve."""
    global _sieve_limit, _sieve_primes
    if limit > _sieve_limit:
        with _sieve_lock:
            if limit > _sieve_limit:
                new_limit = max(limit, 2 * _sieve_limit, 1 << 16)
                _sieve_primes = _eratosthenes(new_limit)
                _sieve_limit = new_limit
                _slice_memo.clear()
    primes = _sieve_primes
    if not primes or primes[-1] < limit:
        return primes
    cut = _slice_memo.get(limit)
    if cut is None:
        cut = primes[: bisect.bisect_left(primes, limit)]
        _slice_memo[limit] = cut
    return cut


@dataclass(frozen=True)
class Factorization:
    """A positive integer as an ordered product of prime powers.

    ``pairs`` is strictly increasing by prime with exponents >= 1; the empty
    product represents 1.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(p), int(e)) for p, e in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        prev = 1
        for p, e in pairs:
            if p <= prev:
                raise ValueError(f"primes must increase strictly: {p} after {prev}")
            if e < 1:
                raise ValueError(f"exponent of {p} must be >= 1, got {e}")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p

    @property
    def value(self) -> int:
        n = 1
        for p, e in self.pairs:
            n *= p ** e
        return n

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)


def factorize(
    n: int,
    *,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> Factorization:
    """Factor n >= 1: trial division by sieve primes, then Brent's rho.

    Trial division runs over the cached primes below ``trial_bound``;
    whatever survives goes through Brent's cycle method under an iteration
    budget. Exceeding the budget raises FactoringBudgetError so callers can
    skip or defer the value rather than stall.
    """
    if n < 1:
        raise ValueError(f"can only factor n >= 1, got {n}")
    if trial_bound < 3:
        raise ValueError("trial_bound must be at least 3")
    factors: dict[int, int] = {}
    rest = n
    for p in primes_below(trial_bound):
        if p * p > rest:
            break
        while rest % p == 0:
            rest //= p
            factors[p] = factors.get(p, 0) + 1
    if rest > 1:
        _split(rest, factors, [rho_budget], rho_budget, trial_bound)
    return Factorization(tuple(sorted(factors.items())))


def _split(
    m: int, factors: dict[int, int], budget: list[int], total: int, trial_bound: int
) -> None:
    # m has no prime factor below trial_bound, so anything under its square
    # is automatically prime.
    if m < trial_bound * trial_bound or is_prime(m):
        factors[m] = factors.get(m, 0) + 1
        return
    d = _brent_rho(m, budget, total)
    _split(d, factors, budget, total, trial_bound)
    _split(m // d, factors, budget, total, trial_bound)


def _brent_rho(n: int, budget: list[int], total: int) -> int:
    """One nontrivial factor of composite n via Brent's cycle detection."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            if budget[0] < r:
                raise FactoringBudgetError(n, total)
            budget[0] -= r
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(128, r - k)
                if budget[0] < steps:
                    raise FactoringBudgetError(n, total)
                budget[0] -= steps
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += steps
            r *= 2
        if g != n:
            return g
        # The batched gcd jumped past the factor; replay one step at a time.
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # Degenerate cycle: retry with a fresh polynomial.


def sigma_prime_power(p: int, e: int) -> int:
    """sigma(p^e) = (p^(e+1) - 1) / (p - 1) for prime p, e >= 0."""
    return (p ** (e + 1) - 1) // (p - 1)


def sigma(f: Factorization) -> int:
    """Sum of all positive divisors of the value ``f`` represents."""
    out = 1
    for p, e in f:
        out *= sigma_prime_power(p, e)
    return out


def p_adic_valuation(p: int, n: int) -> int:
    """Largest e with p^e dividing n (n >= 1)."""
    if n < 1:
        raise ValueError(f"valuation needs n >= 1, got {n}")
    if p < 2:
        raise ValueError(f"valuation needs p >= 2, got {p}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _totient(n: int) -> int:
    t = 1
    for p, e in factorize(n):
        t *= p ** (e - 1) * (p - 1)
    return t


def multiplicative_order(q: int, m: int) -> int:
    """Least d >= 1 with q^d ≡ 1 (mod m); requires gcd(q, m) = 1 and m >= 2.

    Starts from the totient of m (a multiple of the order) and strips prime
    factors while the power keeps landing on 1.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if math.gcd(q, m) != 1:
        raise ValueError(f"multiplicative order needs gcd(q, m) = 1, got gcd({q}, {m}) > 1")
    d = _totient(m)
    for p in factorize(d).primes:
        while d % p == 0 and pow(q, d // p, m) == 1:
            d //= p
    return d


def crt(system: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x ≡ r_i (mod m_i) with pairwise-coprime moduli.

    Returns (residue, modulus) with 0 <= residue < modulus = product of the
    m_i. An empty system is vacuous and yields (0, 1).
    """
    r, m = 0, 1
    for residue, modulus in system:
        if modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {modulus}")
        if not 0 <= residue < modulus:
            raise ValueError(f"residue {residue} out of range for modulus {modulus}")
        if math.gcd(m, modulus) != 1:
            raise ValueError(f"moduli must be pairwise coprime; {modulus} shares a factor")
        k = (residue - r) * pow(m, -1, modulus) % modulus
        r += m * k
        m *= modulus
    return r, m
