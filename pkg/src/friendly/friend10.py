"""Necessary-condition filters on structured candidates F = 5^(2a) * Q^2.

Any integer sharing 10's abundancy index 9/5 must be an odd square of the
form 5^(2a) * Q^2 with Q odd and coprime to 15, at least seven distinct
prime factors, and 5 as its least prime. Each further necessary condition
is exposed here as its own predicate plus a named rule; `filter_chain` runs
them in a fixed cheapest-first order and reports which rule, if any, kills
a candidate. Every check is exact integer or rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .abundancy import index_upper_bound
from .arith import (
    Factorization,
    crt,
    factorize,
    is_prime,
    multiplicative_order,
    p_adic_valuation,
    sigma_prime_power,
)

__all__ = [
    "TARGET_INDEX",
    "Candidate",
    "FilterReport",
    "OrderParams",
    "ResidueClass",
    "RuleResult",
    "Verdict",
    "am_gm_sigma_bound",
    "congruence_sum_check",
    "derive_residue_class",
    "divides_sigma_even_power",
    "eq1_check",
    "exponent_filter_mod27",
    "exponent_filter_mod3",
    "filter_chain",
    "lower_bound",
    "nine_exact_divisibility",
    "omega_lower_bound",
    "order_params",
    "prime_support_filter",
    "sigma5_mod8",
    "smallest_odd_f",
    "structural_precheck",
]

TARGET_INDEX = Fraction(9, 5)


class Verdict(Enum):
    PASS = "pass"
    REJECT = "reject"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class RuleResult:
    rule: str
    verdict: Verdict
    detail: str


@dataclass(frozen=True)
class FilterReport:
    """Ordered per-rule verdicts for one candidate."""

    candidate: str
    results: tuple[RuleResult, ...]

    @property
    def rejected_by(self) -> Optional[str]:
        for r in self.results:
            if r.verdict is Verdict.REJECT:
                return r.rule
        return None

    @property
    def survives(self) -> bool:
        return self.rejected_by is None

    @property
    def overall(self) -> str:
        rule = self.rejected_by
        return "Survives" if rule is None else f"RejectedBy({rule})"


@dataclass(frozen=True)
class ResidueClass:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} out of range for modulus {self.modulus}")

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue


@dataclass(frozen=True)
class Candidate:
    """A number of the only shape a friend of 10 can take: 5^(2a) * Q^2.

    ``a`` is the half-exponent of 5 and ``q_factorization`` factors Q, which
    must be odd and coprime to 15 (every prime >= 7). Q = 1 is representable
    as the empty factorization; it fails the omega check downstream rather
    than being special-cased here.
    """

    a: int
    q_factorization: Factorization = Factorization(())

    def __post_init__(self):
        if self.a < 1:
            raise ValueError(f"need a >= 1, got {self.a}")
        for p, _ in self.q_factorization:
            if p < 7:
                raise ValueError(f"Q must be odd and coprime to 15; prime {p} is not")

    @property
    def q(self) -> int:
        return self.q_factorization.value

    @property
    def value(self) -> int:
        """F itself."""
        return 5 ** (2 * self.a) * self.q ** 2

    @property
    def primes(self) -> tuple[int, ...]:
        return (5,) + self.q_factorization.primes

    @property
    def half_exponents(self) -> tuple[int, ...]:
        """The a_i with F = prod p_i^(2 a_i); the first entry is a."""
        return (self.a,) + self.q_factorization.exponents

    @property
    def omega(self) -> int:
        return 1 + len(self.q_factorization)

    @property
    def label(self) -> str:
        parts = [f"5^{2 * self.a}"]
        parts += [f"{p}^{2 * e}" for p, e in self.q_factorization]
        return " * ".join(parts)


@dataclass(frozen=True)
class OrderParams:
    """Order data tying a prime p to divisibility of sigma(q^(2a)).

    k is one more than the p-adic valuation of q - 1, and f, when present,
    is the multiplicative order of q mod p^k, kept only when it is odd and
    greater than 1, the only case in which p can divide sigma(q^(2a)).
    """

    p: int
    q: int
    k: int
    f: Optional[int]


def sigma5_mod8(a: int) -> int:
    """sigma(5^(2a)) mod 8; cycles through 1, 7, 5, 3 as a mod 4 = 0, 1, 2, 3.

    The cycle comes from 5^8 ≡ 1 (mod 32), which makes the residue depend
    on a mod 4 only.
    """
    if a < 1:
        raise ValueError(f"need a >= 1, got {a}")
    return (1, 7, 5, 3)[a % 4]


@lru_cache(maxsize=None)
def order_params(p: int, q: int) -> OrderParams:
    if p == q:
        raise ValueError("p and q must be distinct primes")
    if not (is_prime(p) and is_prime(q)):
        raise ValueError(f"{p} and {q} must both be prime")
    k = p_adic_valuation(p, q - 1) + 1
    d = multiplicative_order(q, p ** k)
    f = d if d > 1 and d % 2 == 1 else None
    return OrderParams(p=p, q=q, k=k, f=f)


def smallest_odd_f(p: int, q: int) -> Optional[int]:
    """Smallest odd f > 1 with q^f ≡ 1 (mod p^k), or None when none exists.

    k is fixed by p^(k-1) exactly dividing q - 1. The powers of q hitting 1
    mod p^k are exactly the multiples of the multiplicative order d, so an
    odd f exists iff d itself is odd; d = 1 cannot happen by choice of k,
    and an even d has no odd multiples at all.
    """
    return order_params(p, q).f


def divides_sigma_even_power(p: int, q: int, a: int) -> bool:
    """Whether p divides sigma(q^(2a)), decided purely from order data.

    True exactly when the odd order f exists and divides 2a + 1; agrees
    with direct divisibility of the full divisor sum (the verification
    suites check this exhaustively).
    """
    if a < 1:
        raise ValueError(f"need a >= 1, got {a}")
    f = smallest_odd_f(p, q)
    return f is not None and (2 * a + 1) % f == 0


def _sigma_q_squared(c: Candidate) -> int:
    out = 1
    for p, e in c.q_factorization:
        out *= sigma_prime_power(p, 2 * e)
    return out


def eq1_check(c: Candidate) -> bool:
    """Exact test of sigma(5^(2a)) * sigma(Q^2) == 9 * 5^(2a-1) * Q^2.

    Holding is equivalent to F having abundancy index 9/5, i.e. to F being
    an actual friend of 10.
    """
    lhs = sigma_prime_power(5, 2 * c.a) * _sigma_q_squared(c)
    rhs = 9 * 5 ** (2 * c.a - 1) * c.q ** 2
    return lhs == rhs


def _geom_sum_mod(p: int, terms: int, mod: int) -> int:
    """(1 + p + ... + p^(terms-1)) mod ``mod`` without big powers.

    Requires gcd(p, mod) = 1; uses the period of p mod ``mod`` so that huge
    exponents cost nothing.
    """
    if math.gcd(p, mod) != 1:
        raise ValueError(f"geometric sum trick needs gcd({p}, {mod}) = 1")
    d = multiplicative_order(p, mod) if p % mod != 1 else 1
    cycle = 0
    x = 1
    for _ in range(d):
        cycle += x
        x = x * p % mod
    full, rem = divmod(terms, d)
    partial = 0
    x = 1
    for _ in range(rem):
        partial += x
        x = x * p % mod
    return (full * cycle + partial) % mod


def _sigma_q_squared_mod(c: Candidate, mod: int) -> int:
    out = 1
    for p, e in c.q_factorization:
        out = out * _geom_sum_mod(p, 2 * e + 1, mod) % mod
    return out


def _sigma_candidate_mod(c: Candidate, mod: int) -> int:
    return _geom_sum_mod(5, 2 * c.a + 1, mod) * _sigma_q_squared_mod(c, mod) % mod


def nine_exact_divisibility(c: Candidate) -> bool:
    """True iff 9 divides sigma(F) and 27 does not.

    sigma(F) is reduced mod 27 straight from the candidate's factorization;
    F itself is never factored (it may be far beyond any factoring budget
    even when its structure is known).
    """
    m = _sigma_candidate_mod(c, 27)
    return m % 9 == 0 and m != 0


def exponent_filter_mod3(c: Candidate) -> RuleResult:
    """Reject when every half-exponent a_i ≡ 1 (mod 3).

    An all-ones-mod-3 pattern forces 31 into F, then 331, then 7, stacking
    three factors of 3 onto sigma(F) and breaking the exact-9 requirement,
    so no friend of 10 can look like that.
    """
    exps = c.half_exponents
    for i, e in enumerate(exps):
        if e % 3 != 1:
            return RuleResult(
                "exponent_mod3",
                Verdict.PASS,
                f"a_{i + 1} = {e} is not 1 mod 3",
            )
    return RuleResult(
        "exponent_mod3", Verdict.REJECT, "every half-exponent is 1 mod 3"
    )


def exponent_filter_mod27(c: Candidate) -> RuleResult:
    """Reject when every half-exponent a_i ≡ 13 (mod 27).

    Implied by the mod-3 rule (13 ≡ 1 mod 3) but kept as an independent
    cross-check of the coarser filter.
    """
    exps = c.half_exponents
    for i, e in enumerate(exps):
        if e % 27 != 13:
            return RuleResult(
                "exponent_mod27",
                Verdict.PASS,
                f"a_{i + 1} = {e} is not 13 mod 27",
            )
    return RuleResult(
        "exponent_mod27", Verdict.REJECT, "every half-exponent is 13 mod 27"
    )


def congruence_sum_check(c: Candidate) -> RuleResult:
    """Mod-8 coupling of sigma(5^(2a)) and sigma(Q^2).

    Only meaningful when the product already matches 9 * 5^(2a-1) * Q^2 mod 8,
    i.e. is ≡ 5 (Q^2 being odd); when that shadow of the defining equation
    fails the hypothesis is void and the rule abstains. Under the hypothesis
    the sum must be 6 mod 8 for even a and 2 mod 8 for odd a.
    """
    s5 = sigma5_mod8(c.a)
    sq = _sigma_q_squared_mod(c, 8)
    if s5 * sq % 8 != 5:
        return RuleResult(
            "mod8_sum",
            Verdict.NOT_APPLICABLE,
            f"product {s5} * {sq} ≡ {s5 * sq % 8} (mod 8); hypothesis ≡ 5 fails",
        )
    total = (s5 + sq) % 8
    want = 6 if c.a % 2 == 0 else 2
    if total == want:
        return RuleResult(
            "mod8_sum",
            Verdict.PASS,
            f"sum ≡ {total} (mod 8) matches a {'even' if c.a % 2 == 0 else 'odd'}",
        )
    return RuleResult(
        "mod8_sum",
        Verdict.REJECT,
        f"sum ≡ {total} (mod 8), expected {want} for a {'even' if c.a % 2 == 0 else 'odd'}",
    )


def lower_bound(exponents: Iterable[int]) -> Fraction:
    """(25/81) * prod (2 a_i + 1)^2: a strict floor for any friend of 10
    carrying these half-exponents (via AM-GM on each divisor sum)."""
    exps = tuple(exponents)
    if not exps:
        raise ValueError("exponent list must be non-empty")
    prod = 1
    for e in exps:
        if e < 1:
            raise ValueError(f"exponents must be >= 1, got {e}")
        prod *= (2 * e + 1) ** 2
    return Fraction(25 * prod, 81)


def omega_lower_bound(omega: int) -> int:
    """625 * 9^(omega - 3), the exponent-free floor for omega >= 3."""
    if omega < 3:
        raise ValueError(f"bound only holds for omega >= 3, got {omega}")
    return 625 * 9 ** (omega - 3)


def am_gm_sigma_bound(p: int, a: int) -> bool:
    """Exact truth of sigma(p^(2a)) > (2a + 1) * p^a (always true; exposed
    as a checkable predicate rather than assumed)."""
    if a < 1:
        raise ValueError(f"need a >= 1, got {a}")
    return sigma_prime_power(p, 2 * a) > (2 * a + 1) * p ** a


def derive_residue_class(a: int) -> ResidueClass:
    """The residue class every friend of 10 with this a must land in.

    Writing s5 = sigma(5^(2a)): integrality of Q^2 = s5 * sigma(Q^2) /
    (9 * 5^(2a-1)) forces sigma(Q^2) ≡ 0 mod 9 * 5^(2a-1) (s5 is coprime to
    45), the mod-8 sum congruences force sigma(Q^2) mod 8, CRT merges both
    into one class mod 72 * 5^(2a-1), and substituting back through the
    defining product equation yields F ≡ residue (mod 8 * s5 * 5^(2a)).
    For a = 1 this gives F ≡ 5425 (mod 6200).
    """
    if a < 1:
        raise ValueError(f"need a >= 1, got {a}")
    s5 = sigma_prime_power(5, 2 * a)
    if math.gcd(s5, 45) != 1:
        raise ArithmeticError(
            f"gcd(sigma(5^{2 * a}), 45) != 1 breaks the derivation; cannot happen"
        )
    # Odd residues are self-inverse mod 8, so the forced sigma(Q^2) residue
    # is 5 * sigma5_mod8(a).
    forced8 = 5 * sigma5_mod8(a) % 8
    s0, _ = crt([(0, 9 * 5 ** (2 * a - 1)), (forced8, 8)])
    residue = 5 * s5 * s0 // 9
    modulus = 8 * s5 * 5 ** (2 * a)
    return ResidueClass(residue=residue, modulus=modulus)


def prime_support_filter(primes: Iterable[int]) -> RuleResult:
    """Reject supports whose index ceiling prod p/(p-1) cannot reach 9/5."""
    ps = tuple(primes)
    if 5 not in ps:
        raise ValueError("candidate prime support must include 5")
    bound = index_upper_bound(ps)
    if bound <= TARGET_INDEX:
        return RuleResult(
            "prime_support",
            Verdict.REJECT,
            f"index ceiling {bound} <= 9/5; no exponents can reach 9/5",
        )
    return RuleResult(
        "prime_support", Verdict.PASS, f"index ceiling {bound} exceeds 9/5"
    )


def structural_precheck(n: int) -> RuleResult:
    """Shape checks on a raw integer: odd perfect square, divisible by 5,
    coprime to 3, at least seven distinct primes. The detail names the
    first violated clause."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        return RuleResult("structural", Verdict.REJECT, f"{n} is even")
    root = math.isqrt(n)
    if root * root != n:
        return RuleResult("structural", Verdict.REJECT, f"{n} is not a perfect square")
    if n % 5 != 0:
        return RuleResult("structural", Verdict.REJECT, f"5 does not divide {n}")
    if n % 3 == 0:
        return RuleResult("structural", Verdict.REJECT, f"3 divides {n}")
    w = len(factorize(n))
    if w < 7:
        return RuleResult("structural", Verdict.REJECT, f"omega = {w} < 7")
    return RuleResult(
        "structural", Verdict.PASS, f"odd square, 5 | n, 3 does not divide n, omega = {w}"
    )


def _structural_rule(c: Candidate) -> RuleResult:
    # The candidate shape already guarantees odd square, 5 | F, 3 does not
    # divide F; only the prime count can fail.
    if c.omega < 7:
        return RuleResult("structural", Verdict.REJECT, f"omega = {c.omega} < 7")
    return RuleResult(
        "structural",
        Verdict.PASS,
        f"odd square by construction, omega = {c.omega}",
    )


def _prime_support_rule(c: Candidate) -> RuleResult:
    return prime_support_filter(c.primes)


def _nine_exact_rule(c: Candidate) -> RuleResult:
    m = _sigma_candidate_mod(c, 27)
    if m % 9 == 0 and m != 0:
        return RuleResult("nine_exact", Verdict.PASS, f"sigma(F) ≡ {m} (mod 27)")
    return RuleResult(
        "nine_exact",
        Verdict.REJECT,
        f"sigma(F) ≡ {m} (mod 27): 9 must divide it exactly once",
    )


def _residue_class_rule(c: Candidate) -> RuleResult:
    rc = derive_residue_class(c.a)
    if rc.contains(c.value):
        return RuleResult(
            "residue_class", Verdict.PASS, f"F ≡ {rc.residue} (mod {rc.modulus})"
        )
    return RuleResult(
        "residue_class",
        Verdict.REJECT,
        f"F ≡ {c.value % rc.modulus}, friends with a = {c.a} need ≡ {rc.residue} (mod {rc.modulus})",
    )


def _eq1_rule(c: Candidate) -> RuleResult:
    if eq1_check(c):
        return RuleResult("eq1", Verdict.PASS, "sigma(5^2a) * sigma(Q^2) = 9 * 5^(2a-1) * Q^2")
    return RuleResult("eq1", Verdict.REJECT, "index of F is not exactly 9/5")


_CHAIN: tuple[tuple[str, object], ...] = (
    ("structural", _structural_rule),
    ("prime_support", _prime_support_rule),
    ("exponent_mod3", exponent_filter_mod3),
    ("exponent_mod27", exponent_filter_mod27),
    ("mod8_sum", congruence_sum_check),
    ("nine_exact", _nine_exact_rule),
    ("residue_class", _residue_class_rule),
    ("eq1", _eq1_rule),
)

CHAIN_RULES = tuple(name for name, _ in _CHAIN)


def filter_chain(c: Candidate) -> FilterReport:
    """Run every rule in fixed cheapest-first order.

    The chain short-circuits at the first rejection but still records the
    skipped rules as not applicable, so a report always carries all eight
    rules. A surviving report means the exact defining equation was
    evaluated and held, i.e. the candidate genuinely is a friend of 10.
    """
    results = []
    rejected = False
    for name, rule in _CHAIN:
        if rejected:
            results.append(
                RuleResult(name, Verdict.NOT_APPLICABLE, "skipped after earlier rejection")
            )
            continue
        outcome = rule(c)
        results.append(outcome)
        rejected = outcome.verdict is Verdict.REJECT
    return FilterReport(candidate=c.label, results=tuple(results))
