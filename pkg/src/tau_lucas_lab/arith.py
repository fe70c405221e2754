"""Exact integer arithmetic: primality, budgeted factorization, radicals and friends.

Factoring follows a fixed ladder: trial division up to ``trial_division_bound``,
then Pollard rho with Brent's cycle detection, and whatever is left is reported
as an unfactored cofactor instead of being pursued further.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, prod
from typing import NamedTuple

from .errors import (
    IncompleteFactorizationError,
    NotPrimeError,
    OverflowDomainError,
    ZeroInputError,
)

__all__ = [
    "DETERMINISTIC_MR_LIMIT",
    "FactorBudget",
    "Factorization",
    "OmegaBound",
    "divisors",
    "factorize",
    "find_prime_factor",
    "is_prime",
    "known_radical",
    "omega",
    "p_adic_valuation",
    "primes_up_to",
    "primorial",
    "radical",
    "squarefree_split",
]

# The first 13 primes are a strong-pseudoprime-free base set below this value
# (Sorenson & Webster).
DETERMINISTIC_MR_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
PROBABILISTIC_ROUNDS = 64
DIVISOR_DOMAIN_MAX = 2**63


@dataclass(frozen=True)
class FactorBudget:
    trial_division_bound: int = 100_000
    rho_iteration_cap: int = 200_000
    wall_clock_cap_ms: int = 10_000

    def __post_init__(self) -> None:
        for name in ("trial_division_bound", "rho_iteration_cap", "wall_clock_cap_ms"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class Factorization:
    """``sign * prod(p**e) * cofactor``; ``cofactor > 1`` means the budget ran out."""

    sign: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        return self.sign * prod(p**e for p, e in self.factors) * self.cofactor


class OmegaBound(NamedTuple):
    lower_bound: int
    complete: bool


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes ``<= limit`` by a plain Eratosthenes sieve."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality of ``|n|``.

    Deterministic below ``DETERMINISTIC_MR_LIMIT``. Above it, 64 Miller-Rabin
    rounds with bases drawn from an RNG seeded by ``n`` (so repeated calls agree);
    a composite survives with probability at most ``4**-64``.
    """
    n = abs(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < DETERMINISTIC_MR_LIMIT:
        return all(_strong_probable_prime(n, a, d, s) for a in _MR_BASES)
    rng = random.Random(n)
    return all(
        _strong_probable_prime(n, rng.randrange(2, n - 1), d, s)
        for _ in range(PROBABILISTIC_ROUNDS)
    )


@dataclass
class _Meter:
    """Tracks rho iterations and wall clock against a budget."""

    budget: FactorBudget
    iterations: int = 0
    started: float = field(default_factory=time.monotonic)

    def exhausted(self) -> bool:
        if self.iterations >= self.budget.rho_iteration_cap:
            return True
        return (time.monotonic() - self.started) * 1000 >= self.budget.wall_clock_cap_ms


def _brent_rho(n: int, c: int, meter: _Meter) -> int | None:
    """One Pollard-Brent attempt with increment ``c``; returns a proper factor or None."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            meter.iterations += min(m, r - k)
            g = gcd(q, n)
            k += m
            if meter.exhausted() and g == 1:
                return None
        r *= 2
    if g == n:
        # batch overshot; replay one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if 1 < g < n else None


def _split(n: int, meter: _Meter) -> int | None:
    """A nontrivial factor of composite ``n`` within budget, or None."""
    r = isqrt(n)
    if r * r == n:
        return r
    c = 1
    while not meter.exhausted():
        g = _brent_rho(n, c, meter)
        if g is not None:
            return g
        c += 1
    return None


def _trial_divide(m: int, bound: int) -> tuple[dict[int, int], int]:
    found: dict[int, int] = {}
    for p in primes_up_to(bound - 1):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    return found, m


def factorize(n: int, budget: FactorBudget | None = None) -> Factorization:
    """Factor ``n`` as far as ``budget`` allows.

    >>> factorize(-1472)
    Factorization(sign=-1, factors=((2, 6), (23, 1)), cofactor=1)
    """
    if n == 0:
        raise ZeroInputError("cannot factor 0")
    budget = budget or FactorBudget()
    sign = -1 if n < 0 else 1
    found, rest = _trial_divide(abs(n), budget.trial_division_bound)
    cofactor = 1
    meter = _Meter(budget)
    pending = [rest] if rest > 1 else []
    while pending:
        m = pending.pop()
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        d = _split(m, meter)
        if d is None:
            cofactor *= m
        else:
            pending.extend((d, m // d))
    return Factorization(sign, tuple(sorted(found.items())), cofactor)


def find_prime_factor(n: int, budget: FactorBudget | None = None) -> int | None:
    """Some prime factor of ``|n|`` (the smallest one trial division sees first), or None.

    Cheaper than ``factorize`` when one witness prime is all that is needed.
    """
    n = abs(n)
    if n < 2:
        return None
    budget = budget or FactorBudget()
    for p in primes_up_to(budget.trial_division_bound - 1):
        if p * p > n:
            return n
        if n % p == 0:
            return p
    meter = _Meter(budget)
    pending = [n]
    while pending:
        m = pending.pop()
        if is_prime(m):
            return m
        d = _split(m, meter)
        if d is None:
            continue
        pending.extend(sorted((d, m // d), reverse=True))
    return None


def omega(f: Factorization) -> int | OmegaBound:
    """Number of distinct primes; ``0`` for units.

    For an incomplete factorization the answer is an ``OmegaBound`` whose
    lower bound counts the unfactored cofactor as a single prime.
    """
    if f.complete:
        return len(f.factors)
    return OmegaBound(len(f.factors) + 1, False)


def radical(f: Factorization) -> int:
    if not f.complete:
        raise IncompleteFactorizationError(f"unfactored cofactor {f.cofactor}")
    return prod(f.primes)


def known_radical(f: Factorization) -> int:
    """Product of the primes actually found; a lower bound on the radical."""
    return prod(f.primes)


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors() needs n >= 1")
    if n > DIVISOR_DOMAIN_MAX:
        raise OverflowDomainError(f"{n} exceeds the index domain 2**63")
    f = factorize(n, FactorBudget(trial_division_bound=1 << 16, rho_iteration_cap=1 << 40))
    if not f.complete:
        raise IncompleteFactorizationError(f"could not factor {n}")
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def primorial(r: int) -> int:
    """Product of all primes ``<= r``."""
    if r < 2:
        raise ValueError("primorial needs r >= 2")
    return prod(primes_up_to(r))


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ZeroInputError("valuation of 0 is infinite")
    if not is_prime(p) or p < 0:
        raise NotPrimeError(f"{p} is not prime")
    n = abs(n)
    e = 0
    # square the divisor while it keeps dividing: O(log e) big divisions
    while n % p == 0:
        pk, k = p, 1
        while n % (pk * pk) == 0:
            pk, k = pk * pk, 2 * k
        n //= pk
        e += k
    return e


def squarefree_split(n: int, budget: FactorBudget | None = None) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` squarefree, sign carried by ``d``."""
    f = factorize(n, budget)
    if not f.complete:
        raise IncompleteFactorizationError(f"unfactored cofactor {f.cofactor}")
    s, d = 1, f.sign
    for p, e in f.factors:
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d
