"""Lucas pairs built from Hecke eigenvalues, and primitive divisors of their sequences.

For ``nu = v_p(a_p)`` the roots of ``x^2 - a_p x + p^(k-1)`` divided by
``p^nu`` are the roots ``A, B`` of ``x^2 - P x + Q`` with ``P = a_p / p^nu``
and ``Q = p^(k-1-2 nu)``. Then ``u_(n+1) = a(p^n) / p^(n nu)`` and every
divisor ``t`` of ``n`` with ``t > 30`` contributes a prime of ``u_n`` that
divides no earlier term (Bilu-Hanrot-Voutier), which is what the
certificates below exhibit explicitly.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from math import gcd
from typing import Any, Mapping, Sequence

from .arith import FactorBudget, divisors, find_prime_factor, is_prime, p_adic_valuation
from .errors import (
    DegeneratePairError,
    FormatViolationError,
    NotADivisorError,
    NotPrimeError,
    OutsideDeligneRangeError,
    ValuationTooLargeError,
    ZeroEigenvalueError,
)
from .quadratic import QuadraticPair, gamma_is_root_of_unity
from .tau import prime_power_coefficient

__all__ = [
    "BHV_THRESHOLD",
    "LucasPair",
    "OmegaCertificate",
    "PrimitiveDivisorRecord",
    "Status",
    "ValuationReport",
    "bilu_luca_threshold",
    "certified_omega_lower_bound",
    "divisibility_check",
    "eigenvalue_from_u",
    "lucas_terms",
    "lucas_u",
    "normalize_pair",
    "primitive_part",
    "valuation_identity_check",
    "verify_certificate",
]

BHV_THRESHOLD = 30


@dataclass(frozen=True)
class LucasPair:
    p: int
    k: int
    a_p: int
    nu: int
    P: int
    Q: int
    root_of_unity: bool

    def __post_init__(self) -> None:
        if self.P * self.p**self.nu != self.a_p:
            raise ValueError("P * p^nu must equal a_p")
        if self.Q != self.p ** (self.k - 1 - 2 * self.nu):
            raise ValueError("Q must equal p^(k-1-2nu)")
        if self.a_p and self.P % self.p == 0:
            raise ValueError("P must be prime to p")

    @property
    def discriminant(self) -> int:
        """``(A - B)^2 = P^2 - 4Q``."""
        return self.P * self.P - 4 * self.Q


def normalize_pair(
    p: int,
    k: int,
    a_p: int,
    *,
    allow_outside_deligne: bool = False,
    allow_degenerate: bool = False,
) -> LucasPair:
    """Divide out ``p^nu`` from the Frobenius roots.

    ``a_p = 0`` (``gamma = -1``) and other root-of-unity pairs are refused
    unless ``allow_degenerate`` is set; that switch exists to exercise error paths.
    """
    if p < 2 or not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if k < 2 or k % 2:
        raise ValueError(f"weight must be even, got {k}")
    if a_p == 0:
        if not allow_degenerate:
            raise ZeroEigenvalueError(f"a_p = 0 at p = {p}")
        return LucasPair(p, k, 0, 0, 0, p ** (k - 1), True)
    if not allow_outside_deligne and a_p * a_p > 4 * p ** (k - 1):
        raise OutsideDeligneRangeError(f"|a_p| > 2 p^((k-1)/2) at p = {p}")
    nu = p_adic_valuation(a_p, p)
    if k - 1 - 2 * nu < 1:
        raise ValuationTooLargeError(f"v_p(a_p) = {nu} leaves no room in weight {k}")
    degenerate = gamma_is_root_of_unity(QuadraticPair.from_eigenvalue(p, k, a_p))
    if degenerate and not allow_degenerate:
        raise DegeneratePairError(f"alpha/beta is a root of unity at p = {p}")
    return LucasPair(p, k, a_p, nu, a_p // p**nu, p ** (k - 1 - 2 * nu), degenerate)


def lucas_terms(pair: LucasPair, n: int) -> list[int]:
    """``[u_0, ..., u_n]``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    terms = [0, 1]
    P, Q = pair.P, pair.Q
    for _ in range(n - 1):
        terms.append(P * terms[-1] - Q * terms[-2])
    return terms[: n + 1]


def lucas_u(pair: LucasPair, n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = 0, 1
    if n == 0:
        return 0
    for _ in range(n - 1):
        prev, cur = cur, pair.P * cur - pair.Q * prev
    return cur


def eigenvalue_from_u(pair: LucasPair, n: int) -> int:
    """``a(p^n) = p^(n nu) u_(n+1)``."""
    return pair.p ** (n * pair.nu) * lucas_u(pair, n + 1)


@dataclass(frozen=True)
class ValuationReport:
    ok: bool
    checked: int
    first_counterexample: int | None = None


def valuation_identity_check(pair: LucasPair, n_max: int) -> ValuationReport:
    """Check ``v_p(a(p^n)) == n * nu`` for ``1 <= n <= n_max`` on the unnormalized recurrence."""
    if pair.a_p == 0:
        raise ZeroEigenvalueError("a_p = 0")
    norm = pair.p ** (pair.k - 1)
    prev, cur = 1, pair.a_p
    for n in range(1, n_max + 1):
        if cur == 0 or p_adic_valuation(cur, pair.p) != n * pair.nu:
            return ValuationReport(False, n, n)
        prev, cur = cur, pair.a_p * cur - norm * prev
    return ValuationReport(True, n_max)


class Status(str, enum.Enum):
    FOUND = "Found"
    EMPTY = "Empty"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PrimitiveDivisorRecord:
    index: int
    primitive_part: int
    witness_prime: int | None
    status: Status


def _strip(value: int, guard: int) -> int:
    while (g := gcd(value, guard)) > 1:
        value //= g
    return value


def primitive_part(
    pair: LucasPair,
    n: int,
    budget: FactorBudget | None = None,
    terms: Sequence[int] | None = None,
) -> PrimitiveDivisorRecord:
    """Largest divisor of ``u_n`` sharing no prime with ``P Q (P^2 - 4Q)`` or ``u_1 ... u_(n-1)``.

    Works by repeated gcd-and-divide, so ``u_n`` is never factored; a single
    prime factor of the result is then sought within ``budget`` as a witness.
    """
    if pair.root_of_unity:
        raise DegeneratePairError("primitive parts need a non-degenerate pair")
    if n < 1:
        raise ValueError("n must be >= 1")
    if terms is None or len(terms) <= n:
        terms = lucas_terms(pair, n)
    part = abs(terms[n])
    part = _strip(part, abs(pair.discriminant * pair.P * pair.Q))
    for t in range(1, n):
        if part == 1:
            break
        part = _strip(part, abs(terms[t]))
    if part == 1:
        return PrimitiveDivisorRecord(n, 1, None, Status.EMPTY)
    witness = find_prime_factor(part, budget)
    status = Status.UNKNOWN if witness is None else Status.FOUND
    return PrimitiveDivisorRecord(n, part, witness, status)


@dataclass(frozen=True)
class OmegaCertificate:
    pair: LucasPair
    n: int
    threshold: int
    a_priori: int
    entries: tuple[PrimitiveDivisorRecord, ...]

    @property
    def certified(self) -> int:
        return sum(1 for e in self.entries if e.primitive_part > 1)

    @property
    def unknown(self) -> int:
        return sum(1 for e in self.entries if e.status is Status.UNKNOWN)

    @property
    def consistent(self) -> bool:
        """Certified count reaches the a priori count, or undecided entries explain a gap."""
        return self.certified >= self.a_priori or self.unknown > 0

    def to_json(self) -> str:
        entries = []
        for e in self.entries:
            row: dict[str, Any] = {"t": e.index, "primitive_part": str(e.primitive_part)}
            if e.witness_prime is not None:
                row["witness_prime"] = str(e.witness_prime)
            row["status"] = e.status.value
            entries.append(row)
        doc = {
            "p": self.pair.p,
            "k": self.pair.k,
            "ap": str(self.pair.a_p),
            "n": self.n,
            "threshold": self.threshold,
            "entries": entries,
        }
        return json.dumps(doc, indent=2)


def certified_omega_lower_bound(
    pair: LucasPair,
    n: int,
    threshold: int = BHV_THRESHOLD,
    budget: FactorBudget | None = None,
) -> OmegaCertificate:
    """Two lower bounds for ``omega(u_n)``.

    ``a_priori`` counts divisors of ``n`` above ``threshold``; ``certified``
    counts divisors whose primitive part is actually > 1. The primitive parts
    are pairwise coprime divisors of ``u_n``, so each contributes a distinct prime.
    """
    if pair.root_of_unity:
        raise DegeneratePairError("certificates need a non-degenerate pair")
    if n < 1:
        raise ValueError("n must be >= 1")
    divs = divisors(n)
    a_priori = sum(1 for t in divs if t > threshold)
    terms = lucas_terms(pair, n)
    entries = tuple(primitive_part(pair, t, budget, terms) for t in divs if t > 1)
    return OmegaCertificate(pair, n, threshold, a_priori, entries)


def verify_certificate(doc: str | Mapping[str, Any]) -> bool:
    """Independently re-check a serialized certificate.

    Every primitive part must divide ``u_n``, the parts must be pairwise
    coprime, and each witness must be a prime dividing its part.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        pair = normalize_pair(int(doc["p"]), int(doc["k"]), int(doc["ap"]))
        n = int(doc["n"])
        entries = doc["entries"]
        u_n = lucas_u(pair, n)
        parts = []
        for e in entries:
            t, part = int(e["t"]), int(e["primitive_part"])
            if n % t or u_n % part:
                return False
            w = e.get("witness_prime")
            if e["status"] == Status.FOUND.value:
                if w is None or not is_prime(int(w)) or part % int(w):
                    return False
            if e["status"] == Status.EMPTY.value and part != 1:
                return False
            parts.append(part)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatViolationError(f"malformed certificate: {exc}") from exc
    return all(gcd(a, b) == 1 for i, a in enumerate(parts) for b in parts[i + 1 :])


def divisibility_check(pair: LucasPair, t: int, n: int) -> bool:
    if t < 1 or n % t:
        raise NotADivisorError(f"{t} does not divide {n}")
    u_t = lucas_u(pair, t)
    return lucas_u(pair, n) % u_t == 0


def bilu_luca_threshold(d: int) -> int:
    """``max(2^(d+1), 10^30 d^9)``: primitive divisors exist past this index in degree ``d``."""
    return max(2 ** (d + 1), 10**30 * d**9)


def eigenvalue_by_recurrence(pair: LucasPair, n: int) -> int:
    """``a(p^n)`` straight from the Hecke recurrence, for cross-checking ``eigenvalue_from_u``."""
    return prime_power_coefficient(pair.a_p, pair.p, pair.k, n)
