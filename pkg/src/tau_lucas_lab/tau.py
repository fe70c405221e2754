"""Ramanujan tau and integer Hecke eigenvalues.

The table is the q-expansion of ``q * prod (1 - q^n)^24``. The product is
computed as ``(eta^3)^8`` where ``eta^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)``
(Jacobi's identity), followed by three exact squarings. Each squaring packs
the coefficients into one big integer (Kronecker substitution), so the heavy
lifting is a single big-integer multiplication.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .arith import factorize, is_prime
from .errors import (
    BoundTooLargeError,
    FormatViolationError,
    IncompleteFactorizationError,
    InsufficientTableError,
    InvalidEigenDataError,
    IoFailureError,
    NotPrimeError,
    UnknownPrimeError,
)

try:
    import gmpy2
except ImportError:  # pragma: no cover - pure int fallback
    gmpy2 = None

__all__ = [
    "DEFAULT_MAX_BOUND",
    "HeckeEigenData",
    "TauTable",
    "build_tau_table",
    "eta_cubed",
    "hecke_prime_power",
    "load_table",
    "prime_power_coefficient",
    "square_series",
    "store_table",
    "tau",
    "tau_eigendata",
    "tau_prime_power",
]

DEFAULT_MAX_BOUND = 10**6
TAU_WEIGHT = 12


@dataclass(frozen=True)
class TauTable:
    bound: int
    values: tuple[int, ...]  # values[n] = tau(n); values[0] is a placeholder 0

    def __post_init__(self) -> None:
        if len(self.values) != self.bound + 1:
            raise ValueError("values must have length bound + 1")

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.bound:
            raise InsufficientTableError(f"tau({n}) is outside the table bound {self.bound}")
        return self.values[n]

    def __iter__(self):
        return iter(range(1, self.bound + 1))

    def items(self):
        return ((n, self.values[n]) for n in range(1, self.bound + 1))


# --- series arithmetic ------------------------------------------------------


def _pack(coeffs: list[int], width: int) -> int:
    """Evaluate the polynomial at ``2**width`` (signed coefficients allowed)."""
    digits = width // 4
    pos = "".join(format(c, f"0{digits}x") if c > 0 else "0" * digits for c in reversed(coeffs))
    neg = "".join(format(-c, f"0{digits}x") if c < 0 else "0" * digits for c in reversed(coeffs))
    return int(pos, 16) - int(neg, 16)


def square_series(coeffs: list[int], length: int | None = None) -> list[int]:
    """Exact square of a power series, truncated to ``length`` terms."""
    if length is None:
        length = 2 * len(coeffs) - 1
    coeffs = coeffs[:length]
    if not coeffs:
        return [0] * length
    biggest = max(abs(c) for c in coeffs)
    if biggest == 0:
        return [0] * length
    # |product coefficient| <= len * biggest**2 < 2**(width - 1)
    width = 2 * biggest.bit_length() + len(coeffs).bit_length() + 2
    width += -width % 4
    x = _pack(coeffs, width)
    y = int(gmpy2.mpz(x) ** 2) if gmpy2 is not None else x * x
    digits = width // 4
    # bias every slot by 2**(width-1) so no slot borrows from its neighbour
    bias = int(("8" + "0" * (digits - 1)) * length, 16)
    y_low = y & ((1 << (width * length)) - 1)
    # truncating mod 2**(width*length) keeps the low slots intact since the
    # signed representation is exact there
    text = format((y_low + bias) & ((1 << (width * length)) - 1), f"0{digits * length}x")
    half = 1 << (width - 1)
    out = []
    for i in range(length):
        end = len(text) - i * digits
        out.append(int(text[end - digits : end], 16) - half)
    return out


def eta_cubed(length: int) -> list[int]:
    """Coefficients of ``prod (1 - q^n)^3`` below ``q**length``."""
    c = [0] * length
    k = 0
    while (e := k * (k + 1) // 2) < length:
        c[e] = (-1) ** k * (2 * k + 1)
        k += 1
    return c


def build_tau_table(bound: int, max_bound: int = DEFAULT_MAX_BOUND) -> TauTable:
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if bound > max_bound:
        raise BoundTooLargeError(f"bound {bound} exceeds configured maximum {max_bound}")
    series = eta_cubed(bound)
    for _ in range(3):
        series = square_series(series, bound)
    return TauTable(bound, (0, *series))


# --- prime powers -----------------------------------------------------------


def prime_power_coefficient(a_p: int, p: int, weight: int, e: int) -> int:
    """``a(p^e)`` from ``a(p^(n+1)) = a(p) a(p^n) - p^(k-1) a(p^(n-1))``."""
    if e < 0:
        raise ValueError("exponent must be >= 0")
    norm = p ** (weight - 1)
    prev, cur = 1, a_p
    if e == 0:
        return 1
    for _ in range(e - 1):
        prev, cur = cur, a_p * cur - norm * prev
    return cur


def tau_prime_power(p: int, e: int, a_p: int) -> int:
    if not is_prime(p) or p < 2:
        raise NotPrimeError(f"{p} is not prime")
    return prime_power_coefficient(a_p, p, TAU_WEIGHT, e)


def tau(n: int, table: TauTable) -> int:
    """``tau(n)`` by multiplicativity over the prime-power recurrence."""
    if n < 1:
        raise ValueError("tau is defined for n >= 1")
    f = factorize(n)
    if not f.complete:
        raise IncompleteFactorizationError(f"could not factor {n}")
    result = 1
    for p, e in f.factors:
        if p > table.bound:
            raise InsufficientTableError(f"prime {p} of {n} exceeds table bound {table.bound}")
        result *= tau_prime_power(p, e, table[p])
    return result


# --- user-supplied eigenforms -------------------------------------------------


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise InvalidEigenDataError(f"{what}: booleans are not integers")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and re.fullmatch(r"-?\d+", value.strip()):
        return int(value)
    raise InvalidEigenDataError(f"{what}: expected an integer decimal string, got {value!r}")


@dataclass(frozen=True)
class HeckeEigenData:
    """Prime-indexed eigenvalues of an integer-coefficient eigenform.

    Values breaking the Ramanujan-Petersson bound are kept and flagged in
    ``rp_violations`` so the toolkit can be pointed at suspect data.
    """

    label: str
    weight: int
    level: int
    prime_values: Mapping[int, int]
    rp_violations: frozenset[int] = field(init=False)

    def __post_init__(self) -> None:
        if self.weight < 12 or self.weight % 2:
            raise InvalidEigenDataError(f"weight must be even and >= 12, got {self.weight}")
        if self.level < 1:
            raise InvalidEigenDataError("level must be positive")
        values = {}
        for p, ap in self.prime_values.items():
            p, ap = _as_int(p, "p"), _as_int(ap, f"a({p})")
            if not is_prime(p) or p < 2:
                raise InvalidEigenDataError(f"{p} is not prime")
            if self.level % p == 0:
                raise InvalidEigenDataError(f"p={p} divides the level {self.level}")
            values[p] = ap
        object.__setattr__(self, "prime_values", dict(sorted(values.items())))
        bad = frozenset(p for p, ap in values.items() if ap * ap > 4 * p ** (self.weight - 1))
        object.__setattr__(self, "rp_violations", bad)

    @classmethod
    def from_json(cls, doc: str | Mapping[str, Any]) -> "HeckeEigenData":
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise InvalidEigenDataError(f"malformed JSON: {exc}") from exc
        try:
            primes = {_as_int(e["p"], "p"): _as_int(e["ap"], "ap") for e in doc["primes"]}
            return cls(
                label=str(doc.get("label", "")),
                weight=_as_int(doc["weight"], "weight"),
                level=_as_int(doc["level"], "level"),
                prime_values=primes,
            )
        except (KeyError, TypeError) as exc:
            raise InvalidEigenDataError(f"missing or malformed field: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(
            {
                "label": self.label,
                "weight": str(self.weight),
                "level": str(self.level),
                "primes": [{"p": str(p), "ap": str(a)} for p, a in self.prime_values.items()],
            }
        )


def hecke_prime_power(data: HeckeEigenData, p: int, e: int) -> int:
    if p not in data.prime_values:
        raise UnknownPrimeError(p)
    return prime_power_coefficient(data.prime_values[p], p, data.weight, e)


def tau_eigendata(table: TauTable, p_max: int | None = None) -> HeckeEigenData:
    """The discriminant form as ``HeckeEigenData`` (level 1, weight 12)."""
    p_max = table.bound if p_max is None else min(p_max, table.bound)
    primes = {p: table[p] for p in range(2, p_max + 1) if is_prime(p)}
    return HeckeEigenData("Delta", TAU_WEIGHT, 1, primes)


# --- persistence --------------------------------------------------------------

_HEADER = re.compile(r"TAUTABLE v1 bound=(\d+) sha256=([0-9a-f]{64})")


def _body(table: TauTable) -> bytes:
    return "".join(f"{n}\t{v}\n" for n, v in table.items()).encode("ascii")


def store_table(table: TauTable, path: str | os.PathLike) -> None:
    body = _body(table)
    digest = hashlib.sha256(body).hexdigest()
    header = f"TAUTABLE v1 bound={table.bound} sha256={digest}\n".encode("ascii")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(header + body)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def load_table(path: str | os.PathLike) -> TauTable:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    head, sep, body = raw.partition(b"\n")
    m = _HEADER.fullmatch(head.decode("ascii", "replace"))
    if not sep or m is None:
        raise FormatViolationError("bad or missing TAUTABLE header")
    bound, digest = int(m.group(1)), m.group(2)
    if hashlib.sha256(body).hexdigest() != digest:
        raise FormatViolationError("checksum mismatch")
    lines = body.decode("ascii").split("\n")
    if lines[-1] != "" or len(lines) - 1 != bound:
        raise FormatViolationError(f"expected {bound} rows")
    values = [0]
    for expected, line in enumerate(lines[:-1], start=1):
        n, _, v = line.partition("\t")
        if n != str(expected) or not re.fullmatch(r"-?\d+", v):
            raise FormatViolationError(f"malformed row {expected}: {line!r}")
        values.append(int(v))
    return TauTable(bound, tuple(values))
