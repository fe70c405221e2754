"""Quadratic algebraic numbers attached to ``x^2 - a_p x + p^(k-1)``.

Covers the Sato-Tate angle, the root-of-unity test for ``gamma = alpha/beta``,
absolute logarithmic heights, the norm of ``A^n - B^n`` and evaluators for the
radical lower bounds that hold under Frey's refined ABC conjecture.

Root-of-unity test. ``gamma`` has degree <= 2 and ``gamma + 1/gamma =
(alpha^2 + beta^2)/(alpha beta) = t - 2`` with ``t = a_p^2 / p^(k-1)``. For
complex conjugate roots ``|gamma| = 1``, so ``gamma = e^(2 i theta)`` and
``t - 2 = 2 cos(2 theta)``. A root of unity of degree <= 2 has
``2 cos(2 theta)`` in ``{-2, -1, 0, 1, 2}``, i.e. ``t in {0, 1, 2, 3, 4}``;
conversely each of those values gives an order 2, 3, 4, 6 or 1 root. A zero
discriminant gives ``gamma = 1``; a positive one gives a real ``gamma`` with
``|gamma| != 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import TYPE_CHECKING

import mpmath

from .arith import FactorBudget, factorize, p_adic_valuation, radical, squarefree_split
from .errors import (
    DegenerateDiscriminantError,
    DegeneratePairError,
    NonCoprimePairError,
    OutsideDeligneRangeError,
    RootOfUnityPairError,
    ZeroInputError,
)

if TYPE_CHECKING:
    from .lucas import LucasPair

__all__ = [
    "DEFAULT_PRECISION",
    "FreyBound",
    "HeightValue",
    "QuadraticNumber",
    "QuadraticPair",
    "frey_bound_general",
    "frey_bound_tau",
    "gamma_is_root_of_unity",
    "gamma_value",
    "height_floor",
    "height_of_normalized_root",
    "height_quadratic",
    "log_norm_difference",
    "norm_lemma_ratio",
    "sato_tate_angle",
]

DEFAULT_PRECISION = 128
_ROOT_OF_UNITY_T = frozenset(Fraction(i) for i in range(5))


def _context(bits: int) -> mpmath.MPContext:
    # a private context per call keeps callers on other threads unaffected
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class QuadraticPair:
    trace: int
    norm: int
    discriminant: int
    p: int
    k: int

    def __post_init__(self) -> None:
        if self.discriminant != self.trace * self.trace - 4 * self.norm:
            raise ValueError("discriminant must equal trace^2 - 4*norm")

    @classmethod
    def from_eigenvalue(cls, p: int, k: int, a_p: int) -> "QuadraticPair":
        norm = p ** (k - 1)
        return cls(a_p, norm, a_p * a_p - 4 * norm, p, k)


@dataclass(frozen=True)
class HeightValue:
    value: mpmath.mpf
    error_bound: mpmath.mpf

    def __float__(self) -> float:
        return float(self.value)

    def close_to(self, other: "HeightValue | float", tol: float = 0.0) -> bool:
        """Interval test: fail only when the two error intervals are separated by more than ``tol``."""
        if isinstance(other, HeightValue):
            slack = self.error_bound + other.error_bound
            other = other.value
        else:
            slack = self.error_bound
        return abs(self.value - other) <= slack + tol


def _height(ctx: mpmath.MPContext, value) -> HeightValue:
    # relative rounding error of a handful of correctly rounded operations
    err = max(abs(value), 1) * ctx.ldexp(1, 4 - ctx.prec)
    return HeightValue(value, err)


@dataclass(frozen=True)
class QuadraticNumber:
    """``(x + y*sqrt(d)) / z`` with ``gcd(x, y, z) = 1``, ``z > 0`` and ``d`` squarefree.

    Rationals are stored with ``y = 0`` and ``d = 1``.
    """

    x: int
    y: int
    d: int
    z: int

    @classmethod
    def make(cls, x: int, y: int, d: int, z: int) -> "QuadraticNumber":
        if z == 0:
            raise ZeroDivisionError("zero denominator")
        if d == 1:
            x, y = x + y, 0
        if y == 0:
            d = 1
        g = gcd(gcd(x, y), z)
        if z < 0:
            g = -g
        return cls(x // g, y // g, d, z // g)

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.x, -self.y, self.d, self.z)

    def minimal_polynomial(self) -> tuple[int, ...]:
        """Primitive integer coefficients, leading coefficient positive, highest degree first."""
        if self.is_rational:
            g = gcd(self.x, self.z)
            return (self.z // g, -self.x // g)
        a0 = self.z * self.z
        a1 = -2 * self.x * self.z
        a2 = self.x * self.x - self.y * self.y * self.d
        g = gcd(gcd(a0, a1), a2)
        return (a0 // g, a1 // g, a2 // g)

    def __complex__(self) -> complex:
        root = math.sqrt(abs(self.d))
        if self.d < 0:
            return complex(self.x / self.z, self.y * root / self.z)
        return complex((self.x + self.y * root) / self.z)

    def __str__(self) -> str:
        if self.is_rational:
            return str(Fraction(self.x, self.z))
        sign = "-" if self.y < 0 else "+"
        coef = "" if abs(self.y) == 1 else f"{abs(self.y)}*"
        body = f"{self.x} {sign} {coef}sqrt({self.d})"
        return f"({body})" if self.z == 1 else f"({body})/{self.z}"


def sato_tate_angle(q: QuadraticPair) -> float:
    """``theta`` in ``[0, pi]`` with ``a_p = 2 p^((k-1)/2) cos(theta)``."""
    if q.discriminant > 0:
        raise OutsideDeligneRangeError(f"a_p={q.trace} exceeds the Deligne range at p={q.p}")
    # a_p^2 / (4 p^(k-1)) as a correctly rounded float, then restore the sign
    cos2 = (q.trace * q.trace) / (4 * q.norm)
    c = math.copysign(math.sqrt(min(cos2, 1.0)), q.trace) if q.trace else 0.0
    return math.acos(max(-1.0, min(1.0, c)))


def gamma_is_root_of_unity(q: QuadraticPair) -> bool:
    if q.discriminant == 0:
        return True
    if q.discriminant > 0:
        return False
    return Fraction(q.trace * q.trace, q.norm) in _ROOT_OF_UNITY_T


def gamma_value(q: QuadraticPair, budget: FactorBudget | None = None) -> QuadraticNumber:
    """``alpha/beta = alpha^2/p^(k-1) = (a^2 - 2N + a*sqrt(disc)) / (2N)``, taking ``alpha`` with ``+sqrt``."""
    if q.discriminant == 0:
        raise DegenerateDiscriminantError("alpha == beta")
    s, d = squarefree_split(q.discriminant, budget)
    a, n = q.trace, q.norm
    return QuadraticNumber.make(a * a - 2 * n, a * s, d, 2 * n)


def height_quadratic(x: QuadraticNumber, precision: int = DEFAULT_PRECISION) -> HeightValue:
    """Absolute logarithmic height from the minimal polynomial (Mahler measure / degree)."""
    if x.x == 0 and x.y == 0:
        raise ZeroInputError("height of 0")
    ctx = _context(precision + 16)
    if x.is_rational:
        return _height(ctx, ctx.log(max(abs(x.x), x.z)))
    a0, _, a2 = x.minimal_polynomial()
    if x.d < 0:
        # conjugate roots with |root|^2 = a2/a0 exactly
        return _height(ctx, ctx.log(max(a0, abs(a2))) / 2)
    extra = 2 * max(abs(x.x), abs(x.y), x.z).bit_length()
    ctx = _context(precision + 16 + extra)
    r = ctx.sqrt(x.d)
    total = ctx.log(a0)
    for sign in (1, -1):
        root = abs((x.x + sign * x.y * r) / x.z)
        if root > 1:
            total += ctx.log(root)
    return _height(ctx, total / 2)


def height_of_normalized_root(pair: "LucasPair", precision: int = DEFAULT_PRECISION) -> HeightValue:
    """``((k-1)/2 - nu) * log p``, the common height of ``A_p`` and ``B_p``."""
    ctx = _context(precision + 16)
    return _height(ctx, ctx.mpf(pair.k - 1 - 2 * pair.nu) / 2 * ctx.log(pair.p))


def height_floor(d: int) -> float:
    """Lower bound ``1/(4 d (log* d)^3)`` for the height of a non-torsion degree-``d`` number."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return 1.0 / (4 * d * max(1.0, math.log(d)) ** 3)


def _check_pair(pair: "LucasPair") -> None:
    if gcd(pair.P, pair.Q) != 1:
        raise NonCoprimePairError(f"gcd(P, Q) = {gcd(pair.P, pair.Q)}")
    if pair.root_of_unity:
        raise DegeneratePairError("A/B is a root of unity")


def _square_root(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def log_norm_difference(
    pair: "LucasPair", n: int, precision: int = DEFAULT_PRECISION
) -> HeightValue:
    """``log |N_K(A^n - B^n)|`` with ``K = Q(A)``.

    ``N_K(A^n - B^n) = -u_n^2 (P^2 - 4Q)`` when the discriminant is not a
    square; otherwise ``A, B`` are integers and the norm is ``u_n * (A - B)``.
    """
    from .lucas import lucas_u

    _check_pair(pair)
    if n < 1:
        raise ValueError("n must be >= 1")
    disc = pair.P * pair.P - 4 * pair.Q
    u = abs(lucas_u(pair, n))
    s = _square_root(disc)
    target = u * s if s is not None else u * u * abs(disc)
    ctx = _context(precision + target.bit_length().bit_length() + 16)
    value = ctx.log(target)
    return HeightValue(value, ctx.ldexp(1, -precision))


def _log_house(ctx: mpmath.MPContext, pair: "LucasPair") -> tuple[object, int]:
    """``(sum over embeddings of log max(|A|, |B|), degree)``."""
    disc = pair.P * pair.P - 4 * pair.Q
    if disc < 0:
        return ctx.log(pair.Q), 2
    top = (abs(pair.P) + ctx.sqrt(disc)) / 2
    if _square_root(disc) is not None:
        return ctx.log(top), 1
    return 2 * ctx.log(top), 2


def norm_lemma_ratio(pair: "LucasPair", n: int, precision: int = DEFAULT_PRECISION):
    """``log|N_K(A^n - B^n)| / (h(A/B) [K:Q] n)``; tends to 1 as ``n`` grows."""
    lnd = log_norm_difference(pair, n, precision)
    ctx = _context(precision + 16)
    house, _ = _log_house(ctx, pair)
    if house <= 0:
        raise DegeneratePairError("h(A/B) = 0, ratio undefined")
    return lnd.value / (house * n)


def frey_bound_general(hK_A: float, QK_AB: int, n: int, epsilon: float, c: float = 1.0):
    """``(c / Q_K(AB)) * exp((1 - eps) h_K(A) n)``; ``c`` stands in for the ineffective constant."""
    if not 0 <= epsilon < 1:
        raise ValueError("epsilon must lie in [0, 1)")
    if c <= 0 or QK_AB < 1:
        raise ValueError("c must be positive and Q_K(AB) >= 1")
    ctx = _context(DEFAULT_PRECISION)
    return ctx.mpf(c) / QK_AB * ctx.exp((1 - ctx.mpf(epsilon)) * ctx.mpf(hK_A) * n)


@dataclass(frozen=True)
class FreyBound:
    """``constant / radical * base ** exponent`` kept symbolic so it can be evaluated exactly."""

    constant: Fraction
    radical: int
    base: int
    exponent: Fraction

    def exact(self) -> Fraction:
        if self.exponent.denominator != 1:
            raise ValueError(f"exponent {self.exponent} is not an integer")
        return self.constant / self.radical * Fraction(self.base) ** int(self.exponent)

    def log(self, precision: int = DEFAULT_PRECISION):
        ctx = _context(precision + 16)
        e = self.exponent
        return (
            ctx.log(self.constant.numerator)
            - ctx.log(self.constant.denominator)
            - ctx.log(self.radical)
            + ctx.mpf(e.numerator) / e.denominator * ctx.log(self.base)
        )

    def value(self, precision: int = DEFAULT_PRECISION):
        return _context(precision + 16).exp(self.log(precision))


def frey_bound_tau(
    p: int,
    a_p: int,
    k: int,
    n: int,
    epsilon: float | Fraction = 0,
    c: float | Fraction = 1,
    budget: FactorBudget | None = None,
) -> FreyBound:
    """Conditional lower bound for ``Q(a(p^n))``.

    ``c / Q(a_p^2 - 4 p^(k-1)) * p^((1-eps)((k-1)/2 - nu)(n+1) + delta)`` with
    ``nu = v_p(a_p)`` and ``delta = 1`` if ``nu != 0`` else ``-1``.
    """
    q = QuadraticPair.from_eigenvalue(p, k, a_p)
    if gamma_is_root_of_unity(q):
        raise RootOfUnityPairError(f"gamma is a root of unity for p={p}, a_p={a_p}")
    eps, const = Fraction(epsilon), Fraction(c)
    if not 0 <= eps < 1:
        raise ValueError("epsilon must lie in [0, 1)")
    if const <= 0:
        raise ValueError("c must be positive")
    nu = p_adic_valuation(a_p, p)
    delta = 1 if nu else -1
    exponent = (1 - eps) * Fraction(k - 1 - 2 * nu, 2) * (n + 1) + delta
    rad = radical(factorize(q.discriminant, budget))
    return FreyBound(const, rad, p, exponent)
