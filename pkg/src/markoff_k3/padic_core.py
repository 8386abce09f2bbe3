"""Exact p-adic helpers: valuations, square classes and Newton (Hensel) lifting.

Values are plain Python ints and ``Fraction``s; a p-adic number known to finite
precision is a :class:`PadicApprox`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Sequence

import sympy

Triple = tuple[int, int, int]
Evaluator = Callable[[Sequence[int]], int]
GradientEvaluator = Callable[[Sequence[int]], Sequence[int]]

MAX_FACTOR_DIGITS = 40


@total_ordering
class _Infinity:
    """Valuation of exact zero. Compares above every integer and is not a number."""

    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        return False

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("padic-infinity")


INFINITY = _Infinity()


class NotLiftableError(ValueError):
    """Newton condition m > 2e fails for the supplied residue point."""


class SingularPointError(ValueError):
    """Every partial derivative vanishes at the working precision."""


class FactorizationTooLargeError(ValueError):
    pass


def is_prime(p: int) -> bool:
    return p >= 2 and bool(sympy.isprime(p))


def primes_up_to(bound: int) -> list[int]:
    return list(sympy.primerange(2, bound + 1)) if bound >= 2 else []


def prime_factors(n: int, digit_bound: int = MAX_FACTOR_DIGITS) -> list[int]:
    """Sorted distinct prime divisors of ``|n|`` (empty for 0 and +-1)."""
    n = abs(int(n))
    if n < 2:
        return []
    if len(str(n)) > digit_bound:
        raise FactorizationTooLargeError(f"factorization too large: {n} has more than {digit_bound} digits")
    return sorted(sympy.factorint(n))


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(n: int | Fraction, p: int) -> int | _Infinity:
    """Exponent of ``p`` in the nonzero rational ``n``; :data:`INFINITY` for zero."""
    q = Fraction(n)
    if q == 0:
        return INFINITY
    return _int_valuation(abs(q.numerator), p) - _int_valuation(q.denominator, p)


def unit_part(n: int | Fraction, p: int) -> Fraction:
    q = Fraction(n)
    v = valuation(q, p)
    if v is INFINITY:
        raise ValueError("zero has no unit part")
    return q / Fraction(p) ** v


def residue(q: int | Fraction, modulus: int) -> int:
    """Image of a rational with denominator prime to ``modulus`` in Z/modulus."""
    q = Fraction(q)
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class PadicApprox:
    """``p**valuation * unit`` with ``unit`` known modulo ``p**precision``.

    ``is_zero`` marks exact zero. ``precision == 0`` means only a lower bound on
    the valuation is known (the residue vanished at the working depth).
    """

    prime: int
    valuation: int | _Infinity
    unit: int
    precision: int
    is_zero: bool = False

    def __post_init__(self) -> None:
        if self.is_zero:
            if self.valuation is not INFINITY:
                raise ValueError("zero must carry infinite valuation")
            return
        if self.precision < 0:
            raise ValueError("precision must be nonnegative")
        mod = self.prime**self.precision
        if self.precision and self.unit % self.prime == 0:
            raise ValueError("unit part must be coprime to the prime")
        if not 0 <= self.unit < mod and not (mod == 1 and self.unit == 0):
            raise ValueError("unit must be reduced modulo prime**precision")

    @classmethod
    def zero(cls, p: int) -> "PadicApprox":
        return cls(p, INFINITY, 0, 0, True)

    @classmethod
    def from_rational(cls, q: int | Fraction, p: int, precision: int) -> "PadicApprox":
        q = Fraction(q)
        if q == 0:
            return cls.zero(p)
        v = valuation(q, p)
        u = unit_part(q, p)
        return cls(p, v, residue(u, p**precision), precision)

    @classmethod
    def from_residue(cls, a: int, p: int, m: int) -> "PadicApprox":
        """Value of an integer known only modulo ``p**m``."""
        mod = p**m
        a %= mod
        if a == 0:
            return cls(p, m, 0, 0)
        v = _int_valuation(a, p)
        prec = m - v
        return cls(p, v, (a // p**v) % p**prec, prec)

    @property
    def determined(self) -> bool:
        return not self.is_zero and self.precision > 0


def square_class(a: PadicApprox) -> str:
    """'square', 'nonsquare' or 'undetermined' for a nonzero p-adic number."""
    if a.is_zero:
        raise ValueError("square class of zero is undefined")
    need = 3 if a.prime == 2 else 1
    if a.precision < need:
        return "undetermined"
    if a.valuation % 2:
        return "nonsquare"
    if a.prime == 2:
        return "square" if a.unit % 8 == 1 else "nonsquare"
    return "square" if legendre(a.unit, a.prime) == 1 else "nonsquare"


def is_padic_square(q: int | Fraction, p: int) -> bool:
    """Exact squareness of a nonzero rational in Q_p."""
    return square_class(PadicApprox.from_rational(q, p, 3 if p == 2 else 1)) == "square"


@dataclass(frozen=True)
class ResidueWitness:
    """Residue point with F = 0 mod p**exponent and its Newton certificate."""

    prime: int
    exponent: int
    point: Triple
    liftable: bool
    lift_margin: int
    derivative_valuation: int

    def __post_init__(self) -> None:
        if self.liftable and self.lift_margin < 1:
            raise ValueError("liftable witnesses need a positive lift margin")


def _min_derivative(grad: Sequence[int], p: int, m: int) -> tuple[int, int]:
    """(e, index) with e the least partial valuation capped at m."""
    best = (m, 0)
    for i, g in enumerate(grad):
        g %= p**m
        v = m if g == 0 else _int_valuation(g, p)
        if v < best[0]:
            best = (v, i)
    return best


def newton_certificate(
    value: Evaluator, gradient: GradientEvaluator, point: Sequence[int], p: int, m: int
) -> ResidueWitness | None:
    """Certificate for a residue point, or None when F(point) is not 0 mod p**m."""
    pt = tuple(int(c) % p**m for c in point)
    if value(pt) % p**m:
        return None
    e, _ = _min_derivative(gradient(pt), p, m)
    margin = m - 2 * e
    return ResidueWitness(p, m, pt, margin >= 1, margin, e)


def hensel_lift(
    value: Evaluator, gradient: GradientEvaluator, witness: ResidueWitness, target: int
) -> Triple:
    """Lift a certified residue point to a solution modulo ``p**target``.

    Newton iteration runs on the coordinate whose partial derivative has the
    least valuation (lowest index on ties); the result agrees with the witness
    modulo ``p**(m - e)``.
    """
    p, m = witness.prime, witness.exponent
    pt = list(witness.point)
    if value(pt) % p**m:
        raise NotLiftableError("residue point does not satisfy the equation")
    e, idx = _min_derivative(gradient(pt), p, m)
    if e >= m:
        raise SingularPointError(f"all partial derivatives vanish mod {p}^{m} at {tuple(pt)}")
    if m <= 2 * e:
        raise NotLiftableError(f"not certified liftable: m={m}, e={e}")
    if target <= m - e:
        return tuple(c % p**target for c in pt)  # type: ignore[return-value]
    work = p ** (target + e)
    pe = p**e
    for _ in range(4 * target.bit_length() + 8):
        f = value(pt)
        if f % p**target == 0:
            break
        d = gradient(pt)[idx]
        if f % pe or _int_valuation(d, p) != e:
            raise SingularPointError("derivative valuation changed during lifting")
        step = (f // pe) * pow(d // pe, -1, work) % work
        pt[idx] = (pt[idx] - step) % work
    else:
        raise NotLiftableError("Newton iteration failed to converge")
    return tuple(c % p**target for c in pt)  # type: ignore[return-value]
