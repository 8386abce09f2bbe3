"""Quadratic Hilbert symbols over Q, written additively in (1/2)Z/Z."""

from __future__ import annotations

from fractions import Fraction

from .padic_core import PadicApprox, is_prime, legendre, prime_factors, unit_part, valuation

REAL = "inf"
Place = int | str

ZERO = Fraction(0)
HALF = Fraction(1, 2)


class PrecisionError(ValueError):
    """A finite-precision input does not pin down the symbol."""

    def __init__(self, message: str, extra_digits: int) -> None:
        super().__init__(message)
        self.extra_digits = extra_digits


def add_invariants(*values: Fraction) -> Fraction:
    return sum(values, ZERO) % 1


def check_place(v: Place) -> Place:
    if v == REAL:
        return v
    if isinstance(v, int) and is_prime(v):
        return v
    raise ValueError(f"not a place of Q: {v!r}")


def _symbol_from_local_data(alpha: int, u: int, beta: int, w: int, p: int) -> Fraction:
    # a = p^alpha * u, b = p^beta * w, units given modulo p (odd p) or 8 (p = 2)
    if p == 2:
        eps_u, eps_w = (u - 1) // 2 % 2, (w - 1) // 2 % 2
        om_u, om_w = (u * u - 1) // 8 % 2, (w * w - 1) // 8 % 2
        e = eps_u * eps_w + alpha * om_w + beta * om_u
    else:
        e = 0
        if alpha * beta % 2 and (p - 1) // 2 % 2:
            e += 1
        if beta % 2 and legendre(u, p) == -1:
            e += 1
        if alpha % 2 and legendre(w, p) == -1:
            e += 1
    return HALF if e % 2 else ZERO


def _local_data(q: Fraction, p: int) -> tuple[int, int]:
    mod = 8 if p == 2 else p
    u = unit_part(q, p)
    return valuation(q, p), u.numerator * pow(u.denominator, -1, mod) % mod  # type: ignore[return-value]


def hilbert_symbol(a: int | Fraction, b: int | Fraction, v: Place) -> Fraction:
    """(a, b)_v: 0 when z^2 = a x^2 + b y^2 has a nontrivial Q_v solution, else 1/2."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero entries")
    v = check_place(v)
    if v == REAL:
        return HALF if a < 0 and b < 0 else ZERO
    alpha, u = _local_data(a, v)  # type: ignore[arg-type]
    beta, w = _local_data(b, v)  # type: ignore[arg-type]
    return _symbol_from_local_data(alpha, u, beta, w, v)  # type: ignore[arg-type]


def hilbert_symbol_padic(a: PadicApprox, b: int | Fraction, p: int) -> Fraction:
    """(a, b)_p where ``a`` is known only to finite precision."""
    b = Fraction(b)
    if b == 0 or a.is_zero:
        raise ValueError("Hilbert symbol needs nonzero entries")
    if a.prime != p:
        raise ValueError("prime mismatch")
    need = 3 if p == 2 else 1
    if a.precision < need:
        raise PrecisionError(
            f"square class of first slot undetermined at p={p}; deepen by {need - a.precision}",
            need - a.precision,
        )
    mod = 8 if p == 2 else p
    beta, w = _local_data(b, p)
    return _symbol_from_local_data(a.valuation, a.unit % mod, beta, w, p)  # type: ignore[arg-type]


def relevant_places(a: int | Fraction, b: int | Fraction) -> list[Place]:
    a, b = Fraction(a), Fraction(b)
    primes: set[int] = {2}
    for q in (a, b):
        primes.update(prime_factors(q.numerator))
        primes.update(prime_factors(q.denominator))
    return [REAL, *sorted(primes)]


def product_formula_check(a: int | Fraction, b: int | Fraction) -> bool:
    """Sum of (a, b)_v over all places is 0 (other places contribute nothing)."""
    total = add_invariants(*(hilbert_symbol(a, b, v) for v in relevant_places(a, b)))
    return total == 0
