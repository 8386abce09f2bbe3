"""Point counts of the projective F3 surface over small finite fields and the
Frobenius characteristic polynomial that bounds its geometric Picard number.

The surface is the closure of F3 = k in (P^1)^3: each monomial x^2i y^2j z^2l
becomes x0^2i x1^(2-2i) y0^2j y1^(2-2j) z0^2l z1^(2-2l).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import sympy

from .padic_core import is_prime
from .surfaces import FamilyId, Surface

MAX_FIELD_SIZE = 5**3
FIXED_EXPONENTS = (11, 7)  # multiplicities of t - 1 and t + 1 in the full polynomial


class SingularReductionError(ValueError):
    pass


class FieldTooLargeError(ValueError):
    pass


class SignUndeterminedError(ValueError):
    pass


class TraceInconsistencyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# finite fields


@dataclass(frozen=True)
class FiniteField:
    """F_q with q = p^n, elements encoded as integers 0..q-1 (base-p digits of a
    polynomial in the generator). Tables are numpy arrays indexed by codes."""

    p: int
    n: int
    modulus: tuple[int, ...]  # monic irreducible, low degree first
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray

    @property
    def q(self) -> int:
        return self.p**self.n

    def element(self, c: int) -> int:
        """Image of the integer c."""
        return c % self.p

    def squares(self) -> np.ndarray:
        out = np.zeros(self.q, dtype=bool)
        out[self.mul[np.arange(self.q), np.arange(self.q)]] = True
        return out


def _irreducible(p: int, n: int) -> tuple[int, ...]:
    x = sympy.Symbol("x")
    for tail in itertools.product(range(p), repeat=n):
        coeffs = list(tail) + [1]
        poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        if poly.is_irreducible:
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible polynomial of degree {n} mod {p}")


@lru_cache(maxsize=None)
def finite_field(p: int, n: int) -> FiniteField:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = p**n
    if q > MAX_FIELD_SIZE:
        raise FieldTooLargeError(f"field size {q} exceeds the ceiling {MAX_FIELD_SIZE}")
    modulus = _irreducible(p, n) if n > 1 else (0, 1)
    digits = [[(c // p**i) % p for i in range(n)] for c in range(q)]

    def encode(v: Sequence[int]) -> int:
        return sum((d % p) * p**i for i, d in enumerate(v))

    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = encode([x + y for x, y in zip(digits[a], digits[b])])
            prod = [0] * (2 * n - 1)
            for i, x in enumerate(digits[a]):
                for j, y in enumerate(digits[b]):
                    prod[i + j] += x * y
            for d in range(2 * n - 2, n - 1, -1):
                c = prod[d]
                if c:
                    for i in range(n):
                        prod[d - n + i] -= c * modulus[i]
                    prod[d] = 0
            mul[a, b] = encode(prod[:n])
    neg = np.array([encode([-x for x in digits[a]]) for a in range(q)], dtype=np.int64)
    return FiniteField(p, n, modulus, add, mul, neg)


def projective_line(field: FiniteField) -> list[tuple[int, int]]:
    """Representatives [a:1] for a in F_q and [1:0]."""
    return [(a, 1) for a in range(field.q)] + [(1, 0)]


# ---------------------------------------------------------------------------
# the (2,2,2)-form


def form_coefficients(family: FamilyId | str, k: int) -> dict[frozenset[int], int]:
    """Coefficient of each monomial, keyed by the set of coordinates carrying x_i0^2."""
    a, b, d = Surface(FamilyId.parse(family), k).coefficients
    by_size = {3: a, 2: b, 1: d, 0: -k}
    return {frozenset(s): by_size[len(s)] for r in range(4) for s in itertools.combinations(range(3), r)}


def _evaluate_grid(field: FiniteField, coeffs: dict[frozenset[int], int], fibre: int) -> list[np.ndarray]:
    """For each fibre point, the form on the grid of the other two P^1 factors."""
    line = projective_line(field)
    sq0 = np.array([field.mul[u, u] for u, _ in line])
    sq1 = np.array([field.mul[v, v] for _, v in line])
    others = [i for i in range(3) if i != fibre]
    m, add = field.mul, field.add
    coeff = {s: field.element(c) for s, c in coeffs.items()}
    grids = []
    for fx in range(len(line)):
        size = len(line)
        # sub-coefficient of the (others)-monomial indexed by which of the two carry index 0
        sub = {}
        for t in itertools.chain.from_iterable(itertools.combinations(others, r) for r in range(3)):
            t = frozenset(t)
            with_f = m[coeff[t | {fibre}], sq0[fx]]
            without = m[coeff[t], sq1[fx]]
            sub[t] = add[with_f, without]
        u, v = others
        yy0, yy1 = sq0[:, None].repeat(size, 1), sq1[:, None].repeat(size, 1)
        zz0, zz1 = sq0[None, :].repeat(size, 0), sq1[None, :].repeat(size, 0)
        total = np.zeros((size, size), dtype=np.int64)
        for t, c in sub.items():
            term = np.full((size, size), c, dtype=np.int64)
            term = m[term, yy0 if u in t else yy1]
            term = m[term, zz0 if v in t else zz1]
            total = add[total, term]
        grids.append(total)
    return grids


def _half_coefficients(field: FiniteField, coeffs: dict[frozenset[int], int], point: Sequence[tuple[int, int]], i: int) -> tuple[int, int]:
    """(alpha, beta) with form = alpha * x_i0^2 + beta * x_i1^2 at the other coordinates of point."""
    m, add = field.mul, field.add
    alpha = beta = 0
    for s, c in coeffs.items():
        term = field.element(c)
        for j in range(3):
            if j == i:
                continue
            u, v = point[j]
            term = m[term, m[u, u] if j in s else m[v, v]]
        if i in s:
            alpha = add[alpha, term]
        else:
            beta = add[beta, term]
    return int(alpha), int(beta)


def singular_points(field: FiniteField, coeffs: dict[frozenset[int], int], points: Sequence[Sequence[tuple[int, int]]]) -> list[tuple[tuple[int, int], ...]]:
    """Points among ``points`` where every partial derivative vanishes."""
    out = []
    m = field.mul
    for pt in points:
        sing = True
        for i in range(3):
            alpha, beta = _half_coefficients(field, coeffs, pt, i)
            u, v = pt[i]
            if m[u, alpha] or m[v, beta]:
                sing = False
                break
        if sing:
            out.append(tuple(pt))
    return out


def count_points(kmod: int, p: int, n: int, family: FamilyId | str = FamilyId.F3, fibre: int = 0) -> int:
    """Number of F_{p^n}-points of the projective surface, by direct enumeration
    of (P^1)^3 fibre by fibre over the chosen projection."""
    if p == 2:
        raise ValueError("characteristic 2 is not supported")
    field = finite_field(p, n)
    coeffs = form_coefficients(family, kmod % p)
    line = projective_line(field)
    others = [i for i in range(3) if i != fibre]
    total = 0
    for fx, grid in enumerate(_evaluate_grid(field, coeffs, fibre)):
        ys, zs = np.nonzero(grid == 0)
        total += len(ys)
        pts = []
        for a, b in zip(ys, zs):
            pt: list[tuple[int, int]] = [(0, 0)] * 3
            pt[fibre], pt[others[0]], pt[others[1]] = line[fx], line[a], line[b]
            pts.append(pt)
        bad = singular_points(field, coeffs, pts)
        if bad:
            raise SingularReductionError(f"singular point {bad[0]} over F_{field.q}")
    return total


def count_points_by_fibre_formula(kmod: int, p: int, n: int, family: FamilyId | str = FamilyId.F3) -> int:
    """Independent count: for each (x, y) the form is A z0^2 + B z1^2, whose number of
    zeros on P^1 is q + 1, 1, or 1 + chi(-AB) according to how many of A, B vanish."""
    field = finite_field(p, n)
    coeffs = form_coefficients(family, kmod % p)
    squares = field.squares()
    line = projective_line(field)
    total = 0
    for x, y in itertools.product(line, repeat=2):
        a, b = _half_coefficients(field, coeffs, (x, y, (1, 1)), 2)
        if a == 0 and b == 0:
            total += field.q + 1
        elif a == 0 or b == 0:
            total += 1
        else:
            total += 2 if squares[field.neg[field.mul[a, b]]] else 0
    return total


@dataclass(frozen=True)
class CountTable:
    p: int
    kmod: int
    counts: tuple[tuple[int, int], ...]  # (n, count)

    def __post_init__(self) -> None:
        d = dict(self.counts)
        for n, c in self.counts:
            if c < 0:
                raise ValueError("counts must be nonnegative")
            for m, cm in self.counts:
                if n % m == 0 and c < cm:
                    raise ValueError("subfield points must inject")
        if len(d) != len(self.counts):
            raise ValueError("duplicate exponent")

    def count(self, n: int) -> int:
        return dict(self.counts)[n]


def count_table(kmod: int, p: int, max_n: int, family: FamilyId | str = FamilyId.F3) -> CountTable:
    return CountTable(p, kmod % p, tuple((n, count_points(kmod, p, n, family)) for n in range(1, max_n + 1)))


# ---------------------------------------------------------------------------
# traces and the characteristic polynomial


def fixed_trace(n: int) -> int:
    """Trace of the n-th power on the part with eigenvalues +1 (x11) and -1 (x7)."""
    return FIXED_EXPONENTS[0] + FIXED_EXPONENTS[1] * (-1) ** n


def quotient_traces(table: CountTable) -> list[Fraction]:
    """count/q - q - 1/q - t_n with q = p^n: the traces on the remaining rank-4 piece."""
    out = []
    for n, c in sorted(table.counts):
        q = Fraction(table.p) ** n
        out.append(Fraction(c) / q - q - 1 / q - fixed_trace(n))
    return out


@dataclass(frozen=True)
class CharPoly:
    """Quotient factor f, monic, coefficients from t^4 down to t^0, and the
    fixed exponents of t - 1 and t + 1 in the full polynomial."""

    coefficients: tuple[Fraction, ...]
    exponents: tuple[int, int] = FIXED_EXPONENTS

    def __post_init__(self) -> None:
        c = self.coefficients
        if c[0] != 1 or c[-1] != 1:
            raise ValueError("quotient factor must be monic with constant term 1")
        if tuple(reversed(c)) != c:
            raise ValueError("quotient factor must be palindromic")

    def quotient(self, t: sympy.Symbol | None = None) -> sympy.Poly:
        t = t or sympy.Symbol("t")
        return sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in self.coefficients], t, domain="QQ")

    def full(self, t: sympy.Symbol | None = None) -> sympy.Poly:
        t = t or sympy.Symbol("t")
        one, minus = self.exponents
        return sympy.Poly((t - 1) ** one * (t + 1) ** minus, t, domain="QQ") * self.quotient(t)

    def power_sums(self, count: int) -> list[Fraction]:
        """Traces of the n-th powers of the roots of f for n = 1..count (Newton identities)."""
        deg = len(self.coefficients) - 1
        e = [Fraction(1)] + [Fraction((-1) ** i) * self.coefficients[i] for i in range(1, deg + 1)]
        out: list[Fraction] = []
        for n in range(1, count + 1):
            s = Fraction((-1) ** (n - 1) * n) * e[n] if n <= deg else Fraction(0)
            for i in range(1, n):
                if i <= deg:
                    s += (-1) ** (i - 1) * e[i] * out[n - i - 1]
            out.append(s)
        return out

    def __str__(self) -> str:
        return str(self.quotient().as_expr())


def newton_charpoly(traces: Sequence[Fraction]) -> CharPoly:
    """Degree-4 factor from its first power sums, assuming sign +1 in t^4 f(1/t) = +-f(t).

    A sign of -1 forces the middle coefficient to vanish, so a nonzero e2 fixes
    the sign at +1, giving e4 = 1 and e3 = e1.
    """
    if len(traces) < 2:
        raise ValueError("need at least two traces")
    p1, p2 = Fraction(traces[0]), Fraction(traces[1])
    e1 = p1
    e2 = (e1 * p1 - p2) / 2
    if e2 == 0:
        raise SignUndeterminedError("sign undetermined: middle coefficient is zero")
    f = CharPoly((Fraction(1), -e1, e2, -e1, Fraction(1)))
    if len(traces) >= 3:
        got = f.power_sums(len(traces))
        for n, (a, b) in enumerate(zip(got, traces), start=1):
            if a != Fraction(b):
                raise TraceInconsistencyError(f"trace {n} is {b} but the polynomial predicts {a}")
    return f


def count_unity_eigenvalues(poly: sympy.Poly) -> int:
    """Roots of unity among the roots, with multiplicity, via division by cyclotomic polynomials."""
    t = poly.gen
    deg = poly.degree()
    total = 0
    for m in range(1, 2 * deg * deg + 3):  # phi(m) >= sqrt(m / 2)
        if sympy.totient(m) > deg:
            continue
        phi = sympy.Poly(sympy.cyclotomic_poly(m, t), t, domain="QQ")
        rest = poly
        while True:
            q, r = sympy.div(rest, phi)
            if not r.is_zero:
                break
            total += phi.degree()
            rest = q
    return total


def lefschetz_count(f: CharPoly, p: int, n: int) -> Fraction:
    """1 + q^2 + q * (trace of the n-th power on H^2, normalized) with q = p^n."""
    q = Fraction(p) ** n
    return 1 + q * q + q * (fixed_trace(n) + f.power_sums(n)[-1])


def quotient_is_irreducible(f: CharPoly) -> bool:
    return bool(f.quotient().is_irreducible)


@dataclass(frozen=True)
class FrobeniusReport:
    table: CountTable
    traces: tuple[Fraction, ...]
    charpoly: CharPoly
    unity_eigenvalues: int
    quotient_unity_eigenvalues: int
    quotient_irreducible: bool


def frobenius_report(p: int = 5, kmod: int = 3, max_n: int = 3) -> FrobeniusReport:
    table = count_table(kmod, p, max_n)
    traces = quotient_traces(table)
    f = newton_charpoly(traces)
    return FrobeniusReport(
        table,
        tuple(traces),
        f,
        count_unity_eigenvalues(f.full()),
        count_unity_eigenvalues(f.quotient()),
        quotient_is_irreducible(f),
    )


def picard_rank_pinned(lattice_rank: int, report: FrobeniusReport) -> bool:
    """Lower bound from the explicit lattice meets the upper bound from Frobenius."""
    return lattice_rank == report.unity_eigenvalues
