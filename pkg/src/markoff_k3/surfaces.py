"""The three Markoff-type K3 families, their symmetry group and point searches.

All three families have the shape

    a x^2 y^2 z^2 + b (x^2 y^2 + y^2 z^2 + z^2 x^2) + c xyz + d (x^2 + y^2 + z^2) + e

with c = 0, so every polynomial here depends on the coordinates only through
their squares. That is what makes the z-solve in the searches a square test.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

Number = int | Fraction
X, Y, Z, K = sympy.symbols("x y z k")


class FamilyId(str, enum.Enum):
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"

    @classmethod
    def parse(cls, name: str | "FamilyId") -> "FamilyId":
        if isinstance(name, FamilyId):
            return name
        return cls(name.lower())


# (a, b, d): coefficients of x^2y^2z^2, of the sum of x^2y^2, of x^2+y^2+z^2
_COEFFS: dict[FamilyId, tuple[int, int, int]] = {
    FamilyId.F1: (-4, 0, 1),
    FamilyId.F2: (16, -4, 1),
    FamilyId.F3: (-16, 4, 1),
}


@dataclass(frozen=True)
class GeneralForm:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction


def nondegeneracy_check(g: GeneralForm) -> bool:
    """c != 0, be != d^2 and ad != b^2."""
    return g.c != 0 and g.b * g.e != g.d**2 and g.a * g.d != g.b**2


@dataclass(frozen=True)
class AffinePoint:
    x: Fraction
    y: Fraction
    z: Fraction

    @classmethod
    def of(cls, x: Number, y: Number, z: Number) -> "AffinePoint":
        return cls(Fraction(x), Fraction(y), Fraction(z))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.as_tuple()) + ")"


@dataclass(frozen=True)
class Surface:
    family: FamilyId
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", FamilyId.parse(self.family))

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return _COEFFS[self.family]

    @property
    def general_form(self) -> GeneralForm:
        a, b, d = self.coefficients
        return GeneralForm(Fraction(a), Fraction(b), Fraction(0), Fraction(d), Fraction(-self.k))

    @property
    def smoothness_indicator(self) -> int | None:
        """k(4k+1)((4k-5)^2-32) for F3; the compactification is smooth iff nonzero."""
        if self.family is not FamilyId.F3:
            return None
        k = self.k
        return k * (4 * k + 1) * ((4 * k - 5) ** 2 - 32)

    def value(self, p: Sequence[Number]) -> Number:
        """Family polynomial at a point; works for ints and Fractions alike."""
        a, b, d = self.coefficients
        x2, y2, z2 = p[0] * p[0], p[1] * p[1], p[2] * p[2]
        return a * x2 * y2 * z2 + b * (x2 * y2 + y2 * z2 + z2 * x2) + d * (x2 + y2 + z2) - self.k

    def gradient(self, p: Sequence[Number]) -> tuple[Number, Number, Number]:
        a, b, d = self.coefficients
        x, y, z = p
        x2, y2, z2 = x * x, y * y, z * z
        return (
            2 * x * (a * y2 * z2 + b * (y2 + z2) + d),
            2 * y * (a * x2 * z2 + b * (x2 + z2) + d),
            2 * z * (a * x2 * y2 + b * (x2 + y2) + d),
        )

    def z_coefficients(self, x: Number, y: Number) -> tuple[Number, Number]:
        """(A, B) with F = A z^2 + B."""
        a, b, d = self.coefficients
        x2, y2 = x * x, y * y
        return a * x2 * y2 + b * (x2 + y2) + d, b * x2 * y2 + d * (x2 + y2) - self.k

    def contains(self, p: AffinePoint) -> bool:
        return self.value(p.as_tuple()) == 0


def evaluate(s: Surface, p: AffinePoint) -> Fraction:
    return Fraction(s.value(p.as_tuple()))


def gradient(s: Surface, p: AffinePoint) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(Fraction(c) for c in s.gradient(p.as_tuple()))  # type: ignore[return-value]


def polynomial(family: FamilyId | str) -> sympy.Expr:
    """The family polynomial as a sympy expression in x, y, z, k."""
    a, b, d = _COEFFS[FamilyId.parse(family)]
    x2, y2, z2 = X**2, Y**2, Z**2
    return a * x2 * y2 * z2 + b * (x2 * y2 + y2 * z2 + z2 * x2) + d * (x2 + y2 + z2) - K


def reduce_modulo_family(family: FamilyId | str, expr: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    """(quotient, remainder) of ``expr`` divided by the family polynomial."""
    (q,), r = sympy.reduced(sympy.expand(expr), [polynomial(family)], Z, Y, X, K)
    return q, r


# ---------------------------------------------------------------------------
# factorization identities (keyed by their left-hand sides)


@dataclass(frozen=True)
class Identity:
    key: str
    family: FamilyId
    lhs: str
    rhs: str


IDENTITIES: dict[str, Identity] = {
    i.key: i
    for i in (
        Identity(
            "(4x^2y^2-1)(4y^2z^2-1)",
            FamilyId.F1,
            "(4*x**2*y**2 - 1)*(4*y**2*z**2 - 1)",
            "(2*y**2 + 1)**2 - 4*(k + 1)*y**2",
        ),
        Identity(
            "(4x^2-1)(4y^2-1)(4z^2-1)",
            FamilyId.F2,
            "(4*x**2 - 1)*(4*y**2 - 1)*(4*z**2 - 1)",
            "4*k - 1",
        ),
        Identity(
            "(4x^2+1)(4y^2+1)(4z^2+1)",
            FamilyId.F3,
            "(4*x**2 + 1)*(4*y**2 + 1)*(4*z**2 + 1)",
            "(4*k + 1) + 128*x**2*y**2*z**2",
        ),
        Identity(
            "(4x^2+1)(1+4y^2+4z^2-16y^2z^2)",
            FamilyId.F3,
            "(4*x**2 + 1)*(1 + 4*y**2 + 4*z**2 - 16*y**2*z**2)",
            "(4*k + 1) - 32*y**2*z**2",
        ),
        Identity(
            "(16x^2y^2-4x^2-4y^2-1)(16x^2z^2-4x^2-4z^2-1)",
            FamilyId.F3,
            "(16*x**2*y**2 - 4*x**2 - 4*y**2 - 1)*(16*x**2*z**2 - 4*x**2 - 4*z**2 - 1)",
            "2*((4*x**2 - (4*k - 1)/4)**2 - ((4*k - 5)**2 - 32)/16)",
        ),
    )
}


@dataclass(frozen=True)
class IdentityCertificate:
    key: str
    mode: str  # "symbolic" or "numeric"
    lhs: str
    rhs: str
    holds: bool
    quotient: str | None = None


class IdentityNotApplicable(ValueError):
    pass


def factored_identity(s: Surface | FamilyId, key: str, point: AffinePoint | None = None) -> IdentityCertificate:
    """Check an identity symbolically (modulo the family polynomial) or at a point."""
    ident = IDENTITIES.get(key)
    family = s.family if isinstance(s, Surface) else FamilyId.parse(s)
    if ident is None or ident.family is not family:
        raise IdentityNotApplicable(f"identity {key!r} does not apply to {family.value}")
    lhs = sympy.sympify(ident.lhs, locals={"x": X, "y": Y, "z": Z, "k": K})
    rhs = sympy.sympify(ident.rhs, locals={"x": X, "y": Y, "z": Z, "k": K})
    if point is None:
        q, r = reduce_modulo_family(family, lhs - rhs)
        return IdentityCertificate(key, "symbolic", str(lhs), str(rhs), r == 0, str(sympy.factor(q)))
    if not isinstance(s, Surface):
        raise ValueError("numeric certificates need a surface")
    if not s.contains(point):
        raise ValueError(f"point {point} is not on the surface")
    subs = {X: point.x, Y: point.y, Z: point.z, K: s.k}
    lv, rv = sympy.Rational(lhs.subs(subs)), sympy.Rational(rhs.subs(subs))
    return IdentityCertificate(key, "numeric", str(lv), str(rv), lv == rv)


# ---------------------------------------------------------------------------
# the symmetry group: permutations with an even number of sign changes

_EVEN_SIGNS = ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1))


@lru_cache(maxsize=None)
def group_elements() -> tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...]:
    """The 24 elements as (permutation, signs): g(P)_i = signs_i * P[perm_i]."""
    return tuple((perm, sg) for perm in itertools.permutations(range(3)) for sg in _EVEN_SIGNS)


def act(g: tuple[Sequence[int], Sequence[int]], p: Sequence[Number]) -> tuple:
    perm, sg = g
    return tuple(sg[i] * p[perm[i]] for i in range(3))


def orbit(p: Sequence[Number]) -> set[tuple]:
    return {act(g, p) for g in group_elements()}


def canonical(p: Sequence[Number]) -> tuple:
    """Lexicographically least element of the orbit."""
    return min(orbit(p))


def canonical_mod(p: Sequence[int], modulus: int) -> tuple[int, int, int]:
    return min(tuple(c % modulus for c in q) for q in orbit(p))  # type: ignore[return-value]


def orbit_representatives(points: Iterable[Sequence[Number]]) -> list[tuple[tuple, int]]:
    """(canonical representative, orbit size) for each orbit met, sorted."""
    reps = {canonical(tuple(p)) for p in points}
    return sorted((r, len(orbit(r))) for r in reps)


def _all_sign_perm_images(p: Sequence[Number]) -> set[tuple]:
    out = set()
    for perm in itertools.permutations(p):
        for sg in itertools.product((1, -1), repeat=3):
            out.add(tuple(s * c for s, c in zip(sg, perm)))
    return out


def integral_point_search(s: Surface, bound: int) -> list[AffinePoint]:
    """All integral points with every coordinate of absolute value at most ``bound``.

    The equation only sees squares, so it is solved for z^2 over 0 <= x <= y and
    the full sign/permutation closure is taken. The list is "empty up to the
    bound" when empty; it never proves emptiness.
    """
    found: set[tuple[int, int, int]] = set()
    a, b, d = s.coefficients
    ys = np.arange(0, bound + 1, dtype=object)
    for x in range(bound + 1):
        y = ys[x:]
        x2, y2 = x * x, y * y
        coef = a * x2 * y2 + b * (x2 + y2) + d
        const = b * x2 * y2 + d * (x2 + y2) - s.k
        for yy, cz, cc in zip(y, coef, const):
            if cz == 0:
                if cc == 0:
                    for zz in range(bound + 1):
                        found.update(_all_sign_perm_images((x, int(yy), zz)))
                continue
            num = -cc
            if num % cz:
                continue
            z2 = num // cz
            if z2 < 0:
                continue
            zz = math.isqrt(z2)
            if zz * zz == z2 and zz <= bound:
                found.update(_all_sign_perm_images((x, int(yy), zz)))
    return [AffinePoint.of(*p) for p in sorted(found) if max(map(abs, p)) <= bound]


def _rationals_of_height(h: int) -> list[Fraction]:
    out = {Fraction(0)}
    for den in range(1, h + 1):
        for num in range(0, h + 1):
            if math.gcd(num, den) == 1:
                out.add(Fraction(num, den))
    return sorted(out)


def rational_point_search(s: Surface, height: int) -> list[tuple[tuple, int]]:
    """Non-integral rational points with x, y of height at most ``height``.

    Height is the max of |numerator| and denominator in lowest terms. For each
    (x, y) the equation is solved for z exactly. Returns one representative per
    orbit of the 24-element group with its orbit size.
    """
    a, b, d = s.coefficients
    vals = _rationals_of_height(height)
    nums = np.array([q.numerator for q in vals], dtype=np.float64)
    dens = np.array([q.denominator for q in vals], dtype=np.float64)
    found: set[tuple] = set()
    for i, xq in enumerate(vals):
        # scaled by (den_x den_y)^2:  A' z^2 + B' = 0
        n1, d1 = float(xq.numerator), float(xq.denominator)
        n2, d2 = nums[i:], dens[i:]
        X2, Dx2 = n1 * n1, d1 * d1
        Y2, Dy2 = n2 * n2, d2 * d2
        coef = d * Dx2 * Dy2 + b * (X2 * Dy2 + Y2 * Dx2) + a * X2 * Y2
        const = d * (X2 * Dy2 + Y2 * Dx2) + b * X2 * Y2 - s.k * Dx2 * Dy2
        disc = -coef * const
        with np.errstate(invalid="ignore"):
            root = np.rint(np.sqrt(np.where(disc >= 0, disc, 0.0)))
        close = (disc >= 0) & (coef != 0) & (np.abs(root * root - disc) <= 4e-13 * np.maximum(disc, 1.0) + 0.5)
        for j in np.nonzero(close)[0]:
            yq = vals[i + j]
            cz, cc = s.z_coefficients(xq, yq)
            if cz == 0:
                continue
            z2 = -Fraction(cc) / Fraction(cz)
            if z2 < 0:
                continue
            rn, rd = math.isqrt(z2.numerator), math.isqrt(z2.denominator)
            if rn * rn != z2.numerator or rd * rd != z2.denominator:
                continue
            zq = Fraction(rn, rd)
            if xq.denominator == 1 and yq.denominator == 1 and zq.denominator == 1:
                continue
            for p in _all_sign_perm_images((xq, yq, zq)):
                found.add(p)
    return orbit_representatives(found)
