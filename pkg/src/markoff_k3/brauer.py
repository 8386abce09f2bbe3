"""Quaternion classes on the families, local invariants and Brauer-Manin verdicts.

A class is (f, b) with f a polynomial in x, y, z and b a constant depending on
k. Its local invariant at a point is the Hilbert symbol (f(P), b)_v. Each class
carries several first-slot polynomials that agree as Brauer classes on the
surface; the certificate for that is a norm identity
``f_0 * f_j = u^2 - b v^2`` modulo the family polynomial.

Invariant sets at a prime are computed by refining residue cells: a cell is a
residue class mod p^m on which F vanishes mod p^m. It is resolved once it is
Newton-certified (so it contains honest p-adic points) and some representation
has a determinable square class at precision m, which then holds on every
p-adic point of the cell. Unresolved cells are split mod p^(m+1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import sympy

from .hilbert import HALF, REAL, ZERO, Place, PrecisionError, add_invariants, hilbert_symbol, hilbert_symbol_padic
from .local_points import everywhere_locally_solvable, LocalSolvabilityReport
from .padic_core import (
    PadicApprox,
    hensel_lift,
    is_padic_square,
    legendre,
    newton_certificate,
    prime_factors,
    primes_up_to,
    valuation,
)
from .surfaces import (
    AffinePoint,
    FamilyId,
    K,
    Surface,
    X,
    Y,
    Z,
    factored_identity,
    integral_point_search,
    reduce_modulo_family,
)

Vector = tuple[Fraction, ...]

# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class Representation:
    """First slot ``first`` (python syntax in x, y, z) with second slot ``second`` (in k).

    ``norm`` = (u, v) certifies equivalence with the class's first
    representation: first_0 * first = u^2 - second * v^2 on the surface.
    ``identity`` names the surfaces-module identity behind the certificate.
    """

    first: str
    second: str
    domain: str
    norm: tuple[str, str] | None = None
    identity: str | None = None

    @cached_property
    def first_fn(self) -> Callable[..., int]:
        return eval("lambda x, y, z: " + self.first)  # noqa: S307 - fixed internal strings

    @cached_property
    def second_fn(self) -> Callable[[int], int]:
        return eval("lambda k: " + self.second)  # noqa: S307

    @cached_property
    def first_in_squares(self) -> Callable[..., Fraction]:
        """First slot as a function of (x, y, z^2); valid because z only appears squared."""
        body = self.first.replace("z**2", "z2")
        if "z" in body.replace("z2", ""):
            raise ValueError(f"first slot {self.first!r} is not a polynomial in z^2")
        return eval("lambda x, y, z2: " + body)  # noqa: S307

    def first_expr(self) -> sympy.Expr:
        return sympy.sympify(self.first, locals={"x": X, "y": Y, "z": Z})

    def second_expr(self) -> sympy.Expr:
        return sympy.sympify(self.second, locals={"k": K})


@dataclass(frozen=True)
class QuaternionClass:
    family: FamilyId
    label: str
    representations: tuple[Representation, ...]
    real_certificate: str | None = None  # name of a positivity certificate for the first slot

    def second_slot(self, k: int) -> Fraction:
        return Fraction(self.representations[0].second_fn(k))


def _rep(first: str, second: str, domain: str, norm=None, identity=None) -> Representation:
    return Representation(first, second, domain, norm, identity)


def f1_class() -> QuaternionClass:
    b = "k + 1"
    return QuaternionClass(
        FamilyId.F1,
        "A",
        (
            _rep("4*x**2*y**2 - 1", b, "4x^2y^2 - 1 nonzero"),
            _rep("4*y**2*z**2 - 1", b, "4y^2z^2 - 1 nonzero", ("2*y**2 + 1", "2*y"), "(4x^2y^2-1)(4y^2z^2-1)"),
            _rep("4*z**2*x**2 - 1", b, "4z^2x^2 - 1 nonzero", ("2*x**2 + 1", "2*x"), "(4x^2y^2-1)(4y^2z^2-1)"),
        ),
        real_certificate="f1-fibre",
    )


_F2_COORDS = ("x", "y", "z")


def f2_class(i: int) -> QuaternionClass:
    """(4c^2 - 1, k) for the i-th coordinate c (i = 1, 2, 3)."""
    c = _F2_COORDS[i - 1]
    o1, o2 = (v for v in _F2_COORDS if v != c)
    return QuaternionClass(
        FamilyId.F2,
        f"A{i}",
        (
            _rep(f"4*{c}**2 - 1", "k", f"4{c}^2 - 1 nonzero"),
            _rep(
                f"-(4*{o1}**2 - 1)*(4*{o2}**2 - 1)", "k", f"(4{o1}^2 - 1)(4{o2}^2 - 1) nonzero",
                ("1", "2"), "(4x^2-1)(4y^2-1)(4z^2-1)",
            ),
        ),
    )


def f3_class(i: int, sign: int = -1) -> QuaternionClass:
    """(4c^2 + 1, sign * 2(4k+1)) for the i-th coordinate c."""
    c = _F2_COORDS[i - 1]
    o1, o2 = (v for v in _F2_COORDS if v != c)
    if sign == -1:
        b = "-2*(4*k + 1)"
        alt = _rep(
            f"2*(4*{o1}**2 + 1)*(4*{o2}**2 + 1)", b, "always a unit away from 2 when 4c^2+1 vanishes",
            ("16*x*y*z", "1"), "(4x^2+1)(4y^2+1)(4z^2+1)",
        )
        label = f"A{i}"
    elif sign == 1:
        b = "2*(4*k + 1)"
        alt = _rep(
            f"-2*(1 + 4*{o1}**2 + 4*{o2}**2 - 16*{o1}**2*{o2}**2)", b, "second factor nonzero",
            (f"8*{o1}*{o2}", "1"), "(4x^2+1)(1+4y^2+4z^2-16y^2z^2)",
        )
        label = f"A{i}+"
    else:
        raise ValueError("sign must be +1 or -1")
    return QuaternionClass(
        FamilyId.F3, label, (_rep(f"4*{c}**2 + 1", b, f"4{c}^2 + 1 nonzero"), alt), real_certificate="sum-of-squares"
    )


def f3_class_b() -> QuaternionClass:
    b = "(4*k - 5)**2 - 32"
    return QuaternionClass(
        FamilyId.F3,
        "B",
        (
            _rep("16*x**2*y**2 - 4*x**2 - 4*y**2 - 1", b, "first slot nonzero"),
            _rep(
                "2*(16*x**2*z**2 - 4*x**2 - 4*z**2 - 1)", b, "first slot nonzero",
                ("8*x**2 - (4*k - 1)/2", "1/2"), "(16x^2y^2-4x^2-4y^2-1)(16x^2z^2-4x^2-4z^2-1)",
            ),
        ),
    )


def default_classes(family: FamilyId | str, variant: str | None = None) -> list[QuaternionClass]:
    """The classes used by the obstruction argument of each family."""
    family = FamilyId.parse(family)
    if family is FamilyId.F1:
        return [f1_class()]
    if family is FamilyId.F2:
        return [f2_class(1), f2_class(2)]
    if variant in ("f3-pronic-5mod8", "f3-pronic-3mod8"):
        return [f3_class(1, +1), f3_class(2, +1)]
    return [f3_class(1), f3_class(2)]


@dataclass(frozen=True)
class RepresentationCertificate:
    label: str
    index: int
    identity: str | None
    norm_identity_holds: bool
    identity_holds: bool | None


def certify_representations(cls: QuaternionClass) -> list[RepresentationCertificate]:
    """Symbolically check first_0 * first_j - (u^2 - b v^2) vanishes on the surface."""
    out = []
    r0 = cls.representations[0]
    for j, rep in enumerate(cls.representations[1:], start=1):
        assert rep.norm is not None
        u, v = (sympy.sympify(t, locals={"x": X, "y": Y, "z": Z, "k": K}) for t in rep.norm)
        expr = r0.first_expr() * rep.first_expr() - (u**2 - rep.second_expr() * v**2)
        _, rem = reduce_modulo_family(cls.family, expr)
        ident = factored_identity(cls.family, rep.identity).holds if rep.identity else None
        out.append(RepresentationCertificate(cls.label, j, rep.identity, rem == 0, ident))
    return out


# ---------------------------------------------------------------------------
# local invariants


def _as_fraction_point(point: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    if isinstance(point, AffinePoint):
        return point.as_tuple()
    return tuple(Fraction(c) for c in point)  # type: ignore[return-value]


def exact_invariant(cls: QuaternionClass, s: Surface, point: Sequence, place: Place) -> Fraction:
    """Invariant at an exact rational point of the surface (any place)."""
    pt = _as_fraction_point(point)
    if s.value(pt) != 0:
        raise ValueError("point is not on the surface")
    for rep in cls.representations:
        a = Fraction(rep.first_fn(*pt))
        if a != 0:
            return hilbert_symbol(a, rep.second_fn(s.k), place)
    raise ValueError("every representation vanishes at this point")


def residue_invariant(cls: QuaternionClass, s: Surface, point: Sequence[int], p: int, precision: int) -> Fraction:
    """Invariant at every p-adic point congruent to ``point`` mod p^precision."""
    need = 3 if p == 2 else 1
    best_extra = None
    for rep in cls.representations:
        a = PadicApprox.from_residue(rep.first_fn(*point), p, precision)
        if a.precision >= need:
            return hilbert_symbol_padic(a, rep.second_fn(s.k), p)
        extra = need - a.precision
        best_extra = extra if best_extra is None else min(best_extra, extra)
    raise PrecisionError(f"no representation of {cls.label} determinable mod {p}^{precision}", best_extra or 1)


def local_invariant(
    cls: QuaternionClass, s: Surface, point: Sequence, place: Place, precision: int | None = None
) -> Fraction:
    """Local invariant at a point: exact rationals when ``precision`` is None,
    otherwise integer residues modulo place**precision."""
    if precision is None or place == REAL:
        return exact_invariant(cls, s, point, place)
    return residue_invariant(cls, s, [int(c) for c in point], place, precision)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# invariant sets at a prime


@dataclass(frozen=True)
class InvariantScan:
    prime: int
    depth: int
    labels: tuple[str, ...]
    values: frozenset[Vector]
    complete: bool
    uncovered: int
    resolved: int
    examples: tuple[tuple[Vector, tuple[int, int, int], int], ...]

    def example(self, vector: Vector) -> tuple[tuple[int, int, int], int]:
        for v, pt, m in self.examples:
            if v == vector:
                return pt, m
        raise KeyError(vector)


def _root_cells(s: Surface, p: int) -> list[tuple[int, int, int]]:
    cells = []
    squares: dict[int, list[int]] = {}
    for z in range(p):
        squares.setdefault(z * z % p, []).append(z)
    for x in range(p):
        for y in range(p):
            cz, cc = s.z_coefficients(x, y)
            cz %= p
            if cz:
                zs = squares.get(-cc * pow(cz, -1, p) % p, [])
            else:
                zs = range(p) if cc % p == 0 else []
            cells.extend((x, y, z) for z in zs)
    return cells


def scan_invariants(classes: Sequence[QuaternionClass], s: Surface, p: int, depth: int) -> InvariantScan:
    """Joint invariant vectors over all p-adic integral points, by cell refinement."""
    value, grad = s.value, s.gradient
    values: dict[Vector, tuple[tuple[int, int, int], int]] = {}
    uncovered = 0
    resolved = 0
    frontier = [(c, 1) for c in _root_cells(s, p)]
    while frontier:
        nxt = []
        for pt, m in frontier:
            w = newton_certificate(value, grad, pt, p, m)
            if w is not None and w.liftable:
                try:
                    vec = tuple(residue_invariant(c, s, pt, p, m) for c in classes)
                except PrecisionError:
                    vec = None
                if vec is not None:
                    resolved += 1
                    values.setdefault(vec, (pt, m))
                    continue
            if m >= depth:
                uncovered += 1
                continue
            step = p**m
            mod = step * p
            for d in itertools.product(range(p), repeat=3):
                child = tuple(c + step * e for c, e in zip(pt, d))
                if value(child) % mod == 0:
                    nxt.append((child, m + 1))
        frontier = nxt
    examples = tuple(sorted((v, pt, m) for v, (pt, m) in values.items()))
    return InvariantScan(
        p, depth, tuple(c.label for c in classes), frozenset(values), uncovered == 0, uncovered, resolved, examples
    )


def invariant_set(cls: QuaternionClass, s: Surface, p: int, depth: int) -> set[Fraction]:
    """Invariants attained on certified cells mod p^depth (single class)."""
    return {v[0] for v in scan_invariants([cls], s, p, depth).values}


# ---------------------------------------------------------------------------
# real place


def real_invariants(classes: Sequence[QuaternionClass], s: Surface) -> tuple[frozenset[Vector] | None, str]:
    """Attained invariant vectors at the real place, when a certificate applies."""
    vec = []
    notes = []
    for c in classes:
        b = c.second_slot(s.k)
        if b > 0:
            vec.append(ZERO)
            notes.append(f"{c.label}: second slot {b} > 0")
        elif c.real_certificate == "sum-of-squares":
            vec.append(ZERO)
            notes.append(f"{c.label}: first slot is 4c^2 + 1 > 0")
        elif c.real_certificate == "f1-fibre" and s.k < 0:
            vec.append(ZERO)
            notes.append(f"{c.label}: (4x^2y^2 - 1) z^2 = x^2 + y^2 - k > 0 forces a positive first slot")
        else:
            return None, f"{c.label}: no real positivity certificate"
    return frozenset({tuple(vec)}), "; ".join(notes)


# ---------------------------------------------------------------------------
# tail primes


def squarefree_part(q: Fraction) -> int:
    """Signed squarefree integer d with q = d * (rational square)."""
    q = Fraction(q)
    sign = -1 if q < 0 else 1
    d = sign
    for part in (abs(q.numerator), q.denominator):
        for p in prime_factors(part):
            if valuation(part, p) % 2:
                d *= p
    return d


@dataclass(frozen=True)
class TailCertificate:
    prime: int
    kind: str  # "square-second-slot", "unit-first-slot", "rescanned"
    witness_invariants_zero: bool | None


def _tail_unit_scan(classes: Sequence[QuaternionClass], s: Surface, p: int) -> bool:
    """True when every solution mod p has, for each class, a representation whose
    first slot is a p-adic unit there."""
    squares: dict[int, list[int]] = {}
    for z in range(p):
        squares.setdefault(z * z % p, []).append(z)
    fns = [[rep.first_fn for rep in c.representations] for c in classes]
    for x in range(p):
        for y in range(p):
            cz, cc = s.z_coefficients(x, y)
            cz %= p
            if cz:
                zs = squares.get(-cc * pow(cz, -1, p) % p, [])
            else:
                zs = range(p) if cc % p == 0 else []
            for z in zs:
                for reps in fns:
                    if all(f(x, y, z) % p == 0 for f in reps):
                        return False
    return True


def _witness_invariants(
    classes: Sequence[QuaternionClass], s: Surface, report: LocalSolvabilityReport, p: int
) -> Vector | None:
    w = report.witness(p)
    if w is None:
        return None
    for target in range(w.exponent + 2, w.exponent + 12):
        pt = hensel_lift(s.value, s.gradient, w, target)
        try:
            return tuple(residue_invariant(c, s, pt, p, target) for c in classes)
        except PrecisionError:
            continue
    return None


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class PlaceInvariants:
    place: Place
    values: tuple[Vector, ...]
    complete: bool
    method: str
    uncovered: int = 0


@dataclass(frozen=True)
class ObstructionReport:
    surface: Surface
    classes: tuple[str, ...]
    places: tuple[PlaceInvariants, ...]
    tail: tuple[TailCertificate, ...]
    tail_note: str
    verdict: str  # "obstructed", "not_obstructed_with_witness", "inconclusive"
    selection: tuple[tuple[Place, Vector], ...] | None
    notes: tuple[str, ...] = field(default=())
    locally_solvable: bool = True
    bound: int = 200
    depth: int = 5

    def place(self, v: Place) -> PlaceInvariants:
        for e in self.places:
            if e.place == v:
                return e
        raise KeyError(v)


def _vector_sum(vs: Iterable[Vector], n: int) -> Vector:
    out = [ZERO] * n
    for v in vs:
        out = [(a + b) % 1 for a, b in zip(out, v)]
    return tuple(out)


def zero_selection(places: Sequence[PlaceInvariants], n: int) -> tuple[tuple[Place, Vector], ...] | None:
    """One attained vector per place with total 0, or None."""
    reach: dict[Vector, tuple[tuple[Place, Vector], ...]] = {tuple([ZERO] * n): ()}
    for entry in places:
        new: dict[Vector, tuple[tuple[Place, Vector], ...]] = {}
        for total, sel in sorted(reach.items()):
            for v in sorted(entry.values):
                t = _vector_sum([total, v], n)
                new.setdefault(t, sel + ((entry.place, v),))
        reach = new
    return reach.get(tuple([ZERO] * n))


def critical_primes(classes: Sequence[QuaternionClass], s: Surface) -> list[int]:
    crit = {2, 3}
    for c in classes:
        crit.update(prime_factors(squarefree_part(c.second_slot(s.k))))
    return sorted(crit)


MAX_CRITICAL_PRIME = 400


def obstruction_verdict(
    s: Surface,
    classes: Sequence[QuaternionClass] | None = None,
    bound: int = 200,
    depth: int = 5,
    odd_depth: int | None = None,
    profile: str | None = None,
) -> ObstructionReport:
    """Brauer-Manin verdict for integral points with respect to ``classes``.

    Places: the real place and the critical primes get explicit invariant
    sets. Every other prime up to ``bound`` is certified to contribute 0 (second
    slot a local square, or a mod-p scan showing a unit first slot), and the
    local witness there is rechecked. Larger primes are covered by the same
    argument, cited in ``tail_note``.
    """
    classes = list(classes) if classes is not None else default_classes(s.family, profile)
    n = len(classes)
    odd_depth = odd_depth if odd_depth is not None else max(3, depth - 2)
    notes: list[str] = []
    local = everywhere_locally_solvable(s, bound, profile)
    places: list[PlaceInvariants] = []

    real_vals, real_note = real_invariants(classes, s)
    places.append(
        PlaceInvariants(REAL, tuple(sorted(real_vals)) if real_vals else (), real_vals is not None, real_note)
    )

    crit = critical_primes(classes, s)
    tail: list[TailCertificate] = []
    for p in primes_up_to(max(bound, max(crit))):
        if p in crit:
            continue
        d = [squarefree_part(c.second_slot(s.k)) for c in classes]
        if all(legendre(di, p) == 1 for di in d):
            kind = "square-second-slot"
        elif _tail_unit_scan(classes, s, p):
            kind = "unit-first-slot"
        else:
            crit.append(p)
            notes.append(f"p={p}: first slots can vanish mod p; scanned as a critical prime")
            continue
        wv = _witness_invariants(classes, s, local, p) if p <= bound else None
        ok = None if wv is None else all(v == 0 for v in wv)
        if ok is False:
            notes.append(f"p={p}: witness invariant nonzero, certificate contradicted")
        tail.append(TailCertificate(p, kind, ok))
    crit = sorted(set(crit))

    for p in crit:
        if p > MAX_CRITICAL_PRIME:
            places.append(PlaceInvariants(p, (), False, "critical prime too large to scan"))
            continue
        scan = scan_invariants(classes, s, p, depth if p == 2 else odd_depth)
        places.append(
            PlaceInvariants(p, tuple(sorted(scan.values)), scan.complete, f"cell refinement to depth {scan.depth}",
                            scan.uncovered)
        )

    tail_note = (
        f"primes > {bound} outside {{2, 3}} and the primes of the second slots: the second slot is a "
        "square times a unit there, and the unit-first-slot argument gives invariant 0"
    )
    complete = all(e.complete for e in places) and all(t.witness_invariants_zero is not False for t in tail)
    if not local.solvable:
        notes.append(f"not locally solvable at {list(local.failures)}")
    selection = zero_selection(places, n)
    if not local.solvable:
        verdict = "inconclusive"
    elif selection is not None:
        verdict = "not_obstructed_with_witness"
    elif complete:
        verdict = "obstructed"
    else:
        verdict = "inconclusive"
    return ObstructionReport(
        s, tuple(c.label for c in classes), tuple(places), tuple(tail), tail_note, verdict, selection,
        tuple(notes), local.solvable, bound, depth,
    )


# ---------------------------------------------------------------------------
# strong approximation


@dataclass(frozen=True)
class StrongApproximationReport:
    surface: Surface
    label: str
    integral_point: tuple[int, int, int] | None
    witnesses: tuple[tuple[tuple[int, int, int], int, Fraction], ...]
    integral_point_invariant: Fraction | None
    failure_exhibited: bool
    note: str


def strong_approximation_failure(
    s: Surface, cls: QuaternionClass, point: Sequence[int] | None = None, depth: int = 5, box: int = 20
) -> StrongApproximationReport:
    """Two 2-adic cells whose invariants differ, next to an integral point."""
    if point is None:
        pts = integral_point_search(s, box)
        point = tuple(int(c) for c in pts[0].as_tuple()) if pts else None
    inv_pt = exact_invariant(cls, s, point, 2) if point is not None else None
    scan = scan_invariants([cls], s, 2, depth)
    vals = sorted(scan.values)
    if len(vals) < 2:
        return StrongApproximationReport(
            s, cls.label, point, (), inv_pt, False, "no failure exhibited by this class at p=2 (constant invariant)"
        )
    wit = []
    for v in vals:
        pt, m = scan.example(v)
        wit.append((pt, m, v[0]))
    return StrongApproximationReport(
        s, cls.label, point, tuple(wit), inv_pt, point is not None,
        "distinct 2-adic invariants, so integral points are not dense in the adelic integral points",
    )


# ---------------------------------------------------------------------------
# rational points


@dataclass(frozen=True)
class RationalBMResult:
    surface: Surface
    prime: int
    found: bool
    point: tuple[Fraction, Fraction, Fraction] | None  # (x, y, z^2)
    valuations: tuple[int, int, Fraction] | None
    invariants: Vector | None
    selection: tuple[tuple[Place, Vector], ...] | None
    bounds: str


def _unit_residues(p: int, d: int) -> list[int]:
    return [u for u in range(1, p**d) if u % p]


def rational_bm_witness(
    s: Surface,
    classes: Sequence[QuaternionClass] | None = None,
    prime: int | None = None,
    min_valuation: int = -4,
    max_depth: int = 6,
    valuations: Sequence[tuple[int, int]] | None = None,
    integral: ObstructionReport | None = None,
    profile: str | None = None,
    z_valuation: int | None = None,
    target: Vector | None = None,
) -> RationalBMResult:
    """Search Q_p-points with bounded negative valuations that cancel the integral invariants.

    Candidates are x = u p^a, y = w p^b with units u, w below p^depth. z is then
    determined by z^2 = -B/A, an exact rational checked for being a square in Q_p,
    and the invariants only involve squares of coordinates, so they are exact.
    ``z_valuation`` and ``target`` restrict the search to a prescribed v_p(z)
    and a prescribed invariant vector at p.
    """
    classes = list(classes) if classes is not None else default_classes(s.family, profile)
    n = len(classes)
    p = prime if prime is not None else (2 if s.family is FamilyId.F1 else 3)
    integral = integral or obstruction_verdict(s, classes, profile=profile)
    others = [e for e in integral.places if e.place != p]
    pairs = list(valuations) if valuations is not None else sorted(
        ((a, b) for a in range(0, min_valuation - 1, -1) for b in range(0, min_valuation - 1, -1)),
        key=lambda ab: (ab == (0, 0), -min(ab), ab[0] < ab[1], -ab[0] - ab[1], ab),
    )
    bounds = f"valuations >= {min_valuation}, unit residues below {p}^{max_depth}"
    seen: set[tuple] = set()
    for d in range(1, max_depth + 1):
        units = _unit_residues(p, d)
        for a, b in pairs:
            for u in units:
                x = Fraction(u) * Fraction(p) ** a
                for w in units:
                    y = Fraction(w) * Fraction(p) ** b
                    key = (x, y)
                    if key in seen:
                        continue
                    seen.add(key)
                    cz, cc = s.z_coefficients(x, y)
                    if cz == 0 or cc == 0:
                        continue
                    z2 = -Fraction(cc) / Fraction(cz)
                    if not is_padic_square(z2, p):
                        continue
                    if z_valuation is not None and valuation(z2, p) != 2 * z_valuation:
                        continue
                    vec = []
                    for c in classes:
                        for rep in c.representations:
                            val = Fraction(rep.first_in_squares(x, y, z2))
                            if val != 0:
                                vec.append(hilbert_symbol(val, rep.second_fn(s.k), p))
                                break
                        else:
                            break
                    if len(vec) != n or (target is not None and tuple(vec) != tuple(target)):
                        continue
                    here = PlaceInvariants(p, (tuple(vec),), True, "rational point")
                    sel = zero_selection([*others, here], n)
                    if sel is not None:
                        vz = Fraction(valuation(z2, p), 2)  # type: ignore[arg-type]
                        return RationalBMResult(s, p, True, (x, y, z2), (a, b, vz), tuple(vec), sel, bounds)
    return RationalBMResult(s, p, False, None, None, None, None, bounds)
