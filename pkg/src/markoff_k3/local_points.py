"""Local solvability: parameter profiles, real witnesses and residue witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .padic_core import (
    ResidueWitness,
    is_prime,
    newton_certificate,
    prime_factors,
    primes_up_to,
)
from .surfaces import AffinePoint, FamilyId, Surface, canonical_mod

# ---------------------------------------------------------------------------
# assumption profiles


@dataclass(frozen=True)
class Congruence:
    target: str  # "k" or "ell"
    modulus: int
    allowed: frozenset[int]

    def __post_init__(self) -> None:
        if self.modulus < 1 or not self.allowed:
            raise ValueError("bad congruence condition")
        if any(not 0 <= r < self.modulus for r in self.allowed):
            raise ValueError("residues must be reduced")

    def describe(self) -> str:
        return f"{self.target} mod {self.modulus} in {sorted(self.allowed)}"


@dataclass(frozen=True)
class PrimeDivisorCondition:
    quantity: str  # "k", "ell" or "2ell+1"
    modulus: int
    allowed: frozenset[int]
    min_prime: int = 2

    def describe(self) -> str:
        return f"primes p >= {self.min_prime} dividing {self.quantity} have p mod {self.modulus} in {sorted(self.allowed)}"


@dataclass(frozen=True)
class AssumptionProfile:
    id: str
    family: FamilyId
    parameterization: str  # "k-direct" or "ell-derived"
    congruences: tuple[Congruence, ...]
    prime_conditions: tuple[PrimeDivisorCondition, ...] = ()
    k_formula: str = "k"
    both_signs_of_ell: bool = False

    def k_of(self, n: int) -> int:
        if self.parameterization == "k-direct":
            return n
        return K_FORMULAS[self.k_formula](n)

    @property
    def quadratic_coefficient(self) -> Fraction:
        return {"k": Fraction(1), "-(1+16l^2)": Fraction(16), "18l^2": Fraction(18),
                "-(1+27l^2)/4": Fraction(27, 4), "l(l+1)": Fraction(1)}[self.k_formula]


K_FORMULAS: dict[str, Callable[[int], int]] = {
    "-(1+16l^2)": lambda l: -(1 + 16 * l * l),
    "18l^2": lambda l: 18 * l * l,
    "-(1+27l^2)/4": lambda l: -(1 + 27 * l * l) // 4,
    "l(l+1)": lambda l: l * (l + 1),
}


def _c(target: str, modulus: int, allowed) -> Congruence:
    return Congruence(target, modulus, frozenset(r % modulus for r in allowed))


def _not(target: str, modulus: int, forbidden) -> Congruence:
    bad = {r % modulus for r in forbidden}
    return Congruence(target, modulus, frozenset(r for r in range(modulus) if r not in bad))


def _pd(quantity: str, modulus: int, allowed, min_prime: int = 2) -> PrimeDivisorCondition:
    return PrimeDivisorCondition(quantity, modulus, frozenset(r % modulus for r in allowed), min_prime)


def _pronic_profile(id_: str, ell_mod8: int) -> AssumptionProfile:
    return AssumptionProfile(
        id_, FamilyId.F3, "ell-derived",
        (_c("ell", 8, {ell_mod8}), _c("ell", 27, {4}), _c("ell", 35, {1}), _not("ell", 37, {0, -1})),
        (_pd("2ell+1", 8, {1, 3, 7}),),
        "l(l+1)", both_signs_of_ell=True,
    )


PROFILES: dict[str, AssumptionProfile] = {
    p.id: p
    for p in (
        AssumptionProfile(
            "f1-solvable", FamilyId.F1, "k-direct",
            (_c("k", 8, {-1}), _not("k", 3, {0}), _not("k", 5, {0}), _not("k", 7, {0})),
        ),
        # 3 divides k here, so the prime-divisor condition can only concern p >= 7
        AssumptionProfile(
            "f2-solvable", FamilyId.F2, "k-direct",
            (_c("k", 8, {2}), _c("k", 27, {-9}), _c("k", 5, {-2}), _c("k", 7, {2})),
            (_pd("k", 8, {1, -1}, min_prime=7),),
        ),
        AssumptionProfile(
            "f3-solvable", FamilyId.F3, "k-direct",
            (_c("k", 4, {1}), _c("k", 3, {2}), _c("k", 5, {3}), _not("k", 7, {0, -2}), _not("k", 37, {0})),
        ),
        AssumptionProfile(
            "f1-obstructed", FamilyId.F1, "ell-derived",
            (_c("ell", 2, {1}), _not("ell", 5, {2, -2})),
            (_pd("ell", 4, {1}),),
            "-(1+16l^2)",
        ),
        AssumptionProfile(
            "f2-obstructed", FamilyId.F2, "ell-derived",
            (_not("ell", 2, {0}), _not("ell", 3, {0}), _c("ell", 5, {1}), _c("ell", 7, {2})),
            (_pd("ell", 8, {1, -1}),),
            "18l^2",
        ),
        AssumptionProfile(
            "f3-obstructed", FamilyId.F3, "ell-derived",
            (_c("ell", 8, {1, -1}), _c("ell", 5, {1}), _c("ell", 7, {3}), _not("ell", 37, {10, -10})),
            (_pd("ell", 24, {1, -1}),),
            "-(1+27l^2)/4",
        ),
        _pronic_profile("f3-pronic-5mod8", 5),
        _pronic_profile("f3-pronic-3mod8", 3),
    )
}

# profile used for the obstruction argument of each family
OBSTRUCTION_PROFILE = {FamilyId.F1: "f1-obstructed", FamilyId.F2: "f2-obstructed", FamilyId.F3: "f3-obstructed"}
SOLVABILITY_PROFILE = {FamilyId.F1: "f1-solvable", FamilyId.F2: "f2-solvable", FamilyId.F3: "f3-solvable"}


@dataclass(frozen=True)
class AssumptionResult:
    profile: str
    value: int
    k: int
    passed: bool
    violated: str | None


def _quantity(name: str, n: int, k: int) -> int:
    return {"k": k, "ell": n, "2ell+1": 2 * n + 1}[name]


def assumption_check(profile_id: str, n: int, digit_bound: int = 40) -> AssumptionResult:
    """Check k (k-direct profiles) or ell (ell-derived profiles) against a profile."""
    prof = PROFILES[profile_id]
    k = prof.k_of(n)
    for cond in prof.congruences:
        v = k if cond.target == "k" else n
        if v % cond.modulus not in cond.allowed:
            return AssumptionResult(profile_id, n, k, False, cond.describe())
    for cond in prof.prime_conditions:
        q = _quantity(cond.quantity, n, k)
        for p in prime_factors(q, digit_bound):
            if p >= cond.min_prime and p % cond.modulus not in cond.allowed:
                return AssumptionResult(profile_id, n, k, False, cond.describe() + f" (fails at p={p})")
    return AssumptionResult(profile_id, n, k, True, None)


# ---------------------------------------------------------------------------
# the real place


@dataclass(frozen=True)
class RealWitness:
    """Either an exact point or a bracket [lo, hi] for the root of a named function.

    In the bracket case the point is (t, t, t) for F1/F3 or (t, 1, 0) for F2,
    where t is the root of ``function`` in [lo, hi].
    """

    kind: str  # "exact" or "interval"
    point: AffinePoint | None = None
    function: str | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None
    shape: str | None = None


def _bisect(f: Callable[[Fraction], Fraction], lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    flo = f(lo)
    if flo == 0:
        return lo, lo
    if f(hi) == 0:
        return hi, hi
    if (flo > 0) == (f(hi) > 0):
        raise ValueError("no sign change on bracket")
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


def real_witness(s: Surface, width: Fraction = Fraction(1, 2**20)) -> RealWitness:
    k = s.k
    if k >= 0:
        root = _exact_sqrt(Fraction(k))
        if root is not None:
            return RealWitness("exact", AffinePoint.of(root, 0, 0))
        lo, hi = _bisect(lambda t: t * t - k, Fraction(0), Fraction(k + 1), width)
        return RealWitness("interval", function=f"t^2 - ({k})", lo=lo, hi=hi, shape="(t, 0, 0)")
    if s.family is FamilyId.F2:
        target = Fraction(1 - k, 3)
        root = _exact_sqrt(target)
        if root is not None:
            return RealWitness("exact", AffinePoint.of(root, 1, 0))
        lo, hi = _bisect(lambda t: t * t - target, Fraction(0), target + 1, width)
        return RealWitness("interval", function=f"t^2 - {target}", lo=lo, hi=hi, shape="(t, 1, 0)")
    if s.family is FamilyId.F1:
        fn: Callable[[Fraction], Fraction] = lambda t: 3 * t**2 - 4 * t**6 - k
        name = f"3t^2 - 4t^6 - ({k})"
    else:
        fn = lambda t: 3 * t**2 + 12 * t**4 - 16 * t**6 - k
        name = f"3t^2 + 12t^4 - 16t^6 - ({k})"
    hi = Fraction(1)
    while fn(hi) > 0:
        hi *= 2
    lo, hi = _bisect(fn, Fraction(0) if fn(Fraction(0)) > 0 else hi / 2, hi, width)
    return RealWitness("interval", function=name, lo=lo, hi=hi, shape="(t, t, t)")


# ---------------------------------------------------------------------------
# residue witnesses


def min_depth(p: int) -> int:
    return 3 if p == 2 else 1


def _sqrt_table(modulus: int) -> dict[int, list[int]]:
    table: dict[int, list[int]] = {}
    for z in range(modulus):
        table.setdefault(z * z % modulus, []).append(z)
    return table


def _int_evaluators(s: Surface) -> tuple[Callable, Callable]:
    return s.value, s.gradient


def _scan(s: Surface, p: int, depth: int) -> tuple[ResidueWitness | None, bool]:
    """(first certified canonical point, whether any residue solution exists)."""
    if depth < min_depth(p):
        raise ValueError(f"depth must be at least {min_depth(p)} at p={p}")
    n = p**depth
    roots = _sqrt_table(n)
    value, grad = _int_evaluators(s)
    seen = False
    for x in range(n):
        if x > n - x:
            break
        for y in range(x, n):
            if x > n - y:
                break
            cz, cc = s.z_coefficients(x, y)
            cz %= n
            if cz and math.gcd(cz, n) == 1:
                zs = roots.get((-cc * pow(cz, -1, n)) % n, [])
            else:
                zs = [z for z in range(n) if (cz * z * z + cc) % n == 0]
            for z in zs:
                if x > z or x > n - z:
                    continue
                seen = True
                w = newton_certificate(value, grad, (x, y, z), p, depth)
                if w is not None and w.liftable and canonical_mod((x, y, z), n) == (x, y, z):
                    return w, True
    return None, seen


def local_witness(s: Surface, p: int, depth: int) -> ResidueWitness | None:
    """First Newton-certified residue point mod p**depth in lexicographic order.

    The equation is even in each coordinate, so every solution has a signed
    permutation with x <= min(y, N - y) and x <= min(z, N - z); only those
    triples are visited, and the first hit is the least element of its orbit.
    Returns None when nothing at this depth is certified.
    """
    return _scan(s, p, depth)[0]


@dataclass(frozen=True)
class PrimeEntry:
    prime: int
    witness: ResidueWitness | None
    depth_scanned: int
    no_residue_solution: bool = False  # no solution mod p**depth_scanned, so no p-adic point


@dataclass(frozen=True)
class LocalSolvabilityReport:
    surface: Surface
    real: RealWitness
    entries: tuple[PrimeEntry, ...]
    bound: int
    profile: str | None
    profile_passed: bool | None
    tail_note: str
    failures: tuple[int, ...] = field(default=())

    @property
    def solvable(self) -> bool:
        return not self.failures

    def witness(self, p: int) -> ResidueWitness | None:
        for e in self.entries:
            if e.prime == p:
                return e.witness
        return None


MAX_DEPTH = 6


def find_witness(s: Surface, p: int, max_depth: int = MAX_DEPTH) -> PrimeEntry:
    depth = min_depth(p)
    while True:
        w, seen = _scan(s, p, depth)
        if not seen:
            return PrimeEntry(p, None, depth, True)
        if w is not None or depth >= max_depth:
            return PrimeEntry(p, w, depth)
        depth += 1


def everywhere_locally_solvable(
    s: Surface, bound: int = 200, profile: str | None = None, max_depth: int = MAX_DEPTH
) -> LocalSolvabilityReport:
    """Witnesses for every prime up to ``bound`` and the real place.

    Primes beyond the bound are covered only by the profile certificate (genus
    one fibres plus the Hasse-Weil bound), which is cited, not re-proven.
    """
    entries = tuple(find_witness(s, p, max_depth) for p in primes_up_to(bound))
    failures = tuple(e.prime for e in entries if e.witness is None)
    passed: bool | None = None
    if profile is not None:
        prof = PROFILES[profile]
        passed = prof.family is s.family and (
            prof.parameterization != "k-direct" or assumption_check(profile, s.k).passed
        )
    if passed:
        note = f"primes > {bound}: by assumption profile {profile} (Hasse-Weil), not re-verified"
    else:
        note = f"primes > {bound}: unverified (no passing assumption profile)"
    return LocalSolvabilityReport(s, real_witness(s), entries, bound, profile, passed, note, failures)


def surface_for(profile_id: str, n: int) -> Surface:
    prof = PROFILES[profile_id]
    return Surface(prof.family, prof.k_of(n))


__all__ = [
    "AssumptionProfile",
    "AssumptionResult",
    "LocalSolvabilityReport",
    "PROFILES",
    "PrimeEntry",
    "RealWitness",
    "assumption_check",
    "everywhere_locally_solvable",
    "is_prime",
    "local_witness",
    "real_witness",
    "surface_for",
]
