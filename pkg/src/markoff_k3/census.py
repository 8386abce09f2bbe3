"""Counting admissible parameters up to a bound and the census of integral Hasse failures."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .brauer import obstruction_verdict
from .local_points import (
    OBSTRUCTION_PROFILE,
    PROFILES,
    AssumptionProfile,
    assumption_check,
    everywhere_locally_solvable,
    surface_for,
)
from .padic_core import is_prime
from .surfaces import FamilyId

ALL_INTEGERS = "all-integers"
PRIME_ELL = "prime-ell"
MODES = (ALL_INTEGERS, PRIME_ELL)
DEFAULT_LADDER = (10**3, 10**4, 10**5, 10**6)
DEFAULT_ROW_BUDGET = 500
CSV_HEADER = ("family", "ell", "k", "solvable", "obstructed", "inconclusive")


def congruence_density(profile: AssumptionProfile) -> Fraction | None:
    """Product of the congruence densities, or None when the profile also has
    prime-divisor conditions (which have no closed-form density)."""
    if profile.prime_conditions:
        return None
    out = Fraction(1)
    for c in profile.congruences:
        out *= Fraction(len(c.allowed), c.modulus)
    return out


def parameter_range(profile: AssumptionProfile, bound: int, mode: str = ALL_INTEGERS) -> Iterator[int]:
    """Candidate values (k or ell) with |k| <= bound, in order of |k| then value."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if profile.parameterization == "k-direct":
        yield from sorted(range(-bound, bound + 1), key=lambda k: (abs(k), k))
        return
    top = math.isqrt(int(bound / profile.quadratic_coefficient)) + 2
    values = range(-top, top + 1) if profile.both_signs_of_ell else range(1, top + 1)
    out = []
    for ell in values:
        if ell == 0 or abs(profile.k_of(ell)) > bound:
            continue
        if mode == PRIME_ELL and not is_prime(abs(ell)):
            continue
        out.append(ell)
    yield from sorted(out, key=lambda n: (abs(profile.k_of(n)), n))


def _passes_congruences(profile: AssumptionProfile, n: int) -> bool:
    k = profile.k_of(n)
    for c in profile.congruences:
        if (k if c.target == "k" else n) % c.modulus not in c.allowed:
            return False
    return True


def admissible_values(profile_id: str, bound: int, mode: str = ALL_INTEGERS) -> list[int]:
    prof = PROFILES[profile_id]
    return [
        n for n in parameter_range(prof, bound, mode)
        if _passes_congruences(prof, n) and assumption_check(profile_id, n).passed
    ]


@dataclass(frozen=True)
class CensusSummary:
    M: int
    mode: str
    counts: dict[str, int]
    range_sizes: dict[str, int]
    predicted_density: dict[str, Fraction | None]
    obstructed: int | None = None
    solvable: int | None = None
    inconclusive: int | None = None

    def count_over_m(self, profile_id: str) -> float:
        return self.counts[profile_id] / self.M

    def density_ratio(self, profile_id: str) -> float | None:
        """Observed count over the congruence-product prediction for the same range."""
        d = self.predicted_density[profile_id]
        if d is None or d == 0:
            return None
        return self.counts[profile_id] / float(d * self.range_sizes[profile_id])

    def growth_ratio(self, count: int | None = None) -> float | None:
        """count * log M / sqrt M, the diagnostic for the square-root lower bound."""
        c = self.obstructed if count is None else count
        if c is None:
            return None
        return c * math.log(self.M) / math.sqrt(self.M)

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "mode": self.mode,
            "counts": dict(sorted(self.counts.items())),
            "count_over_M": {p: self.count_over_m(p) for p in sorted(self.counts)},
            "density_ratio": {p: self.density_ratio(p) for p in sorted(self.counts)},
            "obstructed": self.obstructed,
            "solvable": self.solvable,
            "inconclusive": self.inconclusive,
            "growth_ratio": self.growth_ratio(),
        }


def admissible_count(profile_ids: str | Sequence[str], M: int, mode: str = ALL_INTEGERS) -> CensusSummary:
    if M < 10:
        raise ValueError("M must be at least 10")
    ids = [profile_ids] if isinstance(profile_ids, str) else list(profile_ids)
    counts, sizes, dens = {}, {}, {}
    for pid in ids:
        prof = PROFILES[pid]
        counts[pid] = len(admissible_values(pid, M, mode))
        sizes[pid] = sum(1 for _ in parameter_range(prof, M, mode))
        dens[pid] = congruence_density(prof)
    return CensusSummary(M, mode, counts, sizes, dens)


def density_ladder(profile_id: str, ladder: Sequence[int] = DEFAULT_LADDER, mode: str = ALL_INTEGERS) -> list[CensusSummary]:
    return [admissible_count(profile_id, M, mode) for M in ladder]


def ladder_stable(summaries: Sequence[CensusSummary], profile_id: str, tolerance: float = 0.10, start: int = 10**4) -> bool:
    """Successive count/M ratios agree within ``tolerance`` once M >= start."""
    vals = [s.count_over_m(profile_id) for s in summaries if s.M >= start]
    return all(abs(b / a - 1) <= tolerance for a, b in zip(vals, vals[1:]) if a)


@dataclass(frozen=True)
class CensusRow:
    family: FamilyId
    ell: int
    k: int
    solvable: bool
    obstructed: bool
    inconclusive: bool
    profile: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if PROFILES[self.profile].k_of(self.ell) != self.k:
            raise ValueError("k does not match the profile formula")

    def as_csv(self) -> tuple[str, ...]:
        return (self.family.value, str(self.ell), str(self.k), str(int(self.solvable)),
                str(int(self.obstructed)), str(int(self.inconclusive)))


@dataclass(frozen=True)
class CensusResult:
    summary: CensusSummary
    rows: tuple[CensusRow, ...]
    truncated: bool

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(r.as_csv())
        return buf.getvalue()


def hasse_failure_census(
    family: FamilyId | str,
    M: int,
    B: int = 50,
    depth: int = 5,
    mode: str = ALL_INTEGERS,
    verify_obstruction: bool = True,
    row_budget: int = DEFAULT_ROW_BUDGET,
) -> CensusResult:
    """Run local solvability and the obstruction verdict on every admissible parameter.

    Rows are ordered by |k|. Inconclusive verdicts get their own bucket.
    """
    fam = FamilyId.parse(family)
    pid = OBSTRUCTION_PROFILE[fam]
    values = admissible_values(pid, M, mode)
    truncated = len(values) > row_budget
    rows = []
    for ell in values[:row_budget]:
        s = surface_for(pid, ell)
        if verify_obstruction:
            rep = obstruction_verdict(s, bound=B, depth=depth, profile=pid)
            solvable = rep.locally_solvable
            obstructed = rep.verdict == "obstructed"
            inconclusive = rep.verdict == "inconclusive"
        else:
            solvable = everywhere_locally_solvable(s, B, pid).solvable
            obstructed, inconclusive = False, True
        rows.append(CensusRow(fam, ell, s.k, solvable, obstructed, inconclusive, pid))
    summary = CensusSummary(
        M, mode, {pid: len(values)}, {pid: sum(1 for _ in parameter_range(PROFILES[pid], M, mode))},
        {pid: congruence_density(PROFILES[pid])},
        obstructed=sum(r.solvable and r.obstructed for r in rows),
        solvable=sum(r.solvable for r in rows),
        inconclusive=sum(r.inconclusive for r in rows),
    )
    return CensusResult(summary, tuple(rows), truncated)


def growth_ladder(
    family: FamilyId | str,
    ladder: Sequence[int],
    B: int = 50,
    depth: int = 5,
    mode: str = ALL_INTEGERS,
    row_budget: int = DEFAULT_ROW_BUDGET,
) -> list[tuple[int, int, float]]:
    """(M, obstructed count, count * log M / sqrt M) along a ladder of bounds.

    This is a plateau diagnostic for the square-root lower bound, not a proof.
    """
    top = hasse_failure_census(family, max(ladder), B, depth, mode, True, row_budget)
    out = []
    for M in sorted(ladder):
        c = sum(1 for r in top.rows if abs(r.k) <= M and r.solvable and r.obstructed)
        out.append((M, c, c * math.log(M) / math.sqrt(M)))
    return out
