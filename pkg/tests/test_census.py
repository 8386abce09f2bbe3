from fractions import Fraction

import pytest

from markoff_k3.census import (
    CSV_HEADER,
    PRIME_ELL,
    CensusRow,
    admissible_count,
    admissible_values,
    congruence_density,
    density_ladder,
    growth_ladder,
    hasse_failure_census,
    ladder_stable,
)
from markoff_k3.local_points import PROFILES, Congruence, AssumptionProfile, assumption_check
from markoff_k3.surfaces import FamilyId


def brute_count(pid, M):
    prof = PROFILES[pid]
    return sum(1 for k in range(-M, M + 1) if assumption_check(pid, k).passed)


@pytest.mark.parametrize("pid", ["f1-solvable", "f3-solvable"])
def test_counts_match_naive_loop(pid):
    assert admissible_count(pid, 3000).counts[pid] == brute_count(pid, 3000)


def test_density_products():
    assert congruence_density(PROFILES["f1-solvable"]) == Fraction(1, 8) * Fraction(2, 3) * Fraction(4, 5) * Fraction(6, 7)
    assert congruence_density(PROFILES["f2-solvable"]) is None


@pytest.mark.parametrize("pid", ["f1-solvable", "f3-solvable"])
def test_density_ratio_at_1e5(pid):
    assert abs(admissible_count(pid, 10**5).density_ratio(pid) - 1) < 0.10


def test_ladder_is_monotone_and_stable():
    ladder = density_ladder("f1-solvable", (10**4, 2 * 10**4, 4 * 10**4))
    counts = [s.counts["f1-solvable"] for s in ladder]
    assert counts == sorted(counts)
    assert ladder_stable(ladder, "f1-solvable")


def test_first_prime_ell_for_f1():
    assert admissible_values("f1-obstructed", 10**3, PRIME_ELL)[0] == 5
    assert admissible_values("f1-obstructed", 20) == [1]


def test_empty_residue_set():
    bad = AssumptionProfile("empty", FamilyId.F1, "k-direct",
                            (Congruence("k", 2, frozenset({0})), Congruence("k", 4, frozenset({1}))))
    PROFILES["empty"] = bad
    try:
        assert admissible_count("empty", 10).counts["empty"] == 0
    finally:
        del PROFILES["empty"]


def test_census_f1_small():
    res = hasse_failure_census("f1", 20, B=50)
    assert [(r.ell, r.k, r.solvable, r.obstructed) for r in res.rows] == [(1, -17, True, True)]
    assert res.csv_text().splitlines()[0] == ",".join(CSV_HEADER)


def test_census_f2_empty_below_1000():
    assert hasse_failure_census("f2", 10**3, B=50, mode=PRIME_ELL).rows == ()


def test_census_f3_contains_241():
    res = hasse_failure_census("f3", 4 * 10**5, B=50, mode=PRIME_ELL)
    assert any(r.k == -392047 and r.solvable and r.obstructed for r in res.rows)


def test_rows_satisfy_formula():
    res = hasse_failure_census("f1", 10**5, B=50)
    for r in res.rows:
        assert PROFILES[r.profile].k_of(r.ell) == r.k
    with pytest.raises(ValueError):
        CensusRow(FamilyId.F1, 1, -18, True, True, False, "f1-obstructed")


def test_growth_ladder_bounded():
    rows = growth_ladder("f1", (10**3, 10**4, 10**5))
    counts = [c for _, c, _ in rows]
    assert counts == sorted(counts)
    assert all(0 < r < 1 for _, _, r in rows)
