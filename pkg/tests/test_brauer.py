import itertools
from fractions import Fraction

import pytest

from markoff_k3.brauer import (
    certify_representations,
    default_classes,
    exact_invariant,
    f1_class,
    f2_class,
    f3_class,
    obstruction_verdict,
    rational_bm_witness,
    scan_invariants,
    strong_approximation_failure,
)
from markoff_k3.hilbert import HALF, REAL, ZERO, hilbert_symbol
from markoff_k3.local_points import surface_for
from markoff_k3.padic_core import hensel_lift, newton_certificate
from markoff_k3.surfaces import FamilyId, Surface

H = HALF
REFERENCE = {
    (FamilyId.F1, -17): {REAL: {(ZERO,)}, 2: {(H,)}, 3: {(ZERO,)}},
    (FamilyId.F2, 656658): {REAL: {(ZERO, ZERO)}, 2: {(ZERO, H), (H, ZERO), (H, H)}, 3: {(ZERO, ZERO)}},
    (FamilyId.F3, -392047): {REAL: {(ZERO, ZERO)}, 2: {(ZERO, ZERO), (ZERO, H), (H, ZERO)}, 3: {(H, H)}},
}


def sampled_invariants(classes, s, p, depth, target=48):
    """Invariants at Hensel lifts of every certified residue point mod p^depth.

    Independent of the cell refinement: each lifted point is an integer
    approximation good to p^target, far beyond the valuations involved.
    """
    out = set()
    n = p**depth
    for pt in itertools.product(range(n), repeat=3):
        if s.value(pt) % n:
            continue
        w = newton_certificate(s.value, s.gradient, pt, p, depth)
        if not (w and w.liftable):
            continue
        lifted = hensel_lift(s.value, s.gradient, w, target)
        vec = []
        for c in classes:
            for rep in c.representations:
                a = int(rep.first_fn(*lifted))
                if a % p ** (target - 12):
                    vec.append(hilbert_symbol(a, rep.second_fn(s.k), p))
                    break
        if len(vec) == len(classes):
            out.add(tuple(vec))
    return out


@pytest.mark.parametrize("cls", [f1_class(), f2_class(1), f2_class(2), f3_class(1), f3_class(2),
                                 f3_class(1, +1), f3_class(2, +1)], ids=lambda c: c.family.value + c.label)
def test_representations_agree_on_the_surface(cls):
    for cert in certify_representations(cls):
        assert cert.norm_identity_holds
        assert cert.identity_holds in (None, True)


@pytest.mark.parametrize("key", sorted(REFERENCE, key=str), ids=lambda k: f"{k[0].value}_{k[1]}")
def test_obstruction_tables(key):
    s = Surface(*key)
    rep = obstruction_verdict(s, bound=200, depth=5)
    assert rep.verdict == "obstructed"
    for place, expected in REFERENCE[key].items():
        entry = rep.place(place)
        assert entry.complete and set(entry.values) == expected, place
    for entry in rep.places:
        if entry.place not in REFERENCE[key]:
            assert set(entry.values) == {tuple(ZERO for _ in rep.classes)}
    assert all(t.witness_invariants_zero is not False for t in rep.tail)


@pytest.mark.parametrize("key,p,depth", [((FamilyId.F1, -17), 2, 5), ((FamilyId.F2, 656658), 3, 3),
                                         ((FamilyId.F3, -392047), 3, 3), ((FamilyId.F3, -392047), 2, 5)])
def test_scan_against_lifted_samples(key, p, depth):
    s = Surface(*key)
    classes = default_classes(s.family)
    scan = scan_invariants(classes, s, p, depth)
    assert sampled_invariants(classes, s, p, depth) == set(scan.values)


def test_exact_invariants_at_rational_points():
    s = Surface(FamilyId.F1, -17)
    pt = (Fraction(1, 2), Fraction(49, 24), Fraction(13, 5))
    total = sum(exact_invariant(f1_class(), s, pt, v) for v in (REAL, 2, 3, 5, 7, 13, 17)) % 1
    assert total == 0


@pytest.mark.parametrize("family,k,witnesses", [
    (FamilyId.F2, 574, {((1, 0, 1), ZERO), ((0, 1, 1), H)}),
    (FamilyId.F3, -2911, {((0, 0, 1), ZERO), ((1, 0, 0), H)}),
])
def test_strong_approximation(family, k, witnesses):
    s = Surface(family, k)
    rep = strong_approximation_failure(s, default_classes(family)[0])
    assert rep.failure_exhibited
    assert {(p, v) for p, _, v in rep.witnesses} == witnesses
    assert rep.integral_point is not None


def test_rational_witness_minus_17():
    s = Surface(FamilyId.F1, -17)
    res = rational_bm_witness(s, valuations=[(-1, -3)])
    assert res.found and res.valuations == (-1, -3, 0) and res.invariants == (ZERO,)
    x, y, z2 = res.point
    assert s.value((x, y, Fraction(0))) + s.z_coefficients(x, y)[0] * z2 == 0


def test_rational_witness_f2():
    s = surface_for("f2-obstructed", 191)
    res = rational_bm_witness(s, z_valuation=-1, valuations=[(0, 0)], min_valuation=-4)
    assert res.found and res.prime == 3 and res.invariants == (H, H)


def test_rational_witness_f3():
    s = surface_for("f3-obstructed", 241)
    res = rational_bm_witness(s, min_valuation=-4)
    assert res.found and res.prime == 3 and min(res.valuations) >= -4


def test_pronic_profile_obstructed():
    s = surface_for("f3-pronic-5mod8", 12181)
    rep = obstruction_verdict(s, profile="f3-pronic-5mod8")
    assert rep.verdict == "obstructed"


def test_pronic_profile_not_obstructed():
    s = surface_for("f3-pronic-3mod8", 2731)
    rep = obstruction_verdict(s, profile="f3-pronic-3mod8")
    assert rep.verdict == "not_obstructed_with_witness"
    assert set(rep.place(2).values) == {(ZERO, ZERO)}


def test_not_locally_solvable_is_inconclusive():
    s = surface_for("f3-pronic-3mod8", 10291)
    rep = obstruction_verdict(s, profile="f3-pronic-3mod8")
    assert not rep.locally_solvable and rep.verdict == "inconclusive"
