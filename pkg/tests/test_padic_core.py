from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from markoff_k3.local_points import find_witness
from markoff_k3.padic_core import (
    INFINITY,
    NotLiftableError,
    PadicApprox,
    ResidueWitness,
    hensel_lift,
    is_padic_square,
    legendre,
    newton_certificate,
    prime_factors,
    square_class,
    valuation,
)
from markoff_k3.surfaces import FamilyId, Surface


def test_valuation_basics():
    assert valuation(48, 2) == 4
    assert valuation(Fraction(5, 27), 3) == -3
    assert valuation(0, 7) is INFINITY
    assert INFINITY > 10**9


def test_legendre_against_euler_table():
    for p in (3, 5, 7, 11, 13):
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            assert legendre(a, p) == (1 if a in squares else -1)


@pytest.mark.parametrize("q,p,expected", [(17, 2, True), (5, 2, False), (-7, 2, True), (2, 7, True), (3, 7, False),
                                          (Fraction(1, 4), 2, True), (12, 3, False)])
def test_padic_squares(q, p, expected):
    assert is_padic_square(q, p) is expected


def test_from_residue_zero_is_undetermined():
    a = PadicApprox.from_residue(16, 2, 4)
    assert a.valuation == 4 and a.precision == 0
    assert square_class(a) == "undetermined"


def test_prime_factors():
    assert prime_factors(656658) == [2, 3, 191]
    assert prime_factors(1) == []


def test_newton_certificate_margin():
    s = Surface(FamilyId.F1, -17)
    w = newton_certificate(s.value, s.gradient, (1, 1, 1), 2, 3)
    assert w is not None and w.liftable and w.lift_margin == 3 - 2 * w.derivative_valuation


def test_unliftable_witness_rejected():
    # x^2 = 17 mod 4 at x = 1: derivative valuation 1, so m = 2 is not enough
    def value(pt):
        return pt[0] ** 2 - 17

    def grad(pt):
        return (2 * pt[0], 0, 0)

    w = ResidueWitness(2, 2, (1, 0, 0), False, 0, 1)
    with pytest.raises(NotLiftableError):
        hensel_lift(value, grad, w, 20)
    lifted = hensel_lift(value, grad, ResidueWitness(2, 3, (1, 0, 0), True, 1, 1), 30)
    assert (lifted[0] ** 2 - 17) % 2**30 == 0


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(list(FamilyId)),
    st.integers(-5000, 5000),
    st.sampled_from([2, 3, 5, 7, 11]),
    st.integers(0, 30),
)
def test_hensel_postcondition(family, k, p, extra):
    s = Surface(family, k)
    entry = find_witness(s, p, max_depth=5)
    if entry.witness is None:
        return
    w = entry.witness
    target = w.exponent + extra
    pt = hensel_lift(s.value, s.gradient, w, target)
    assert s.value(pt) % p**target == 0
    keep = w.exponent - w.derivative_valuation
    assert all((a - b) % p**keep == 0 for a, b in zip(pt, w.point))
