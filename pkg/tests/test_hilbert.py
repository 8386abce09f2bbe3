import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from markoff_k3.hilbert import HALF, REAL, ZERO, PrecisionError, hilbert_symbol, hilbert_symbol_padic, product_formula_check
from markoff_k3.padic_core import PadicApprox

nonzero = st.integers(-10**6, 10**6).filter(bool)
rationals = st.builds(Fraction, nonzero, st.integers(1, 10**4))


def brute_force_symbol(a: int, b: int, p: int) -> Fraction:
    """0 when z^2 = a x^2 + b y^2 has a primitive solution mod p^N that Newton lifts."""
    n = 5 if p == 2 else 3  # valuations of a, b are at most 1, so e <= 2
    mod = p**n
    for x, y, z in itertools.product(range(mod), repeat=3):
        if x % p == 0 and y % p == 0 and z % p == 0:
            continue
        if (a * x * x + b * y * y - z * z) % mod:
            continue
        grads = [2 * a * x, 2 * b * y, 2 * z]
        e = min(_val(g % mod, p, n) for g in grads)
        if n > 2 * e:
            return ZERO
    return HALF


def _val(g: int, p: int, cap: int) -> int:
    if g == 0:
        return cap
    v = 0
    while g % p == 0:
        g //= p
        v += 1
    return v


@pytest.mark.parametrize("p", [2, 3, 5])
def test_symbol_matches_brute_force(p):
    values = [u * p**e for u in (1, -1, 2, 3, 5, -3, 7, 6) for e in (0, 1) if (u % p or u == 1)]
    values = sorted(set(v for v in values if v % p**2))[:8]
    for a, b in itertools.product(values, repeat=2):
        if p == 2 and not (a % 16 and b % 16):
            continue
        assert hilbert_symbol(a, b, p) == brute_force_symbol(a, b, p), (a, b, p)


def test_known_values():
    assert hilbert_symbol(3, -1, 2) == HALF
    assert hilbert_symbol(-1, -1, REAL) == HALF
    assert hilbert_symbol(-1, -1, 2) == HALF
    assert hilbert_symbol(2, 3, 3) == HALF
    assert hilbert_symbol(5, 7, 2) == ZERO


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(rationals, rationals)
def test_product_formula(a, b):
    assert product_formula_check(a, b)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, rationals, st.sampled_from([REAL, 2, 3, 5, 7]))
def test_bilinear_and_symmetric(a, b, c, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
    assert hilbert_symbol(a, b * c, v) == (hilbert_symbol(a, b, v) + hilbert_symbol(a, c, v)) % 1
    assert hilbert_symbol(a, -a, v) == ZERO


def test_padic_approx_agrees_with_exact():
    rng = random.Random(7)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        a = rng.randint(1, 10**5) * rng.choice([1, -1])
        b = rng.randint(1, 10**5) * rng.choice([1, -1])
        approx = PadicApprox.from_rational(a, p, 6)
        assert hilbert_symbol_padic(approx, b, p) == hilbert_symbol(a, b, p)


def test_insufficient_precision_raises():
    with pytest.raises(PrecisionError):
        hilbert_symbol_padic(PadicApprox.from_residue(3, 2, 1), 3, 2)
