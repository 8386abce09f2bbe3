import itertools

import numpy as np
import pytest
import sympy

from markoff_k3.lattice import (
    BASIS,
    CLAIMED_KERNELS,
    EXPANSION_TABLE,
    GroupAction,
    alternative_basis_report,
    catalogue,
    catalogue_consistency,
    check_claimed_kernels,
    compare_sigma_block,
    galois_action,
    galois_image,
    h1_cyclic,
    h1_group,
    h1_sigma_on_rho_invariants,
    half_sum_patterns,
    half_sum_patterns_bruteforce,
    inflation_restriction_bounds,
    involution_isometry_check,
    is_isometry,
    lattice,
    open_part_action,
    quotient_by_fibers,
    signature,
    sublattice_index_check,
)
from markoff_k3.smith import determinant, identity


def test_gram_determinant_and_signature():
    lat = lattice()
    assert determinant(lat.gram) == -48
    assert int(round(sympy.Matrix(lat.gram).det())) == -48
    assert signature(lat.gram) == (1, 17)


def test_alternative_basis():
    rep = alternative_basis_report()
    assert rep["determinant"] == -192 and rep["index"] == 2


def test_fibre_quotient():
    q = quotient_by_fibers()
    assert q.rank == 15 and q.torsion == ()


def test_every_catalogue_curve_expands_consistently():
    assert catalogue_consistency() == []
    assert len(catalogue()) == 3 + 24 + 12


@pytest.mark.parametrize("label", sorted(EXPANSION_TABLE))
def test_published_expansions(label):
    assert lattice().expand(label) == EXPANSION_TABLE[label]


def test_non_identity_component_relation():
    lat = lattice()
    c_plus_plus = lat.expand("C1++")
    assert tuple(a - b for a, b in zip(lat.expand("D1"), lat.expand("C1+-"))) == c_plus_plus
    assert lat.expand("C1--") != lat.expand("C1+-")


def test_involutions_on_fibre_span():
    assert all(involution_isometry_check().values())


def test_galois_generators_are_isometries_and_satisfy_relations():
    act = galois_action()
    for m in act.matrices.values():
        assert is_isometry(m, lattice().gram)
    assert act.relations_hold()
    assert len({tuple(map(tuple, m)) for m in act.elements().values()}) == 16


@pytest.mark.parametrize("g", ["sigma", "tau", "rho"])
def test_galois_images_permute_catalogue(g):
    labels = list(catalogue())
    images = [galois_image(g, x) for x in labels]
    assert sorted(images) == sorted(labels)


def test_h1_closed_and_open():
    assert h1_group(galois_action()).factors == (2, 2, 2)
    assert h1_group(open_part_action()).factors == (2, 2, 2, 2)


def test_h1_cyclic_rho_trivial():
    act = galois_action()
    assert h1_cyclic(act.matrices["rho"], 2).factors == ()
    eye = identity(18)
    only_rho = GroupAction({"sigma": eye, "tau": eye, "rho": act.matrices["rho"]})
    assert h1_group(only_rho).factors == ()


def test_h1_sigma_on_rho_fixed_part_of_open():
    assert h1_sigma_on_rho_invariants(open_part_action()).factors == (2,)


def test_inflation_restriction_consistent():
    closed = inflation_restriction_bounds(galois_action())
    assert closed.lower_bound <= 8 <= closed.upper_bound
    opened = inflation_restriction_bounds(open_part_action())
    assert opened.lower_bound <= 16 <= opened.upper_bound


def test_h1_cyclic_small_examples():
    # Z with the sign action: H^1(Z/2, Z^-) = Z/2
    assert h1_cyclic([[-1]], 2).factors == (2,)
    assert h1_cyclic([[1]], 2).factors == ()
    # regular representation is induced, so cohomologically trivial
    assert h1_cyclic([[0, 1], [1, 0]], 2).factors == ()


def test_half_sums_two_routes():
    gram = lattice().gram
    assert half_sum_patterns(gram) == half_sum_patterns_bruteforce(gram)
    assert len(half_sum_patterns(gram)) == 3


def test_half_sum_classification():
    cands = sublattice_index_check()
    squares = sorted(c.self_intersection for c in cands)
    assert squares == [-1, 2, 5]
    for c in cands:
        assert c.verdict.startswith("excluded")
        if c.even:
            lat = lattice()
            assert c.rewrite is not None
            assert all(lat.pair(lat.expand(a), lat.expand(b)) == 0 for a, b in itertools.combinations(c.rewrite, 2))


def test_claimed_kernels():
    for claim in check_claimed_kernels():
        assert claim.generators_in_kernel and claim.spans_kernel, claim.name
    assert {c.name for c in check_claimed_kernels()} == set(CLAIMED_KERNELS)


def test_displayed_sigma_block_is_a_discrepancy():
    cmp = compare_sigma_block()
    assert not cmp.equals_reconstruction and not cmp.equals_transpose
    assert not cmp.displayed_order_four and not cmp.displayed_is_isometry


def test_basis_has_full_rank():
    vecs = np.array([lattice().expand(b) for b in BASIS])
    assert (vecs == np.eye(18, dtype=int)).all()
