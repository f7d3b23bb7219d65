"""Fuzzy sets, Zadeh mappings, and the group-indexed operations."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from topconv.fuzzy import (
    DomainMismatch,
    FiniteMap,
    FuzzySet,
    GroupError,
    all_fuzzy_sets,
    builtin_group,
    constant_map,
    cyclic_group,
    fz_char,
    fz_const,
    fz_inv,
    fz_odot,
    fz_times,
    identity_map,
    image,
    is_homomorphism,
    klein_group,
    lift_l,
    make_group,
    preimage,
    product_carrier,
    projection_maps,
    relcomp,
    square_carrier,
    subsethood,
    translate,
    transpose,
)
from topconv.lattice import build_boolean, build_chain

L2 = build_boolean(1)
L3 = build_chain(3, "lukasiewicz")
Z2 = builtin_group("z2")
Z4 = builtin_group("z4")


def test_group_validation():
    with pytest.raises(GroupError, match="associative"):
        make_group(["e", "a"], [[1, 0], [0, 0]])
    with pytest.raises(GroupError, match="identity"):
        make_group(["a", "b"], [[0, 0], [0, 0]])
    with pytest.raises(GroupError, match="inverse"):
        make_group(["e", "a"], [[0, 1], [1, 1]])


def test_builtin_groups():
    assert Z2.identity == 0 and Z2.inv == (0, 1)
    k = klein_group()
    assert all(k.op(a, a) == 0 for a in range(4))
    assert is_homomorphism(identity_map(Z4.carrier), Z4, Z4)
    f = FiniteMap(Z4.carrier, Z4.carrier, (0, 2, 0, 2))  # x -> x^2
    assert is_homomorphism(f, Z4, Z4)


def test_subsethood_examples():
    one = fz_const(L3, Z2.carrier, 2)
    half = fz_const(L3, Z2.carrier, 1)
    assert subsethood(one, one) == L3.top
    assert subsethood(one, half) == 1  # 1 -> 1/2 in the Lukasiewicz chain
    assert subsethood(half, one) == L3.top


def test_subsethood_top_iff_pointwise_leq():
    for lam in all_fuzzy_sets(L3, Z2.carrier):
        for mu in all_fuzzy_sets(L3, Z2.carrier):
            assert (subsethood(lam, mu) == L3.top) == lam.leq(mu)


def test_domain_mismatch():
    lam = fz_const(L2, Z2.carrier, 1)
    mu = fz_const(L2, Z4.carrier, 1)
    with pytest.raises(DomainMismatch):
        subsethood(lam, mu)


def test_zadeh_identity_map():
    f = identity_map(Z2.carrier)
    for lam in all_fuzzy_sets(L3, Z2.carrier):
        assert image(f, lam) == lam
        assert preimage(f, lam) == lam


def test_zadeh_constant_map_collapses():
    f = constant_map(Z4.carrier, Z4.carrier, 0)
    for lam in all_fuzzy_sets(L2, Z4.carrier):
        img = image(f, lam)
        assert img.values[0] == lam.height()
        assert all(v == L2.bot for v in img.values[1:])


def test_zadeh_roundtrip_bound():
    maps = [
        FiniteMap(Z2.carrier, Z2.carrier, g)
        for g in itertools.product(range(2), repeat=2)
    ]
    for f in maps:
        for lam in all_fuzzy_sets(L3, Z2.carrier):
            assert lam.leq(preimage(f, image(f, lam)))


def test_odot_boolean_characteristics():
    chi_a = fz_char(L2, Z2.carrier, 1)
    chi_e = fz_char(L2, Z2.carrier, 0)
    assert fz_odot(Z2, chi_a, chi_a) == chi_e


def test_translate_matches_odot_with_characteristic():
    for x in range(Z4.size):
        chi = fz_char(L3, Z4.carrier, x)
        for lam in all_fuzzy_sets(L3, Z4.carrier):
            assert translate(Z4, x, lam) == fz_odot(Z4, chi, lam)


def test_translate_identity_and_composition():
    for lam in all_fuzzy_sets(L3, Z4.carrier):
        assert translate(Z4, Z4.identity, lam) == lam
        for x in range(Z4.size):
            for y in range(Z4.size):
                assert translate(Z4, Z4.op(x, y), lam) == translate(
                    Z4, x, translate(Z4, y, lam)
                )


def test_inverse_involution():
    for lam in all_fuzzy_sets(L3, Z4.carrier):
        assert fz_inv(Z4, fz_inv(Z4, lam)) == lam


def test_times_and_projections():
    sq = square_carrier(Z2.carrier)
    p1, p2 = projection_maps(sq)
    for lam in all_fuzzy_sets(L3, Z2.carrier):
        for mu in all_fuzzy_sets(L3, Z2.carrier):
            prod = fz_times(lam, mu)
            assert prod == preimage(p1, lam).meet(preimage(p2, mu))


def test_lift_boolean_example():
    chi_a = fz_char(L2, Z2.carrier, 1)
    lifted = lift_l(Z2, chi_a)
    # x^-1 y = a exactly on the antidiagonal
    assert lifted.values == (0, 1, 1, 0)


def test_transpose_involution_and_lift():
    for lam in all_fuzzy_sets(L2, Z2.carrier):
        lifted = lift_l(Z2, lam)
        assert transpose(transpose(lifted)) == lifted
        assert transpose(lifted) == lift_l(Z2, fz_inv(Z2, lam))


def test_relcomp_uses_star():
    sq = square_carrier(Z2.carrier)
    half = fz_const(L3, sq, 1)
    comp = relcomp(half, half)
    # 1/2 * 1/2 = 0 in the Lukasiewicz chain, join over z stays 0
    assert comp == fz_const(L3, sq, 0)
    godel = build_chain(3, "godel")
    half_g = fz_const(godel, sq, 1)
    assert relcomp(half_g, half_g) == fz_const(godel, sq, 1)


@settings(max_examples=60)
@given(st.data())
def test_odot_meet_bound_sampled(data):
    pick = st.tuples(*([st.integers(0, 2)] * 4))
    sets = [FuzzySet(L3, Z4.carrier, data.draw(pick)) for _ in range(4)]
    l1, l2, m1, m2 = sets
    lhs = fz_odot(Z4, l1.meet(l2), m1.meet(m2))
    rhs = fz_odot(Z4, l1, m1).meet(fz_odot(Z4, l2, m2))
    assert lhs.leq(rhs)


@settings(max_examples=60)
@given(st.data())
def test_subsethood_odot_bound_sampled(data):
    pick = st.tuples(*([st.integers(0, 2)] * 4))
    l1, m1, l2, m2 = [FuzzySet(L3, Z4.carrier, data.draw(pick)) for _ in range(4)]
    lhs = L3.meet(subsethood(l1, m1), subsethood(l2, m2))
    assert L3.leq(lhs, subsethood(fz_odot(Z4, l1, l2), fz_odot(Z4, m1, m2)))


def test_product_carrier_indexing():
    pc = product_carrier(Z2.carrier, Z4.carrier)
    for i in range(Z2.size):
        for j in range(Z4.size):
            assert pc.split(pc.pair(i, j)) == (i, j)
    assert pc.labels[pc.pair(1, 2)] == "(a,a2)"
