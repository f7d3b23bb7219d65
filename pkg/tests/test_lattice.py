"""Lattice construction, law verification, and flag computation."""

import itertools

import pytest
from hypothesis import given, strategies as st

from topconv.lattice import (
    LatticeError,
    build_boolean,
    build_chain,
    build_from_tables,
    verify_axioms,
)


def all_pass(entries):
    return all(e.ok for e in entries)


def entry(entries, name):
    return next(e for e in entries if e.name == name)


def test_two_chain_is_boolean():
    lat = build_chain(2, "godel")
    assert lat.size == 2
    assert lat.is_frame and lat.is_cd and lat.is_mv
    assert lat.star_t == lat.meet_t


def test_lukasiewicz_three_chain_values():
    lat = build_chain(3, "lukasiewicz")
    # expected values derived by scanning all c with star(a, c) <= b
    half = 1
    assert lat.star(half, half) == 0
    best = lat.join_all(c for c in range(3) if lat.leq(lat.star(half, c), 0))
    assert best == half
    assert lat.arrow(half, 0) == half


def test_godel_three_chain_arrow():
    lat = build_chain(3, "godel")
    best = lat.join_all(c for c in range(3) if lat.leq(lat.star(1, c), 0))
    assert best == 0
    assert lat.arrow(1, 0) == 0


def test_chain_rejects_small_n():
    with pytest.raises(LatticeError):
        build_chain(1, "godel")
    with pytest.raises(LatticeError):
        build_chain(3, "product")


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("flavor", ["lukasiewicz", "godel"])
def test_chain_axioms(n, flavor):
    lat = build_chain(n, flavor)
    entries = verify_axioms(lat)
    assert all_pass(entries)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_boolean_axioms_and_flags(k):
    lat = build_boolean(k)
    assert all_pass(verify_axioms(lat))
    assert lat.is_frame and lat.is_cd and lat.is_mv
    assert lat.top == lat.size - 1 and lat.bot == 0


def test_boolean_1_equals_two_chain():
    b = build_boolean(1)
    c = build_chain(2, "godel")
    assert b.star_t == c.star_t and b.arrow_t == c.arrow_t


def test_mv_flags_on_chains():
    for n in range(2, 7):
        assert build_chain(n, "lukasiewicz").is_mv
    for n in range(3, 7):
        lat = build_chain(n, "godel")
        assert not lat.is_mv
        e = entry(verify_axioms(lat), "flag-mv")
        assert e.detail == "is_mv=False"
        assert e.witness is not None and "b=0" in e.witness


def test_adjunction_exhaustive():
    for lat in (build_chain(4, "lukasiewicz"), build_chain(5, "godel"), build_boolean(2)):
        for a, b, c in itertools.product(range(lat.size), repeat=3):
            assert lat.leq(lat.star(a, c), b) == lat.leq(c, lat.arrow(a, b))


def test_i_properties_reported():
    entries = verify_axioms(build_chain(3, "lukasiewicz"))
    for name in ("I1", "I2", "I3", "I4", "I5"):
        assert entry(entries, name).ok


def test_frame_implies_cd():
    for lat in (build_chain(4, "godel"), build_boolean(2), build_boolean(3)):
        if lat.is_frame:
            assert lat.is_cd


def test_from_tables_roundtrip_godel():
    lat = build_from_tables(
        ["0", "h", "1"],
        [(0, 1), (1, 2)],
        [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
    )
    assert lat.is_frame
    assert all_pass(verify_axioms(lat))


def test_from_tables_diamond_meet():
    # four-element diamond with star = meet
    labels = ["0", "x", "y", "1"]
    leq = [(0, 1), (0, 2), (1, 3), (2, 3)]
    meet = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]]
    lat = build_from_tables(labels, leq, meet)
    assert lat.is_frame and all_pass(verify_axioms(lat))


def test_from_tables_no_unit():
    with pytest.raises(LatticeError, match="no-unit"):
        build_from_tables(
            ["0", "h", "1"],
            [(0, 1), (1, 2)],
            [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        )


def test_from_tables_not_a_lattice():
    # two incomparable elements with no upper bound
    with pytest.raises(LatticeError, match="not-a-lattice|top"):
        build_from_tables(["a", "b"], [], [[0, 0], [0, 1]])


def test_from_tables_names_offending_triple():
    # non-associative star on the 3-chain
    bad = [[0, 0, 0], [0, 2, 1], [0, 1, 2]]
    with pytest.raises(LatticeError) as exc:
        build_from_tables(["0", "h", "1"], [(0, 1), (1, 2)], bad)
    assert exc.value.witness


def test_flags_deterministic_and_idempotent():
    a = build_chain(4, "lukasiewicz")
    b = build_chain(4, "lukasiewicz")
    assert (a.is_mv, a.is_cd, a.is_frame) == (b.is_mv, b.is_cd, b.is_frame)
    assert a == b


@given(st.integers(2, 6), st.sampled_from(["lukasiewicz", "godel"]), st.data())
def test_residuum_is_greatest_solution(n, flavor, data):
    lat = build_chain(n, flavor)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    r = lat.arrow(a, b)
    assert lat.leq(lat.star(a, r), b)
    for c in range(n):
        if lat.leq(lat.star(a, c), b):
            assert lat.leq(c, r)
