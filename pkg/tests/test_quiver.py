import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentle_jordan.fixtures import fixture_names, load_fixture
from gentle_jordan.quiver import (
    GentleQuiver,
    NotGentle,
    QuiverError,
    algebra_basis,
    check_admissible,
    random_gentle_quiver,
    validate_gentle,
)


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_are_gentle(name):
    assert validate_gentle(load_fixture(name)).ok


def test_eight_vertex_basis():
    q = load_fixture("eight")
    basis = algebra_basis(q)
    words = {"".join(reversed(p.arrows)) for p in basis if p.arrows}
    assert len(basis) == 20
    assert {"cd", "eg", "gf", "ab", "egf"} <= words


def test_basis_of_a2():
    assert [p.length for p in algebra_basis(load_fixture("a2"))] == [0, 0, 1]


def test_construction_errors():
    with pytest.raises(QuiverError):
        GentleQuiver(["1", "1"], [])
    with pytest.raises(QuiverError):
        GentleQuiver(["1"], [("a", "1", "2")])
    with pytest.raises(QuiverError):
        GentleQuiver(["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")], [("a", "b")])


def test_every_violation_reported():
    q = GentleQuiver(
        ["1", "2", "3", "4", "5"],
        [("a", "1", "2"), ("b", "3", "2"), ("c", "4", "2"), ("d", "2", "5")],
    )
    rules = {v.rule for v in validate_gentle(q).violations}
    assert "in-degree" in rules
    assert "predecessor-free" in rules
    with pytest.raises(NotGentle):
        q.require_gentle()


def test_disconnected_is_a_violation():
    q = GentleQuiver(["1", "2"], [])
    assert [v.rule for v in validate_gentle(q).violations] == ["connected"]


def test_free_loop_not_admissible():
    q = GentleQuiver(["1"], [("x", "1", "1")])
    assert check_admissible(q) == ["x"]
    assert not validate_gentle(q).ok
    bound = GentleQuiver(["1"], [("x", "1", "1")], [("x", "x")])
    assert validate_gentle(bound).ok
    assert len(algebra_basis(bound)) == 2


def test_opposite_is_involutive():
    q = load_fixture("ten")
    back = q.opposite().opposite()
    assert back.arrows == q.arrows and set(back.relations) == set(q.relations)


@given(st.integers(0, 10**6), st.booleans())
def test_random_quivers_validate(seed, loops):
    q = random_gentle_quiver(random.Random(seed), loops=loops)
    assert validate_gentle(q).ok
    assert validate_gentle(q.opposite()).ok
