import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentle_jordan.dsl import (
    DSLError,
    emit_quiver,
    module_from_text,
    parse_jf,
    parse_module,
    parse_quiver,
    parse_string,
)
from gentle_jordan.fields import PrimeField
from gentle_jordan.fixtures import fixture_names, fixture_text, load_fixture
from gentle_jordan.quiver import random_gentle_quiver
from gentle_jordan.strings import InvalidString


def test_comments_and_blank_lines():
    q = parse_quiver("# header\n\nquiver t\nvertex 1 2  # two\narrow a: 1 -> 2\n")
    assert q.name == "t" and q.vertices == ("1", "2") and list(q.arrows) == ["a"]


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("vertex 1 2\narrow a: 1 -> 3\n", 2, 15),
        ("vertex 1 2\narrow a: 1 -> 2\nrel a z\n", 3, 7),
        ("vertex 1 2\n  bogus\n", 2, 3),
        ("vertex 1 1\n", 1, 10),
        ("vertex 1 2\narrow a 1 2\n", 2, 1),
    ],
)
def test_errors_carry_position(text, line, column):
    with pytest.raises(DSLError) as err:
        parse_quiver(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_relation_must_compose():
    with pytest.raises(DSLError, match="not a path"):
        parse_quiver("vertex 1 2 3\narrow a: 1 -> 2\narrow b: 3 -> 2\nrel a b\n")


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_roundtrip(name):
    q = load_fixture(name)
    again = parse_quiver(emit_quiver(q))
    assert emit_quiver(again) == emit_quiver(q)
    assert parse_quiver(fixture_text(name)).relations == q.relations


@given(st.integers(0, 10**6))
def test_random_roundtrip(seed):
    q = random_gentle_quiver(random.Random(seed), loops=True)
    again = parse_quiver(emit_quiver(q))
    assert (again.vertices, again.arrows, again.relations) == (q.vertices, q.arrows, q.relations)


def test_string_literals():
    q = load_fixture("star4")
    w = parse_string(q, "c^-1 a")
    assert str(w) == "c^-1 a" and w.vertices == ("1", "2", "3")
    assert parse_string(q, "c- · a") == w
    assert parse_string(q, "e_4").is_lazy
    with pytest.raises(InvalidString):
        parse_string(q, "a b")  # b starts at 2 but a is read second
    with pytest.raises(InvalidString):
        parse_string(q, "z")


def test_module_expression():
    q = load_fixture("double_kronecker")
    terms = parse_module(q, "M(a)^2 + B(b^-1 c^-1 d a; 2; 3) + M(e_1)")
    assert [(t.kind, t.power) for t in terms] == [("string", 2), ("band", 1), ("string", 1)]
    assert (terms[1].eigenvalue, terms[1].size) == (2, 3)
    x = module_from_text(q, "M(a)^2 + B(b^-1 c^-1 d a; 2; 3)", PrimeField(5))
    assert x.dims == {"1": 2 + 3, "2": 2 + 6, "3": 3}
    with pytest.raises(InvalidString):
        parse_module(q, "M(a) + ")


def test_jordan_data():
    jf = parse_jf("1:[1]; 2:[1,3]; 3:[0]")
    assert str(jf) == "1:[1];2:[3,1];3:[0]"
    assert jf.dims() == {"1": 1, "2": 4, "3": 0}
    assert str(parse_jf("2:[2]", vertices=["1", "2"])) == "1:[0];2:[2]"
    with pytest.raises(ValueError):
        parse_jf("9:[1]", vertices=["1"])
    with pytest.raises(ValueError):
        parse_jf("1:(1)")


@given(st.dictionaries(st.sampled_from("abcd"), st.lists(st.integers(1, 5), max_size=4), min_size=1))
def test_jordan_data_roundtrip(data):
    jf = parse_jf(";".join(f"{v}:[{','.join(map(str, p))}]" for v, p in data.items()))
    assert parse_jf(str(jf)) == jf
