import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from gentle_jordan.dsl import parse_quiver, parse_string
from gentle_jordan.fixtures import fixture_names, load_fixture
from gentle_jordan.quiver import Letter, random_gentle_quiver
from gentle_jordan.strings import (
    InfiniteFamily,
    PreconditionFailed,
    band_canonical,
    brenner_compare,
    condition_o,
    delta,
    endpoints_unique,
    enumerate_bands,
    extend_end,
    extend_start,
    is_band,
    is_maximal,
    is_minuscule,
    is_valid_string,
    join,
    make_word,
    maximal_strings_through,
    rotate,
    single_arrows_bound,
    strings_from,
    strings_through,
    substring_occurrences,
)


def as_pairs(w):
    return [(l.arrow, l.sign) for l in w.letters]


@pytest.mark.parametrize("name", fixture_names())
def test_string_counts_match_brute_force(name, frozen):
    q = load_fixture(name)
    for m in q.vertices:
        assert len(strings_through(q, m, cap=4)) == frozen["string_counts"][name][m], m


@pytest.mark.parametrize("name", fixture_names())
def test_enumerated_strings_are_strings(name):
    q = load_fixture(name)
    for m in q.vertices:
        for w in strings_through(q, m, cap=4):
            assert is_valid_string(q, w) and m in w.vertices
            assert oracles.word_ok(q, as_pairs(w))


def test_chain3_strings_at_2():
    q = load_fixture("chain3")
    assert sorted(map(str, strings_through(q, "2"))) == ["a", "b", "e_2"]


def test_star4_maximal_strings():
    q = load_fixture("star4")
    assert sorted(map(str, maximal_strings_through(q, "2"))) == ["b a", "c^-1 a"]
    assert [str(w) for w in maximal_strings_through(q, "4")] == ["b a"]


def test_infinite_family_detected():
    q = load_fixture("kronecker")
    with pytest.raises(InfiniteFamily):
        strings_through(q, "1")
    assert not condition_o(q, "1")[0]


def test_string_rules():
    q = load_fixture("chain3")
    assert not is_valid_string(q, parse_string(q, "b a"))  # a then b is zero
    assert extend_end(q, parse_string(q, "a"), Letter("b", 1)) is None
    q = load_fixture("star4")
    ca = parse_string(q, "c^-1 a")
    assert extend_start(q, parse_string(q, "c^-1"), Letter("a", 1)) == ca
    assert join(q, parse_string(q, "a"), parse_string(q, "c^-1")) == ca
    assert join(q, parse_string(q, "c"), parse_string(q, "b")) is None
    assert is_maximal(q, parse_string(q, "b a")) and not is_maximal(q, parse_string(q, "a"))


def test_delta_on_star4():
    q = load_fixture("star4")
    assert delta(q, "1") == {"1": 0, "2": 1, "3": 2, "4": 2}
    assert delta(q, "4")["3"] == math.inf
    with pytest.raises(PreconditionFailed):
        delta(load_fixture("triangle"), "1")


def test_endpoint_collision_reported():
    assert endpoints_unique(load_fixture("cycle3"), "1") == (True, None)
    # a 2-cycle with both composites zero: x1 and x2^-1 both run from 1 to 2
    q = parse_quiver("vertex 1 2\narrow x1: 1 -> 2\narrow x2: 2 -> 1\nrel x1 x2\nrel x2 x1\n")
    assert condition_o(q, "1")[0]
    ok, pair = endpoints_unique(q, "1")
    assert not ok and {str(w) for w in pair} == {"x1", "x2^-1"}


def test_minuscule():
    assert is_minuscule(load_fixture("star4"), "2")
    assert not is_minuscule(load_fixture("kronecker"), "1")


def random_strings(seed, count=6):
    rng = random.Random(seed)
    q = random_gentle_quiver(rng, loops=True)
    out = []
    for _ in range(count):
        w = make_word(q, [], start=rng.choice(q.vertices))
        for _ in range(rng.randint(0, 5)):
            nxt = [x for l in q.letters() if (x := extend_end(q, w, l)) is not None]
            if not nxt:
                break
            w = rng.choice(nxt)
        out.append(w)
    return q, out


@given(st.integers(0, 10**6))
def test_occurrence_flags(seed):
    q, words = random_strings(seed)
    for w in words:
        occ = substring_occurrences(w)
        k = w.length
        assert len(occ) == (k + 1) * (k + 2) // 2
        whole = [o for o in occ if (o.start, o.end) == (0, k)]
        assert whole[0].on_top and whole[0].at_bottom
        for o in occ:
            assert o.word.vertices == w.vertices[o.start : o.end + 1]
            if 0 < o.start:
                left = w.letters[o.start - 1].sign
                assert o.on_top <= (left == -1) and o.at_bottom <= (left == 1)
            if o.end < k:
                right = w.letters[o.end].sign
                assert o.on_top <= (right == 1) and o.at_bottom <= (right == -1)


@given(st.integers(0, 10**6))
def test_canonical_form(seed):
    q, words = random_strings(seed)
    for w in words:
        inv = w.inverse()
        assert inv.inverse() == w
        assert w.canonical() == inv.canonical()
        assert w.key == inv.key
        assert is_valid_string(q, inv) == is_valid_string(q, w)


@given(st.integers(0, 10**6))
def test_delta_is_position_along_strings(seed):
    q = random_gentle_quiver(random.Random(seed))
    for m in q.vertices:
        if not endpoints_unique(q, m)[0]:
            continue
        d = delta(q, m)
        assert d[m] == 0
        for w in strings_from(q, m):
            assert d[w.target] == w.length
            for i, v in enumerate(w.vertices):
                assert d[v] == i


@given(st.integers(0, 10**6))
def test_brenner_order_is_total_on_strings_from_a_vertex(seed):
    q = random_gentle_quiver(random.Random(seed))
    for m in q.vertices:
        if not (condition_o(q, m)[0] and single_arrows_bound(q, m)):
            continue
        ws = strings_from(q, m)
        for u in ws:
            assert brenner_compare(u, u) == 0
            for v in ws:
                assert brenner_compare(u, v) == -brenner_compare(v, u)
                for x in ws:
                    if brenner_compare(u, v) <= 0 and brenner_compare(v, x) <= 0:
                        assert brenner_compare(u, x) <= 0


def test_double_kronecker_band():
    q = load_fixture("double_kronecker")
    w = parse_string(q, "b^-1 c^-1 d a")
    assert is_band(q, w)
    keys = {band_canonical(x)[0] for x in enumerate_bands(q, 4)}
    assert band_canonical(w)[0] in keys
    for r in range(4):
        assert band_canonical(rotate(w, r))[0] == band_canonical(w)[0]
        assert band_canonical(rotate(w.inverse(), r)) == (band_canonical(w)[0], not band_canonical(w)[1])


def test_powers_are_not_bands():
    q = load_fixture("double_kronecker")
    w = parse_string(q, "b^-1 c^-1 d a")
    square = make_word(q, w.letters * 2)
    assert not is_band(q, square)
    assert not is_band(load_fixture("chain3"), parse_string(load_fixture("chain3"), "a"))
