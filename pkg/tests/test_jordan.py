import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from generators import random_module_at, structural_pairs
from gentle_jordan.dsl import module_from_text, parse_jf
from gentle_jordan.fields import PrimeField
from gentle_jordan.fixtures import load_fixture
from gentle_jordan.jordan import (
    conjugate,
    construct_shift_endo,
    dominance_leq,
    endo_jordan_data,
    genjf,
    genjf_oracle,
    genjf_structural,
    jordan_type,
    partition_from_ranks,
)
from gentle_jordan.representations import is_endomorphism
from gentle_jordan.strings import PreconditionFailed

F2 = PrimeField(2)

partitions = st.lists(st.integers(1, 6), max_size=6).map(lambda p: tuple(sorted(p, reverse=True)))


@given(partitions)
def test_conjugate_is_an_involution(p):
    assert conjugate(conjugate(p)) == p
    assert sum(conjugate(p)) == sum(p)


@given(st.integers(1, 8))
def test_dominance_is_a_partial_order(n):
    parts = list(_partitions_of(n))
    for a in parts:
        assert dominance_leq(a, a)
        for b in parts:
            if dominance_leq(a, b) and dominance_leq(b, a):
                assert a == b
            # dominance reverses under conjugation
            assert dominance_leq(a, b) == dominance_leq(conjugate(b), conjugate(a))
            for c in parts:
                if dominance_leq(a, b) and dominance_leq(b, c):
                    assert dominance_leq(a, c)


def _partitions_of(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions_of(n - k, k):
            yield (k,) + rest


def test_dominance_examples():
    assert dominance_leq((2, 2), (3, 1))
    assert not dominance_leq((3, 3), (4, 1, 1)) and not dominance_leq((4, 1, 1), (3, 3))
    with pytest.raises(ValueError):
        dominance_leq((1,), (2,))


@given(partitions)
def test_partition_from_ranks_inverts_jordan_matrix(p):
    n = sum(p)
    m = F2.zeros((n, n))
    pos = 0
    for size in p:
        for i in range(size - 1):
            m[pos + i + 1, pos + i] = 1
        pos += size
    assert jordan_type(F2, m) == p
    ranks = [n - sum(min(k, s) for s in p) for k in range(max(p, default=0) + 1)]
    assert partition_from_ranks(ranks) == p


@pytest.mark.parametrize("key", [f"{n}:{' + '.join(t)}" for n, t in oracles.GENJF_CASES])
def test_oracle_matches_brute_force(key, frozen):
    name, terms = key.split(":", 1)
    q = load_fixture(name)
    x = module_from_text(q, " + ".join(f"M({t.strip()})" for t in terms.split(" + ")), F2)
    res = genjf_oracle(x, prime=2)
    assert res.exhaustive
    assert str(res.jf) == frozen["genjf"][key]


def test_structural_on_star4():
    q = load_fixture("star4")
    x = module_from_text(q, "M(e_1) + M(a) + M(c^-1 a) + M(b a)", F2)
    assert str(genjf_structural(x, "1")) == "1:[4];2:[3];3:[1];4:[1]"
    n = construct_shift_endo(x, "1")
    assert is_endomorphism(x, n)
    assert str(endo_jordan_data(x, n)) == "1:[4];2:[3];3:[1];4:[1]"


def test_single_vertex_power():
    q = load_fixture("chain3")
    x = module_from_text(q, "M(e_2)^4", F2)
    assert str(genjf(x, vertex_hint="2").jf) == "1:[0];2:[4];3:[0]"
    assert str(genjf(x, engine="oracle").jf) == "1:[0];2:[4];3:[0]"


def test_structural_refuses_bad_vertex():
    q = load_fixture("star4")
    x = module_from_text(q, "M(b) + M(a)", F2)
    with pytest.raises(PreconditionFailed):
        genjf(x, vertex_hint="2", engine="structural")
    assert genjf(x, vertex_hint="2").engine == "exhaustive"


def test_thread_count_does_not_change_answer():
    q = load_fixture("star4")
    x = module_from_text(q, "M(b) + M(a) + M(c^-1 a) + M(c)", F2)
    one = genjf_oracle(x, 2, budget=1 << 10, seed=3, threads=1)
    four = genjf_oracle(x, 2, budget=1 << 10, seed=3, threads=4)
    assert str(one.jf) == str(four.jf) == "1:[2];2:[3,1];3:[2];4:[1]"
    assert [str(j) for j in one.maximal] == [str(j) for j in four.maximal]


@given(st.integers(0, 10**6))
def test_shift_endo_reaches_structural_value(seed):
    rng = random.Random(seed)
    pairs = structural_pairs()
    q, m = pairs[rng.randrange(len(pairs))]
    x, _ = random_module_at(rng, q, m, F2, max_mult=2)
    n = construct_shift_endo(x, m)
    assert is_endomorphism(x, n)
    expected = genjf_structural(x, m)
    assert endo_jordan_data(x, n) == expected
    assert expected == parse_jf(str(expected), q.vertices)
