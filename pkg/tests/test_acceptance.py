"""Acceptance suite: one test per criterion, each timed against its limit.

A PASS/FAIL line per criterion is printed in the terminal summary (and to
stdout when run with ``-s``).
"""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from generators import random_module_at, random_quivers, structural_pairs
from gentle_jordan.dsl import module_from_text, parse_jf, parse_string
from gentle_jordan.fields import QQ, PrimeField
from gentle_jordan.fixtures import fixture_names, load_fixture
from gentle_jordan.jordan import (
    construct_shift_endo,
    end_space,
    endo_jordan_data,
    genjf,
    genjf_oracle,
    genjf_structural,
)
from gentle_jordan.quiver import algebra_basis, random_gentle_quiver, validate_gentle
from gentle_jordan.recoverability import NoSolution, condition_flags, decide, find_witness, recover, verify_witness
from gentle_jordan.representations import (
    Representation,
    band_module,
    decompose_ledgered,
    hom_dim_combinatorial,
    hom_space,
    string_module,
)
from gentle_jordan.strings import rotate, strings_through_by_length

F2, F5 = PrimeField(2), PrimeField(5)
RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number, title, limit):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        status = "PASS" if elapsed < limit else "FAIL"
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    finally:
        elapsed = time.perf_counter() - t0
        line = f"{status} criterion {number}: {title} ({elapsed:.2f}s, limit {limit}s)"
        RESULTS[number] = line
        print(line)


def test_criterion_1_validation_and_basis():
    with criterion(1, "eight-vertex quiver is gentle with a 20-element basis", 1):
        q = load_fixture("eight")
        assert validate_gentle(q).ok
        basis = algebra_basis(q)
        assert len(basis) == 20
        words = {"".join(reversed(p.arrows)) for p in basis}
        assert {"cd", "eg", "gf", "ab", "egf"} <= words


def test_criterion_2_hom_counting():
    with criterion(2, "Hom dimensions by substrings and by linear algebra", 10):
        q = load_fixture("morphisms")
        s = lambda t: parse_string(q, t)
        pairs = {("e_1", "a"): 0, ("e_1", "b"): 0, ("a", "a"): 1, ("a", "b"): 0, ("c", "a"): 0, ("c", "b"): 0}
        for (u, v), expected in pairs.items():
            assert hom_dim_combinatorial(s(u), s(v)) == expected
            assert len(hom_space(string_module(q, s(u), QQ), string_module(q, s(v), QQ))) == expected
        x = module_from_text(q, "M(e_1) + M(a) + M(c)^2", QQ)
        y = module_from_text(q, "M(a) + M(b)", QQ)
        by_count = sum(hom_dim_combinatorial(a.word, b.word) for a in x.ledger for b in y.ledger)
        assert by_count == len(hom_space(x, y)) == 1
        checked = 0
        for name in fixture_names():
            q = load_fixture(name)
            words = {}
            for m in q.vertices:
                for w in strings_through_by_length(q, m, 5):
                    words.setdefault(w.key, w)
            mods = {k: string_module(q, w, F2) for k, w in words.items()}
            for (ku, u), (kv, v) in itertools.product(words.items(), repeat=2):
                assert hom_dim_combinatorial(u, v) == len(hom_space(mods[ku], mods[kv])), (name, str(u), str(v))
                checked += 1
        assert checked > 5000


GENJF_TABLE = [
    ("a2", "M(e_1) + M(e_2)", "1:[1];2:[1]"),
    ("a2", "M(a)", "1:[1];2:[1]"),
    ("chain3", "M(a) + M(e_2) + M(b)", "1:[1];2:[3];3:[1]"),
    ("star4", "M(e_1) + M(a) + M(c^-1 a) + M(b a)", "1:[4];2:[3];3:[1];4:[1]"),
    ("fork", "M(c a)^2", "1:[2];2:[2];3:[2]"),
    ("fork", "M(e_1) + M(c b^-1 c a)", "1:[2];2:[2];3:[2]"),
    ("star4", "M(b) + M(a) + M(c^-1 a) + M(c)", "1:[2];2:[3,1];3:[2];4:[1]"),
    ("star4", "M(b a) + M(e_2) + M(c^-1 a) + M(c)", "1:[2];2:[3,1];3:[2];4:[1]"),
    ("triangle", "M(beta^-1 gamma)", "1:[1];2:[1];3:[1]"),
    ("triangle", "M(alpha beta^-1)", "1:[1];2:[1];3:[1]"),
]


def test_criterion_3_genjf_values():
    with criterion(3, "generic Jordan forms of the worked examples", 120):
        for name, expr, expected in GENJF_TABLE:
            q = load_fixture(name)
            res = genjf(module_from_text(q, expr, F2), engine="oracle", prime=2, escalate=(3,))
            assert res.engine == "exhaustive", (name, expr)
            assert str(res.jf) == expected, (name, expr, str(res.jf))


def test_criterion_4_structural_agreement():
    with criterion(4, "structural value = shift endomorphism = search, 200 modules", 300):
        rng = random.Random(2024)
        pairs = structural_pairs()
        for _ in range(200):
            q, m = pairs[rng.randrange(len(pairs))]
            x, mult = random_module_at(rng, q, m, F5, max_mult=3)
            expected = genjf_structural(x, m)
            assert endo_jordan_data(x, construct_shift_endo(x, m)) == expected
            res = genjf_oracle(x, prime=5)
            assert res.exhaustive, (q.name, m, mult)
            assert res.jf == expected, (q.name, m, mult)


VERDICTS = [
    ("chain3", "2", True, True),
    ("star4", "1", True, True),
    ("star4", "3", True, True),
    ("star4", "4", True, True),
    ("star4", "2", False, None),
    ("cycle3", "2", True, False),
    ("triangle", "1", False, None),
    ("fork", "1", False, None),
    ("kronecker", "1", False, None),
    ("kronecker", "2", False, None),
]


def test_criterion_5_verdict_table():
    with criterion(5, "recoverability verdicts on the worked examples", 5):
        for name, m, jr, cjr in VERDICTS:
            r = decide(load_fixture(name), m)
            assert r.jr == jr, (name, m)
            if cjr is not None:
                assert r.cjr == cjr, (name, m)


def test_criterion_6_witness_completeness():
    with criterion(6, "every failing vertex has a verified witness", 600):
        cases = [(load_fixture(n), m) for n in fixture_names() for m in load_fixture(n).vertices]
        for q in random_quivers(50, seed=6, max_vertices=6):
            cases += [(q, m) for m in q.vertices]
        witnesses = exhaustive = 0
        for q, m in cases:
            r = decide(q, m)
            if r.jr and r.cjr:
                continue
            w = find_witness(q, m, report=r)
            log = verify_witness(w)
            witnesses += 1
            if len(end_space(w.x)) <= 12:
                assert all("sampled" not in line for line in log), (q.name, m)
                exhaustive += 1
        assert witnesses > 50 and exhaustive > 0


def test_criterion_7_recovery_round_trip():
    with criterion(7, "recovery round trip on the chain at vertex 2", 30):
        q = load_fixture("chain3")
        for a, b, c in itertools.product(range(1, 4), repeat=3):
            x = module_from_text(q, f"M(a)^{a} + M(e_2)^{b} + M(b)^{c}", F5)
            lam = genjf(x, engine="oracle", prime=5).jf
            assert lam == parse_jf(f"1:[{a}];2:[{a + b + c}];3:[{c}]", q.vertices)
            back = recover(q, "2", lam, prime=5)
            assert decompose_ledgered(back, x) == "iso", (a, b, c)
        with pytest.raises(NoSolution):
            recover(q, "2", parse_jf("1:[1];2:[1];3:[1]", q.vertices))


def test_criterion_8_implication_chain():
    with criterion(8, "i => i* => o => minuscule on fixtures and 500 random quivers", 60):
        quivers = [load_fixture(n) for n in fixture_names()]
        rng = random.Random(8)
        quivers += [random_gentle_quiver(rng, loops=i % 2 == 1) for i in range(500)]
        for q in quivers:
            for m in q.vertices:
                f = condition_flags(q, m)
                assert f.i <= f.istar <= f.o <= f.minuscule, (q.name, m, f.as_dict())


def test_criterion_9_band_rules():
    with criterion(9, "band modules over GF(5): relations, rotation and inversion", 30):
        q = load_fixture("double_kronecker")
        w = parse_string(q, "b^-1 c^-1 d a")
        bare = lambda r: Representation(r.quiver, r.field, r.dims, r.maps)
        for lam, d in itertools.product(range(1, 5), range(1, 4)):
            base = band_module(q, w, lam, d, F5, canonicalize=False)
            assert not base.relation_defects()
            for r in range(w.length):
                rot = band_module(q, rotate(w, r), lam, d, F5, canonicalize=False)
                assert not rot.relation_defects()
                assert decompose_ledgered(base, rot) == "iso"
                assert decompose_ledgered(bare(base), bare(rot)) == "iso"
            inv = band_module(q, w.inverse(), F5.inv(lam), d, F5, canonicalize=False)
            assert decompose_ledgered(base, inv) == "iso"
            assert decompose_ledgered(bare(base), bare(inv)) == "iso"
            if lam != F5.inv(lam):
                wrong = band_module(q, w.inverse(), lam, d, F5, canonicalize=False)
                assert decompose_ledgered(base, wrong) == "not-iso"
                assert decompose_ledgered(bare(base), bare(wrong)) == "not-iso"
