"""Seeded generators shared by the property and acceptance tests."""

import random

from gentle_jordan.fixtures import fixture_names, load_fixture
from gentle_jordan.quiver import random_gentle_quiver
from gentle_jordan.representations import Summand, from_summands
from gentle_jordan.strings import endpoints_unique, single_arrows_bound, strings_through


def random_quivers(count, seed, **kw):
    rng = random.Random(seed)
    return [random_gentle_quiver(rng, name=f"r{seed}_{i}", **kw) for i in range(count)]


def structural_pairs():
    """(quiver, vertex) pairs from the fixtures where the structural route applies."""
    out = []
    for name in fixture_names():
        q = load_fixture(name)
        for m in q.vertices:
            if endpoints_unique(q, m)[0] and single_arrows_bound(q, m):
                out.append((q, m))
    return out


def random_module_at(rng, q, m, field, max_mult=3, max_kinds=None):
    """A ledgered sum of string modules through ``m``, each with multiplicity
    between 0 and ``max_mult`` (not all zero)."""
    words = strings_through(q, m)
    if max_kinds is not None and len(words) > max_kinds:
        words = rng.sample(words, max_kinds)
    while True:
        mult = [rng.randint(0, max_mult) for _ in words]
        if any(mult):
            break
    summands = [Summand("string", w) for w, k in zip(words, mult) for _ in range(k)]
    rng.shuffle(summands)
    return from_summands(q, summands, field), dict(zip(map(str, words), mult))
