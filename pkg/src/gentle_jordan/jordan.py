"""Jordan types of nilpotent endomorphisms and their generic value.

For a representation ``X`` the generic Jordan form is the dominance-largest
Jordan type (vertex by vertex) of a nilpotent endomorphism of ``X``. Two
independent routes compute it:

* :func:`genjf_structural` reads it off the dimension vector when the vertex
  hint allows it, and :func:`construct_shift_endo` exhibits an endomorphism
  reaching it;
* :func:`genjf_oracle` searches nilpotent endomorphisms over a prime field.

Partitions are tuples of weakly decreasing positive integers. Comparing
nilpotent matrices of the same size, ``λ ⊴ μ`` holds exactly when every power
of the first has rank at most that of the second; the search compares rank
vectors directly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fields as fl
from .dsl import JordanFormData
from .fields import Field, PrimeField
from .representations import (
    Morphism,
    Representation,
    Summand,
    from_summands,
    hom_space,
    is_endomorphism,
    summand_key,
)
from .strings import (
    PreconditionFailed,
    StringWord,
    brenner_leq,
    endpoints_unique,
    single_arrows_bound,
)

Partition = tuple[int, ...]


class NotNilpotent(ValueError):
    pass


def conjugate(p: Sequence[int]) -> Partition:
    p = sorted((x for x in p if x > 0), reverse=True)
    return tuple(sum(1 for x in p if x > i) for i in range(p[0])) if p else ()


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """``lam ⊴ mu`` for partitions of the same integer."""
    lam, mu = sorted(lam, reverse=True), sorted(mu, reverse=True)
    if sum(lam) != sum(mu):
        raise ValueError("partitions of different integers are not comparable")
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a > b:
            return False
    return True


def jf_leq(a: JordanFormData, b: JordanFormData) -> bool:
    da, db = a.as_dict(), b.as_dict()
    return set(da) == set(db) and all(dominance_leq(da[v], db[v]) for v in da)


def partition_from_ranks(ranks: Sequence[int]) -> Partition:
    """Jordan type from ``rank N^0, rank N^1, ...`` (ending at zero)."""
    ranks = list(ranks)
    if ranks and ranks[-1] != 0:
        raise NotNilpotent("rank sequence does not reach zero")
    # number of blocks of size >= i is rank N^(i-1) - rank N^i
    at_least = [ranks[i - 1] - ranks[i] for i in range(1, len(ranks))]
    return conjugate(at_least)


def jordan_type(field: Field, n: np.ndarray) -> Partition:
    """Jordan type of a nilpotent square matrix."""
    seq = fl.powers_rank_sequence(field, n)
    if seq[-1] != 0:
        raise NotNilpotent("matrix is not nilpotent")
    return partition_from_ranks(seq)


def endo_jordan_data(x: Representation, n: Morphism) -> JordanFormData:
    return JordanFormData.from_dict(
        {v: jordan_type(x.field, n.maps[v]) for v in x.quiver.vertices}, x.quiver.vertices
    )


def end_space(x: Representation) -> list[Morphism]:
    return hom_space(x, x)


# structural route

def _oriented_from(w: StringWord, m: str) -> StringWord:
    if w.source == m:
        return w
    if w.target == m:
        return w.inverse()
    raise PreconditionFailed(f"{w} does not start or end at {m}")


def structural_defect(x: Representation, m: str) -> str | None:
    q = x.quiver
    if m not in q.vertices:
        return f"unknown vertex {m}"
    if x.ledger is None:
        return "module has no ledger"
    if not endpoints_unique(q, m)[0]:
        return f"strings from {m} are not determined by their endpoints"
    if not single_arrows_bound(q, m):
        return f"the arrows at {m} do not satisfy the single-arrow condition"
    for s in x.ledger:
        if s.kind != "string":
            return "ledger contains a band module"
        if s.word.visits(m) != 1:
            return f"summand {s.describe()} does not pass through {m} exactly once"
    return None


def genjf_structural(x: Representation, m: str) -> JordanFormData:
    """One Jordan block of full size at every vertex."""
    why = structural_defect(x, m)
    if why:
        raise PreconditionFailed(why)
    return JordanFormData.from_dict(
        {v: ((x.dims[v],) if x.dims[v] else ()) for v in x.quiver.vertices}, x.quiver.vertices
    )


def brenner_sorted(x: Representation, m: str) -> list[int]:
    """Ledger indices sorted increasingly by the order on strings from ``m``;
    isomorphic copies keep their ledger order."""
    words = [_oriented_from(s.word, m) for s in x.ledger]
    order: list[int] = []
    for i in range(len(words)):
        pos = len(order)
        while pos > 0 and not brenner_leq(words[order[pos - 1]], words[i]):
            pos -= 1
        order.insert(pos, i)
    for a, b in zip(order, order[1:]):
        if not brenner_leq(words[a], words[b]):
            raise PreconditionFailed(f"{words[a]} and {words[b]} are not comparable")
    return order


def construct_shift_endo(x: Representation, m: str) -> Morphism:
    """The endomorphism sending each summand's basis vector to that of the
    next smaller summand present at the same vertex (and to zero when that
    summand misses the vertex)."""
    why = structural_defect(x, m)
    if why:
        raise PreconditionFailed(why)
    order = brenner_sorted(x, m)
    rank_of = {s: r for r, s in enumerate(order)}
    maps = {}
    for v in x.quiver.vertices:
        labels = x.labels[v]
        n = x.field.zeros((len(labels), len(labels)))
        at_v = {lab.summand: i for i, lab in enumerate(labels)}
        for s, i in at_v.items():
            r = rank_of[s]
            if r > 0 and order[r - 1] in at_v:
                n[at_v[order[r - 1]], i] = 1
        maps[v] = n
    endo = Morphism(maps)
    if not is_endomorphism(x, endo):
        raise PreconditionFailed("shift map does not commute with the arrows")
    return endo


# search route

@dataclass
class OracleResult:
    jf: JordanFormData
    certificate: Morphism
    exhaustive: bool
    prime: int
    mode: str  # "exhaustive", "top" or "sampled"
    maximal: list[JordanFormData] = field(default_factory=list)
    explored: int = 0
    module: Representation | None = None

    @property
    def unique(self) -> bool:
        return len(self.maximal) == 1


def _scalar_part(field: PrimeField, mats: list[np.ndarray]) -> int | None:
    """The ``c`` with ``E - c`` nilpotent, for an endomorphism of an
    indecomposable given by its vertex matrices; ``None`` if there is none."""
    whole = fl.block_diag(field, mats)
    n = whole.shape[0]
    for c in field.elements():
        if fl.is_nilpotent(field, field.reduce(whole - c * field.eye(n))):
            return c
    return None


def nilpotent_cover(x: Representation) -> list[Morphism] | None:
    """A basis of a linear space of nilpotent endomorphisms meeting every
    conjugacy class of nilpotent endomorphisms of ``x``.

    Every nilpotent endomorphism is conjugate under automorphisms into the
    radical plus strictly triangular multiples of identity maps between
    isomorphic summands. Returns ``None`` when some summand's endomorphism
    ring is not local, in which case the caller searches all of End(x).
    """
    field = x.field
    ledger = x.ledger
    keys = [summand_key(s, field) for s in ledger]
    parts = [from_summands(x.quiver, [s], field) for s in ledger]
    offsets = {v: [] for v in x.quiver.vertices}
    for v in x.quiver.vertices:
        pos = 0
        for part in parts:
            offsets[v].append(pos)
            pos += part.dims[v]
    cache: dict[tuple, list[Morphism]] = {}
    radicals: dict[tuple, list[Morphism] | None] = {}

    def hom(i: int, j: int) -> list[Morphism]:
        key = (keys[i], keys[j])
        if key not in cache:
            cache[key] = hom_space(parts[i], parts[j])
        return cache[key]

    def radical(i: int) -> list[Morphism] | None:
        if keys[i] in radicals:
            return radicals[keys[i]]
        basis = hom(i, i)
        vs = [v for v in x.quiver.vertices if parts[i].dims[v]]
        scalars = [_scalar_part(field, [f.maps[v] for v in vs]) for f in basis]
        if any(c is None for c in scalars) or not any(scalars):
            radicals[keys[i]] = None
            return None
        pivot = next(k for k, c in enumerate(scalars) if c)
        inv = field.inv(scalars[pivot])
        out = []
        for k, f in enumerate(basis):
            if k == pivot:
                continue
            t = scalars[k] * inv % field.p
            out.append(Morphism({v: field.reduce(f.maps[v] - t * basis[pivot].maps[v]) for v in f.maps}))
        radicals[keys[i]] = out
        return out

    def embed(i: int, j: int, f: Morphism) -> Morphism:
        maps = {}
        for v in x.quiver.vertices:
            big = field.zeros((x.dims[v], x.dims[v]))
            r0, c0 = offsets[v][j], offsets[v][i]
            block = f.maps[v]
            big[r0 : r0 + block.shape[0], c0 : c0 + block.shape[1]] = block
            maps[v] = big
        return Morphism(maps)

    cover = []
    for i in range(len(ledger)):
        for j in range(len(ledger)):
            if keys[i] != keys[j]:
                cover += [embed(i, j, f) for f in hom(i, j)]
                continue
            rad = radical(i)
            if rad is None:
                return None
            cover += [embed(i, j, f) for f in rad]
            if i > j:
                ident = Morphism({v: field.eye(parts[i].dims[v]) for v in x.quiver.vertices})
                cover.append(embed(i, j, ident))
    return cover


def _canonical_rebuild(x: Representation, field: PrimeField) -> Representation:
    canon = [
        Summand(s.kind, s.word.canonical(), s.eigenvalue, s.size) if s.kind == "string" else s
        for s in x.ledger
    ]
    return from_summands(x.quiver, canon, field)


class _Search:
    """Rank-vector bookkeeping for batches of candidate endomorphisms."""

    def __init__(self, x: Representation, basis: list[Morphism], p: int, nilpotent_only: bool):
        self.p = p
        self.vertices = [v for v in x.quiver.vertices if x.dims[v]]
        self.dims = [x.dims[v] for v in self.vertices]
        self.stacks = [
            np.stack([f.maps[v] for f in basis]).astype(np.int64) if basis else np.zeros((0, d, d), np.int64)
            for v, d in zip(self.vertices, self.dims)
        ]
        self.filter = not nilpotent_only
        self.top = np.concatenate(
            [np.arange(d - 1, -1, -1) for d in self.dims]
        ).astype(np.int64) if self.dims else np.zeros(0, np.int64)

    def ranks(self, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Rank vectors ``rank N_v^k`` for k = 1..dim v and a nilpotency mask."""
        cols = []
        ok = np.ones(len(coeffs), dtype=bool)
        for stack, d in zip(self.stacks, self.dims):
            n = np.mod(np.tensordot(coeffs, stack, axes=(1, 0)), self.p)
            power = n
            for k in range(d):
                r = fl.batched_rank(power, self.p)
                cols.append(r)
                if k + 1 < d:
                    power = np.mod(np.matmul(power, n), self.p)
            ok &= cols[-1] == 0
        vecs = np.stack(cols, axis=1) if cols else np.zeros((len(coeffs), 0), np.int64)
        return vecs, ok


def _maximal(vectors: dict[tuple, np.ndarray]) -> list[tuple]:
    keys = list(vectors)
    out = []
    for a in keys:
        va = np.array(a)
        if not any(b != a and np.all(va <= np.array(b)) for b in keys):
            out.append(a)
    return sorted(out, reverse=True)


def _jf_from_vector(vertices, dims, all_vertices, vec) -> JordanFormData:
    data, pos = {}, 0
    for v, d in zip(vertices, dims):
        ranks = [d] + [int(r) for r in vec[pos : pos + d]]
        data[v] = partition_from_ranks(ranks)
        pos += d
    return JordanFormData.from_dict(data, all_vertices)


def genjf_oracle(
    x: Representation,
    prime: int = 2,
    budget: int = 1 << 16,
    seed: int = 0,
    threads: int = 1,
    chunk: int = 4096,
) -> OracleResult:
    """Largest Jordan type of a nilpotent endomorphism over GF(prime).

    Enumerates the whole search space when it has at most ``budget`` points,
    otherwise draws ``budget`` seeded samples. Either way the search stops as
    soon as the largest conceivable type (one block per vertex) appears, which
    makes the answer exact. ``exhaustive`` is true whenever the answer is the
    exact maximum over the field.
    """
    field = PrimeField(prime)
    if x.ledger is not None:
        work = _canonical_rebuild(x, field)
        basis = nilpotent_cover(work)
        nilpotent_only = basis is not None
        if basis is None:
            basis = end_space(work)
    else:
        if x.field != field:
            raise ValueError("a module without ledger must already live over GF(prime)")
        work = x
        basis = end_space(work)
        nilpotent_only = False
    search = _Search(work, basis, prime, nilpotent_only)
    dim = len(basis)
    total = prime**dim
    full = total <= budget
    n_chunks = -(-min(total, budget) // chunk)

    def run(idx: int):
        if full:
            start, stop = idx * chunk, min(total, (idx + 1) * chunk)
            codes = np.arange(start, stop, dtype=np.int64)
            coeffs = np.stack([(codes // prime**k) % prime for k in range(dim)], axis=1) if dim else np.zeros((len(codes), 0), np.int64)
        else:
            rng = np.random.default_rng([seed, idx])
            size = min(chunk, budget - idx * chunk)
            coeffs = rng.integers(0, prime, size=(size, dim))
        vecs, ok = search.ranks(coeffs)
        found: dict[tuple, np.ndarray] = {}
        hit_top = False
        for vec, c in zip(vecs[ok], coeffs[ok]):
            key = tuple(int(t) for t in vec)
            if key not in found:
                found[key] = c
        if search.top.size == 0 or any(np.array_equal(np.array(k), search.top) for k in found):
            hit_top = True
        return found, hit_top, len(coeffs)

    best: dict[tuple, np.ndarray] = {}
    explored = 0
    reached_top = False
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for wave in range(0, n_chunks, max(1, threads)):
            results = list(pool.map(run, range(wave, min(n_chunks, wave + max(1, threads)))))
            for found, hit, count in results:
                explored += count
                for k, c in found.items():
                    best.setdefault(k, c)
                reached_top |= hit
            if reached_top:
                break
            best = {k: best[k] for k in _maximal(best)}
    maximal = _maximal(best)
    if search.top.size and tuple(int(t) for t in search.top) in best:
        maximal = [tuple(int(t) for t in search.top)]
    jfs = [_jf_from_vector(search.vertices, search.dims, x.quiver.vertices, k) for k in maximal]
    coeffs = best[maximal[0]]
    cert = {}
    for v in x.quiver.vertices:
        acc = field.zeros((work.dims[v], work.dims[v]))
        for c, f in zip(coeffs, basis):
            acc = acc + int(c) * f.maps[v]
        cert[v] = np.mod(acc, prime)
    if full and explored == total:
        mode = "exhaustive"
    elif reached_top:
        mode = "top"
    else:
        mode = "sampled"
    return OracleResult(
        jf=jfs[0],
        certificate=Morphism(cert),
        exhaustive=mode != "sampled",
        prime=prime,
        mode=mode,
        maximal=jfs,
        explored=explored,
        module=work,
    )


# dispatcher

@dataclass
class GenJFResult:
    jf: JordanFormData
    engine: str  # "structural", "exhaustive" or "sampled"
    certificate: Morphism
    prime: int | None = None
    module: Representation | None = None


def genjf(
    x: Representation,
    vertex_hint: str | None = None,
    engine: str = "auto",
    prime: int = 2,
    budget: int = 1 << 16,
    seed: int = 0,
    threads: int = 1,
    escalate: Sequence[int] = (),
) -> GenJFResult:
    """Generic Jordan form, by the structural route when ``vertex_hint``
    qualifies and by search otherwise.

    ``escalate`` lists further primes to try when the search over ``prime``
    is inconclusive (sampled, or several incomparable maxima).
    """
    if engine not in ("auto", "structural", "oracle"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine in ("auto", "structural") and vertex_hint is not None:
        why = structural_defect(x, vertex_hint)
        if why is None:
            return GenJFResult(genjf_structural(x, vertex_hint), "structural", construct_shift_endo(x, vertex_hint), None, x)
        if engine == "structural":
            raise PreconditionFailed(why)
    elif engine == "structural":
        raise PreconditionFailed("structural engine needs a vertex hint")
    res = None
    for p in (prime, *escalate):
        res = genjf_oracle(x, p, budget, seed, threads)
        if res.exhaustive and res.unique:
            break
    tag = "exhaustive" if res.exhaustive and res.unique else "sampled"
    return GenJFResult(res.jf, tag, res.certificate, res.prime, res.module)
