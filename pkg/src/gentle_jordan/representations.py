"""Representations of gentle quivers over an exact field.

A representation stores one matrix per arrow, of shape
``(dim at target, dim at source)``. Modules built from strings and bands
remember how they were built (the *ledger*), which lets isomorphism questions
be answered by comparing combinatorial data.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import fields as fl
from .fields import Field, PrimeField
from .quiver import GentleQuiver
from .strings import (
    StringWord,
    band_canonical,
    band_defect,
    require_string,
    same_string,
    strings_through_by_length,
    substring_occurrences,
    walks_unbounded,
)


class RelationViolated(ValueError):
    pass


class Summand(NamedTuple):
    """One ledger entry: a string module, or a band module ``B(word, λ, d)``."""

    kind: str
    word: StringWord
    eigenvalue: object = None
    size: int = 1

    def describe(self) -> str:
        if self.kind == "string":
            return f"M({self.word})"
        return f"B({self.word}; {self.eigenvalue}; {self.size})"


def summand_key(s: Summand, field: Field) -> tuple:
    """Equal keys exactly for isomorphic indecomposables."""
    if s.kind == "string":
        return ("string", s.word.key)
    rep, inverted = band_canonical(s.word)
    lam = field.scalar(s.eigenvalue)
    if inverted:
        lam = field.inv(lam)
    return ("band", tuple(l.sort_key() for l in rep.letters), lam, s.size)


class BasisLabel(NamedTuple):
    summand: int
    position: int
    copy: int = 0


@dataclass
class Representation:
    quiver: GentleQuiver
    field: Field
    dims: dict[str, int]
    maps: dict[str, np.ndarray]
    labels: dict[str, list[BasisLabel]] = field(default_factory=dict)
    ledger: tuple[Summand, ...] | None = None

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self) -> set[str]:
        return {v for v, d in self.dims.items() if d}

    def relation_defects(self) -> list[tuple[str, str]]:
        bad = []
        for first, second in self.quiver.relations:
            prod = fl.matmul(self.field, self.maps[second], self.maps[first])
            if not fl.is_zero(prod):
                bad.append((first, second))
        return bad

    def check_relations(self) -> "Representation":
        bad = self.relation_defects()
        if bad:
            raise RelationViolated(f"relations not satisfied: {bad}")
        return self

    def describe(self) -> str:
        if self.ledger is None:
            return f"representation with dimension vector {self.dim_vector()}"
        return " + ".join(s.describe() for s in self.ledger) or "0"


def _assemble(
    q: GentleQuiver,
    field: Field,
    labels: dict[str, list[BasisLabel]],
    entries: Iterable[tuple[str, BasisLabel, BasisLabel, object]],
    ledger: tuple[Summand, ...] | None,
) -> Representation:
    index = {v: {lab: i for i, lab in enumerate(ls)} for v, ls in labels.items()}
    dims = {v: len(labels[v]) for v in q.vertices}
    maps = {}
    for lab, a in q.arrows.items():
        maps[lab] = field.zeros((dims[a.target], dims[a.source]))
    for arrow, src, tgt, coeff in entries:
        a = q.arrows[arrow]
        maps[arrow][index[a.target][tgt], index[a.source][src]] = field.scalar(coeff)
    return Representation(q, field, dims, maps, labels, ledger)


def _letter_entries(word: StringWord, i: int, left: int, right: int, copy: int, coeff=1):
    """Entries for letter ``i`` (0-based) linking positions ``left``/``right``."""
    l = word.letters[i]
    if l.sign == 1:
        return (l.arrow, BasisLabel(0, left, copy), BasisLabel(0, right, copy), coeff)
    return (l.arrow, BasisLabel(0, right, copy), BasisLabel(0, left, copy), coeff)


def string_module(q: GentleQuiver, word: StringWord, field: Field) -> Representation:
    """The string module: one basis vector per vertex position of ``word``,
    each letter mapping one neighbour to the other in its own direction."""
    require_string(q, word)
    labels = {v: [] for v in q.vertices}
    for i, v in enumerate(word.vertices):
        labels[v].append(BasisLabel(0, i))
    entries = [_letter_entries(word, i, i, i + 1, 0) for i in range(word.length)]
    rep = _assemble(q, field, labels, entries, (Summand("string", word),))
    return rep


def band_module(
    q: GentleQuiver,
    word: StringWord,
    eigenvalue,
    size: int,
    field: Field,
    canonicalize: bool = True,
) -> Representation:
    """The band module with ``size`` copies of each position; the last letter
    carries a Jordan block with eigenvalue ``eigenvalue`` (its inverse when
    the letter is inverse).

    With ``canonicalize`` the word is first replaced by its canonical rotation
    (or inverse, with the eigenvalue inverted), so equal classes give equal
    matrices.
    """
    why = band_defect(q, word)
    if why:
        raise ValueError(f"{word} is not a band: {why}")
    lam = field.scalar(eigenvalue)
    if lam == 0:
        raise ValueError("band eigenvalue must be nonzero")
    if size < 1:
        raise ValueError("band size must be positive")
    if canonicalize:
        rep, inverted = band_canonical(word)
        word, lam = rep, (field.inv(lam) if inverted else lam)
    k = word.length
    labels = {v: [] for v in q.vertices}
    for i in range(k):
        for j in range(size):
            labels[word.vertices[i]].append(BasisLabel(0, i, j))
    entries = []
    for i in range(k - 1):
        for j in range(size):
            entries.append(_letter_entries(word, i, i, i + 1, j))
    last = word.letters[-1]
    for j in range(size):
        if last.sign == 1:
            src = BasisLabel(0, k - 1, j)
            entries.append((last.arrow, src, BasisLabel(0, 0, j), lam))
            if j + 1 < size:
                entries.append((last.arrow, src, BasisLabel(0, 0, j + 1), 1))
        else:
            src = BasisLabel(0, 0, j)
            entries.append((last.arrow, src, BasisLabel(0, k - 1, j), field.inv(lam)))
            if j + 1 < size:
                entries.append((last.arrow, src, BasisLabel(0, k - 1, j + 1), 1))
    return _assemble(q, field, labels, entries, (Summand("band", word, lam, size),))


def zero_module(q: GentleQuiver, field: Field) -> Representation:
    return _assemble(q, field, {v: [] for v in q.vertices}, [], ())


def direct_sum(*reps: Representation) -> Representation:
    if not reps:
        raise ValueError("direct_sum needs at least one summand")
    q, field = reps[0].quiver, reps[0].field
    for r in reps[1:]:
        if r.quiver is not q and r.quiver.to_dict() != q.to_dict():
            raise ValueError("summands live on different quivers")
        if r.field != field:
            raise ValueError("summands live over different fields")
    labels = {v: [] for v in q.vertices}
    offset = 0
    for r in reps:
        count = len(r.ledger) if r.ledger is not None else 1
        for v in q.vertices:
            labels[v] += [BasisLabel(l.summand + offset, l.position, l.copy) for l in r.labels.get(v, [])]
        offset += count
    maps = {lab: fl.block_diag(field, [r.maps[lab] for r in reps]) for lab in q.arrows}
    dims = {v: sum(r.dims[v] for r in reps) for v in q.vertices}
    ledger = None
    if all(r.ledger is not None for r in reps):
        ledger = tuple(s for r in reps for s in r.ledger)
    return Representation(q, field, dims, maps, labels, ledger)


def power(rep: Representation, k: int) -> Representation:
    if k < 1:
        raise ValueError("power must be positive")
    return direct_sum(*([rep] * k))


def build_summand(q: GentleQuiver, s: Summand, field: Field) -> Representation:
    if s.kind == "string":
        return string_module(q, s.word, field)
    return band_module(q, s.word, s.eigenvalue, s.size, field)


def from_summands(q: GentleQuiver, summands: Sequence[Summand], field: Field) -> Representation:
    if not summands:
        return zero_module(q, field)
    return direct_sum(*(build_summand(q, s, field) for s in summands))


def rebuild(rep: Representation, field: Field | None = None) -> Representation:
    """Rebuild a ledgered module from its ledger, optionally over another field."""
    if rep.ledger is None:
        raise ValueError("representation has no ledger")
    return from_summands(rep.quiver, rep.ledger, field or rep.field)


@dataclass
class Morphism:
    maps: dict[str, np.ndarray]

    def is_zero(self) -> bool:
        return all(fl.is_zero(m) for m in self.maps.values())


def is_morphism(x: Representation, y: Representation, f: Morphism) -> bool:
    for lab, a in x.quiver.arrows.items():
        left = fl.matmul(x.field, y.maps[lab], f.maps[a.source])
        right = fl.matmul(x.field, f.maps[a.target], x.maps[lab])
        if not np.array_equal(left, right):
            return False
    return True


def compose(field: Field, g: Morphism, f: Morphism) -> Morphism:
    """``g`` after ``f``."""
    return Morphism({v: fl.matmul(field, g.maps[v], f.maps[v]) for v in f.maps})


def hom_space(x: Representation, y: Representation) -> list[Morphism]:
    """A basis of Hom(x, y), found as the kernel of the commutativity system."""
    q, field = x.quiver, x.field
    blocks = {}
    col = 0
    for v in q.vertices:
        size = y.dims[v] * x.dims[v]
        blocks[v] = (col, size)
        col += size
    rows = []
    for lab, a in q.arrows.items():
        s, t = a.source, a.target
        height = y.dims[t] * x.dims[s]
        if height == 0:
            continue
        row = field.zeros((height, col))
        c0, n0 = blocks[s]
        if n0:
            row[:, c0 : c0 + n0] = np.kron(y.maps[lab], field.eye(x.dims[s]))
        c1, n1 = blocks[t]
        if n1:
            row[:, c1 : c1 + n1] = field.reduce(
                row[:, c1 : c1 + n1] - np.kron(field.eye(y.dims[t]), x.maps[lab].T)
            )
        rows.append(row)
    system = np.vstack(rows) if rows else field.zeros((0, col))
    kernel = fl.nullspace(field, system)
    out = []
    for k in range(kernel.shape[1]):
        vec = kernel[:, k]
        maps = {}
        for v in q.vertices:
            c0, n0 = blocks[v]
            maps[v] = vec[c0 : c0 + n0].reshape(y.dims[v], x.dims[v])
        out.append(Morphism(maps))
    return out


def combine(field: Field, basis: Sequence[Morphism], coeffs: Sequence) -> Morphism:
    maps = {v: field.zeros(m.shape) for v, m in basis[0].maps.items()} if basis else {}
    for c, f in zip(coeffs, basis):
        if c:
            for v in maps:
                maps[v] = field.reduce(maps[v] + field.scalar(c) * f.maps[v])
    return Morphism(maps)


def hom_dim_combinatorial(rho: StringWord, sigma: StringWord) -> int:
    """dim Hom(M(rho), M(sigma)): pairs of a top substring of ``rho`` and a
    bottom substring of ``sigma`` that agree up to inversion."""
    tops = [o.word for o in substring_occurrences(rho) if o.on_top]
    bottoms = [o.word for o in substring_occurrences(sigma) if o.at_bottom]
    return sum(1 for t in tops for b in bottoms if same_string(t, b))


def find_isomorphism(
    x: Representation, y: Representation, budget: int = 1 << 16
) -> tuple[Morphism | None, bool]:
    """Search Hom(x, y) over a prime field for an invertible map.

    Returns the isomorphism (or ``None``) and whether the search covered the
    whole space.
    """
    field = x.field
    if not isinstance(field, PrimeField):
        raise ValueError("explicit isomorphism search needs a prime field")
    if x.dims != y.dims:
        return None, True
    basis = hom_space(x, y)
    if not basis:
        return (Morphism({v: field.zeros((0, 0)) for v in x.dims}), True) if x.total_dim == 0 else (None, True)
    total = field.p ** len(basis)
    exhaustive = total <= budget
    rng = np.random.default_rng(0)
    candidates = (
        itertools.product(range(field.p), repeat=len(basis))
        if exhaustive
        else (rng.integers(0, field.p, len(basis)) for _ in range(budget))
    )
    for coeffs in candidates:
        f = combine(field, basis, coeffs)
        if all(fl.rank(field, f.maps[v]) == x.dims[v] for v in x.dims):
            return f, exhaustive
    return None, exhaustive


def _invariants(x: Representation) -> tuple:
    field = x.field
    ranks = tuple(fl.rank(field, x.maps[lab]) for lab in sorted(x.quiver.arrows))
    return (x.dim_vector(), ranks)


def decompose_ledgered(x: Representation, y: Representation, budget: int = 1 << 14) -> str:
    """Decide ``x ≅ y``: ``"iso"``, ``"not-iso"`` or ``"unknown"``.

    Ledgers are compared when both exist. Otherwise cheap invariants are
    compared, then an explicit isomorphism is searched for, and finally, when
    the quiver has only finitely many strings, the dimensions of Hom from
    every string module are compared (these determine a module up to
    isomorphism).
    """
    if x.ledger is not None and y.ledger is not None:
        kx = Counter(summand_key(s, x.field) for s in x.ledger)
        ky = Counter(summand_key(s, y.field) for s in y.ledger)
        return "iso" if kx == ky else "not-iso"
    if _invariants(x) != _invariants(y):
        return "not-iso"
    if isinstance(x.field, PrimeField):
        iso, exhaustive = find_isomorphism(x, y, budget)
        if iso is not None:
            return "iso"
        if exhaustive:
            return "not-iso"
    q = x.quiver
    if not walks_unbounded(q, q.letters()):
        seen = set()
        for v in q.vertices:
            for w in strings_through_by_length(q, v, 2 * len(q.letters())):
                if w.key in seen:
                    continue
                seen.add(w.key)
                m = string_module(q, w, x.field)
                if len(hom_space(m, x)) != len(hom_space(m, y)):
                    return "not-iso"
        return "iso"
    return "unknown"


def is_endomorphism(x: Representation, n: Morphism) -> bool:
    return is_morphism(x, x, n)


__all__ = [
    "BasisLabel",
    "Morphism",
    "RelationViolated",
    "Representation",
    "Summand",
    "band_module",
    "build_summand",
    "combine",
    "compose",
    "decompose_ledgered",
    "direct_sum",
    "find_isomorphism",
    "from_summands",
    "hom_dim_combinatorial",
    "hom_space",
    "is_endomorphism",
    "is_morphism",
    "power",
    "rebuild",
    "string_module",
    "summand_key",
    "zero_module",
]
