"""Local conditions at a vertex, the recoverability verdicts they imply,
counterexamples when a verdict is negative, and recovery of modules from
Jordan data when it is positive.

Throughout, ``m`` is a vertex and the category in question is the additive
closure of the string and band modules supported at ``m``.

Conditions at ``m``:

* ``minuscule``: no string passes through ``m`` twice;
* ``o``: no string through ``m`` passes through any vertex twice;
* ``istar``: strings starting at ``m`` are determined by their endpoint;
* ``i``: no arrow outside two strings through ``m`` joins a vertex of the
  first to a vertex of the second;
* ``iia``: at most one arrow leaves ``m``, at most one enters, and the
  incoming one followed by the outgoing one is a relation;
* ``iib``: at most one maximal string passes through ``m``.

Jordan recoverability is ``istar and (iia or iib)``; the canonical version
is ``i and (iia or iib)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import fields as fl
from .dsl import JordanFormData
from .fields import Field, PrimeField
from .jordan import endo_jordan_data, genjf
from .quiver import GentleQuiver, Letter
from .representations import (
    Morphism,
    Representation,
    Summand,
    decompose_ledgered,
    from_summands,
    is_endomorphism,
)
from .strings import (
    StringWord,
    condition_o,
    endpoints_unique,
    extend_end,
    extend_start,
    half_strings,
    join,
    maximal_strings_through,
    shortest_return,
    single_arrows_bound,
    strings_through,
    strings_through_by_length,
)


class NoSolution(ValueError):
    pass


class NotJordanRecoverable(ValueError):
    pass


class AmbiguityBug(RuntimeError):
    """Two non-isomorphic modules share the requested Jordan data in a case
    where that cannot happen."""


class InternalSearchFailure(RuntimeError):
    """A witness search came back empty although its hypotheses hold."""


class VerificationFailed(AssertionError):
    pass


@dataclass
class ConditionFlags:
    minuscule: bool
    o: bool
    istar: bool
    i: bool
    iia: bool
    iib: bool
    detail: dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in ("minuscule", "o", "istar", "i", "iia", "iib")}


@dataclass
class Reduction:
    """The type A quiver carried by the unique maximal string through ``m``."""

    word: StringWord
    quiver: GentleQuiver


@dataclass
class Witness:
    kind: str  # "jr-pair" or "cjr-rep"
    construction: str
    x: Representation
    y: Representation  # the second module, or W for "cjr-rep"
    predicted: JordanFormData | None = None
    shared: JordanFormData | None = None
    endo: Morphism | None = None  # nilpotent endomorphism of W
    arrow: str | None = None
    transcript: list[str] = field(default_factory=list)
    verified: bool = False


@dataclass
class AnalysisReport:
    quiver: GentleQuiver
    vertex: str
    flags: ConditionFlags
    jr: bool
    cjr: bool
    witness: Witness | None = None
    reduction: Reduction | None = None


# conditions

def _extra_arrow(q: GentleQuiver, words: Sequence[StringWord]):
    """First (rho, nu, arrow) with the arrow outside both strings, leaving a
    vertex of rho and entering a vertex of nu; pairs are tried by total length."""
    pairs = sorted(
        itertools.product(words, repeat=2),
        key=lambda p: (p[0].length + p[1].length, p[0].key, p[1].key),
    )
    for rho, nu in pairs:
        used = rho.arrow_support | nu.arrow_support
        for lab, a in q.arrows.items():
            if lab not in used and a.source in rho.support and a.target in nu.support:
                return rho, nu, lab
    return None


def condition_flags(q: GentleQuiver, m: str) -> ConditionFlags:
    if m not in q.vertices:
        raise KeyError(f"unknown vertex {m!r}")
    detail: dict[str, str] = {}
    back = shortest_return(q, m)
    minuscule = back is None
    if back is not None:
        detail["minuscule"] = f"{back} starts and ends at {m}"
    iia = single_arrows_bound(q, m)
    if not iia:
        detail["iia"] = f"arrows out of {m}: {q.out_arrows(m)}, into {m}: {q.in_arrows(m)}"
    o, revisit = condition_o(q, m)
    if not o:
        detail["o"] = f"{revisit} passes a vertex twice"
        detail["iib"] = "not evaluated: strings through the vertex are unbounded or revisit vertices"
        return ConditionFlags(minuscule, False, False, False, iia, False, detail)
    words = strings_through(q, m)
    istar, pair = endpoints_unique(q, m)
    if pair is not None:
        detail["istar"] = f"{pair[0]} and {pair[1]} start at {m} and end at {pair[0].target}"
    bad = _extra_arrow(q, words)
    if bad is not None:
        rho, nu, lab = bad
        detail["i"] = f"arrow {lab} leaves {rho} and enters {nu}"
    maximal = maximal_strings_through(q, m)
    iib = len(maximal) <= 1
    if not iib:
        detail["iib"] = "maximal strings: " + ", ".join(map(str, maximal))
    return ConditionFlags(minuscule, True, istar, bad is None, iia, iib, detail)


def decide(q: GentleQuiver, m: str) -> AnalysisReport:
    flags = condition_flags(q, m)
    second = flags.iia or flags.iib
    report = AnalysisReport(q, m, flags, flags.istar and second, flags.i and second)
    if flags.i and flags.iib:
        report.reduction = _reduction(q, m)
    return report


def _reduction(q: GentleQuiver, m: str) -> Reduction:
    (rho,) = maximal_strings_through(q, m)
    used = rho.arrow_support
    sub = GentleQuiver(
        [v for v in q.vertices if v in rho.support],
        [q.arrows[lab] for lab in q.arrows if lab in used],
        name=f"{q.name}|{m}",
    )
    return Reduction(rho, sub)


# witnesses

def _module(q: GentleQuiver, words: Sequence[StringWord], field: Field) -> Representation:
    return from_summands(q, [Summand("string", w) for w in words], field)


def _single_blocks(x: Representation, overrides: dict[str, tuple[int, ...]] | None = None) -> JordanFormData:
    data = {v: ((d,) if d else ()) for v, d in x.dims.items()}
    data.update(overrides or {})
    return JordanFormData.from_dict(data, x.quiver.vertices)


def _require(word: StringWord | None, what: str) -> StringWord:
    if word is None:
        raise InternalSearchFailure(f"{what} is not a string")
    return word


def _witness_return_loop(q: GentleQuiver, m: str, field: Field) -> Witness:
    chi = shortest_return(q, m)
    if chi is None:
        raise InternalSearchFailure(f"{m} is minuscule")
    p = next(i for i in range(1, len(chi.vertices)) if chi.vertices[i] in chi.vertices[:i])
    j = chi.vertices.index(chi.vertices[p])
    phi, loop = chi.segment(0, j), chi.segment(j, p)
    rho = _require(join(q, _require(join(q, phi, loop), "loop after path"), phi.inverse()), "return string")
    if loop.length == 1:
        x = _module(q, [phi, phi], field)
        y = _module(q, [rho], field)
        predicted = _single_blocks(y, {v: (2,) for v in rho.support})
        return Witness("jr-pair", "return-loop", x, y, predicted)
    head = _require(join(q, loop.segment(1, loop.length), phi.inverse()), "loop tail")
    tail = _require(join(q, phi, loop.segment(0, loop.length - 1)), "loop head")
    x, y = _module(q, [head], field), _module(q, [tail], field)
    return Witness("jr-pair", "return-path", x, y, _single_blocks(x))


def _witness_revisit(q: GentleQuiver, m: str, field: Field) -> Witness:
    _, witness = condition_o(q, m)
    bound = witness.length if witness is not None else 2 * len(q.letters())
    chi = next(
        (w for w in strings_through_by_length(q, m, bound) if len(set(w.vertices)) < len(w.vertices)),
        None,
    )
    if chi is None:
        raise InternalSearchFailure(f"no string through {m} revisits a vertex")
    if chi.source == chi.target:
        k = chi.length
        x = _module(q, [chi.segment(0, k - 1)], field)
        y = _module(q, [chi.segment(1, k)], field)
        return Witness("jr-pair", "revisit-two-paths", x, y, _single_blocks(x))
    if chi.source != m:
        chi = chi.inverse()
    k = chi.length
    first = chi.vertices.index(chi.target)
    phi, loop = chi.segment(0, first), chi.segment(first, k)
    once = chi.segment(0, k - 1)
    twice = _require(join(q, chi, loop.segment(0, loop.length - 1)), "loop walked twice")
    x = _module(q, [once, once], field)
    y = _module(q, [phi.drop_last(), twice], field)
    predicted = _single_blocks(x, {v: (2,) for v in once.support})
    return Witness("jr-pair", "revisit-loop", x, y, predicted)


def _common_prefix(u: StringWord, v: StringWord) -> int:
    n = 0
    while n < min(u.length, v.length) and u.letters[n] == v.letters[n]:
        n += 1
    return n


def _witness_endpoints(q: GentleQuiver, m: str, field: Field) -> Witness:
    ok, pair = endpoints_unique(q, m)
    if ok or pair is None:
        raise InternalSearchFailure(f"strings from {m} are determined by their endpoints")
    chi, psi = pair
    n = _common_prefix(chi, psi)
    phi = chi.segment(0, n)
    nu, mu = chi.segment(n, chi.length), psi.segment(n, psi.length)
    if nu.letters[0].sign == 1:
        nu, mu = mu, nu
    x = _module(q, [_require(join(q, phi, nu.drop_last()), "shortened path"), _require(join(q, phi, mu), "path")], field)
    y = _module(q, [_require(join(q, phi, nu), "path"), _require(join(q, phi, mu.drop_last()), "shortened path")], field)
    return Witness("jr-pair", "endpoint-collision", x, y, _single_blocks(x))


def _flip(w: StringWord) -> StringWord:
    return StringWord(tuple(Letter(l.arrow, -l.sign) for l in w.letters), w.vertices)


def _three_arrows(q: GentleQuiver, m: str):
    """Search for ``nu`` from ``m``, a letter ``into`` ending at ``m`` and a
    relation ``(g, d)`` where ``nu`` can continue by ``d`` or by ``g``
    walked backwards, with an incoming arrow at ``m``."""
    for nu in half_strings(q, m)[0]:
        for into in q.letters_into(m):
            if into.sign != 1:
                continue
            longer = extend_start(q, nu, into)
            if longer is None:
                continue
            for g, d in q.relations:
                if len({g, d, into.arrow}) < 3:
                    continue
                by_d = extend_end(q, nu, Letter(d, 1))
                by_g = extend_end(q, nu, Letter(g, -1))
                if by_d is None or by_g is None:
                    continue
                both_d = extend_end(q, longer, Letter(d, 1))
                both_g = extend_end(q, longer, Letter(g, -1))
                if both_d is None or both_g is None:
                    continue
                return nu, longer, by_d, by_g, both_d, both_g
    return None


def _witness_three_arrows(q: GentleQuiver, m: str, field: Field) -> Witness:
    found = _three_arrows(q, m)
    dual = False
    if found is None:
        # the incoming-arrow case on the opposite quiver, read back
        op = q.opposite()
        found = _three_arrows(op, m)
        if found is None:
            raise InternalSearchFailure(f"no three-arrow configuration at {m}")
        found = tuple(_flip(w) for w in found)
        dual = True
    nu, longer, by_d, by_g, both_d, both_g = found
    x = _module(q, [by_d, longer, both_g, by_g], field)
    y = _module(q, [both_d, nu, both_g, by_g], field)
    predicted = _single_blocks(x, {v: (3, 1) for v in nu.support})
    return Witness("jr-pair", "three-arrows-dual" if dual else "three-arrows", x, y, predicted)


def _jordan_matrix(field: Field, partition: Sequence[int]) -> np.ndarray:
    n = sum(partition)
    mat = field.zeros((n, n))
    start = 0
    for size in partition:
        for i in range(size - 1):
            mat[start + i + 1, start + i] = 1
        start += size
    return mat


def _witness_extra_arrow(
    q: GentleQuiver, m: str, field: Field, prime: int, budget: int, seed: int, threads: int
) -> Witness:
    bad = _extra_arrow(q, strings_through(q, m))
    if bad is None:
        raise InternalSearchFailure(f"no arrow joins two strings through {m}")
    rho, nu, gamma = bad
    x = _module(q, [rho, nu], field)
    lam = genjf(x, engine="oracle", prime=prime, budget=budget, seed=seed, threads=threads, escalate=(3, 5)).jf
    parts = lam.as_dict()
    n = Morphism({v: _jordan_matrix(field, parts[v]) for v in q.vertices})
    maps = {lab: field.zeros((x.dims[a.target], x.dims[a.source])) for lab, a in q.arrows.items()}
    src, tgt = q.arrows[gamma].source, q.arrows[gamma].target
    # chains start at the top of the first (largest) block
    eta, k = parts[src][0], parts[tgt][0]
    w_gamma = maps[gamma]
    if k >= eta:
        for i in range(eta):
            w_gamma[k - eta + i, i] = 1
    else:
        for i in range(k):
            w_gamma[i, i] = 1
    w = Representation(q, field, dict(x.dims), maps)
    return Witness("cjr-rep", "extra-arrow", x, w, predicted=lam, endo=n, arrow=gamma)


def find_witness(
    q: GentleQuiver,
    m: str,
    report: AnalysisReport | None = None,
    field: Field | None = None,
    prime: int = 2,
    budget: int = 1 << 16,
    seed: int = 0,
    threads: int = 1,
) -> Witness:
    """A counterexample to (canonical) Jordan recoverability at ``m``."""
    report = report or decide(q, m)
    field = field or PrimeField(prime)
    f = report.flags
    if not report.jr:
        if not f.minuscule:
            return _witness_return_loop(q, m, field)
        if not f.o:
            return _witness_revisit(q, m, field)
        if not f.istar:
            return _witness_endpoints(q, m, field)
        return _witness_three_arrows(q, m, field)
    if not report.cjr:
        return _witness_extra_arrow(q, m, field, prime, budget, seed, threads)
    raise ValueError(f"{m} is canonically Jordan recoverable; there is no witness")


def verify_witness(
    w: Witness, prime: int = 2, budget: int = 1 << 16, seed: int = 0, threads: int = 1
) -> list[str]:
    """Check the witness mechanically; raises :class:`VerificationFailed`."""
    log = w.transcript
    log.clear()

    def check(ok: bool, message: str) -> None:
        if not ok:
            raise VerificationFailed(message)
        log.append("ok: " + message)

    opts = dict(engine="oracle", prime=prime, budget=budget, seed=seed, threads=threads, escalate=(3, 5))
    if w.kind == "jr-pair":
        check(not w.x.relation_defects() and not w.y.relation_defects(), "both modules satisfy the relations")
        verdict = decompose_ledgered(w.x, w.y)
        check(verdict == "not-iso", f"X and Y are not isomorphic ({verdict})")
        gx, gy = genjf(w.x, **opts), genjf(w.y, **opts)
        log.append(f"GenJF(X) = {gx.jf} [{gx.engine}, p={gx.prime}]")
        log.append(f"GenJF(Y) = {gy.jf} [{gy.engine}, p={gy.prime}]")
        check(gx.jf == gy.jf, "GenJF(X) = GenJF(Y)")
        if w.predicted is not None:
            check(gx.jf == w.predicted, f"GenJF matches the predicted {w.predicted}")
        w.shared = gx.jf
    elif w.kind == "cjr-rep":
        x, rep = w.x, w.y
        check(not rep.relation_defects(), "W satisfies the relations")
        check(rep.dims == x.dims, "W has the dimension vector of X")
        check(w.endo is not None and is_endomorphism(rep, w.endo), "N is an endomorphism of W")
        gx = genjf(x, **opts)
        log.append(f"GenJF(X) = {gx.jf} [{gx.engine}, p={gx.prime}]")
        jf_n = endo_jordan_data(rep, w.endo)
        check(jf_n == gx.jf, f"JF(N) = GenJF(X) = {gx.jf}")
        check(not fl.is_zero(rep.maps[w.arrow]), f"W is nonzero on {w.arrow}")
        check(fl.is_zero(x.maps[w.arrow]), f"X is zero on {w.arrow}")
        verdict = decompose_ledgered(x, rep)
        check(verdict == "not-iso", f"W and X are not isomorphic ({verdict})")
        w.shared = gx.jf
    else:
        raise VerificationFailed(f"unknown witness kind {w.kind!r}")
    w.verified = True
    return log


# recovery

def _dim_vector(q: GentleQuiver, word: StringWord) -> tuple[int, ...]:
    return tuple(word.visits(v) for v in q.vertices)


def recover(
    q: GentleQuiver,
    m: str,
    lam: JordanFormData,
    field: Field | None = None,
    prime: int = 2,
    budget: int = 1 << 16,
    threads: int = 1,
) -> Representation:
    """The module of the category at ``m`` whose generic Jordan form is ``lam``."""
    report = decide(q, m)
    if not report.jr:
        raise NotJordanRecoverable(f"the category at {m} is not Jordan recoverable")
    field = field or PrimeField(prime)
    parts = lam.as_dict()
    unknown = set(parts) - set(q.vertices)
    if unknown:
        raise ValueError(f"unknown vertices {sorted(unknown)}")
    target = [sum(parts.get(v, ())) for v in q.vertices]
    words = strings_through(q, m)
    if report.flags.iia:
        counts = _solve_single_blocks(q, words, parts, target)
    else:
        counts = _search_by_oracle(q, words, lam, target, field, prime, budget, threads)
    summands = [Summand("string", w) for w, c in zip(words, counts) for _ in range(c)]
    return from_summands(q, summands, field)


def _solve_single_blocks(q, words, parts, target) -> list[int]:
    if any(len(p) > 1 for p in parts.values()):
        raise NoSolution("every vertex must carry a single Jordan block here")
    if not words:
        raise NoSolution("no strings pass through the vertex")
    a = np.array([_dim_vector(q, w) for w in words], dtype=object).T
    rat = fl.QQ
    a_q = rat.array(a.tolist())
    if fl.rank(rat, a_q) < len(words):
        raise AmbiguityBug("dimension vectors of the strings are linearly dependent")
    sol = fl.solve(rat, a_q, [Fraction(t) for t in target])
    if sol is None:
        raise NoSolution("the dimension vector is not a combination of string dimension vectors")
    if any(c < 0 or c.denominator != 1 for c in sol):
        raise NoSolution(
            "multiplicities would be " + ", ".join(f"{w}: {c}" for w, c in zip(words, sol))
        )
    return [int(c) for c in sol]


def _multisets(vectors: list[np.ndarray], target: np.ndarray, start: int = 0):
    if not target.any():
        yield [0] * (len(vectors) - start)
        return
    if start == len(vectors):
        return
    vec = vectors[start]
    most = min((target[vec > 0] // vec[vec > 0]).tolist(), default=0)
    for c in range(most, -1, -1):
        for rest in _multisets(vectors, target - c * vec, start + 1):
            yield [c] + rest


def _search_by_oracle(q, words, lam, target, field, prime, budget, threads) -> list[int]:
    vectors = [np.array(_dim_vector(q, w)) for w in words]
    hits = []
    for counts in _multisets(vectors, np.array(target)):
        summands = [Summand("string", w) for w, c in zip(words, counts) for _ in range(c)]
        x = from_summands(q, summands, field)
        res = genjf(x, engine="oracle", prime=prime, budget=budget, threads=threads, escalate=(3, 5))
        if res.jf == lam:
            hits.append(counts)
    if not hits:
        raise NoSolution(f"no module at this vertex has generic Jordan form {lam}")
    if len(hits) > 1:
        raise AmbiguityBug(f"{len(hits)} modules share the generic Jordan form {lam}")
    return hits[0]


__all__ = [
    "AmbiguityBug",
    "AnalysisReport",
    "ConditionFlags",
    "InternalSearchFailure",
    "NoSolution",
    "NotJordanRecoverable",
    "Reduction",
    "VerificationFailed",
    "Witness",
    "condition_flags",
    "decide",
    "find_witness",
    "recover",
    "verify_witness",
]
