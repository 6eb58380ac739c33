"""Strings and bands of a gentle quiver.

A string is stored in reading order: ``letters[0]`` is the first letter
walked from the source vertex. It is printed the usual way, with the first
letter on the right. ``vertices[i]`` is the vertex reached after ``i``
letters, so a string of length ``k`` visits ``k + 1`` vertex positions.

Validity of a word only depends on consecutive letter pairs, so the strings
are exactly the walks in the *letter graph* whose nodes are letters and whose
edges are the pairs allowed by :meth:`GentleQuiver.can_follow`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .quiver import GentleQuiver, Letter


class InvalidString(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


class InfiniteFamily(ValueError):
    """The strings through a vertex cannot be listed without a length cap."""

    def __init__(self, vertex: str, witness: "StringWord"):
        self.vertex = vertex
        self.witness = witness
        super().__init__(
            f"strings through {vertex} form an infinite family; "
            f"{witness} passes a vertex twice"
        )


@dataclass(frozen=True)
class StringWord:
    letters: tuple[Letter, ...]
    vertices: tuple[str, ...]

    @staticmethod
    def lazy(v: str) -> "StringWord":
        return StringWord((), (v,))

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_lazy(self) -> bool:
        return not self.letters

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @property
    def arrow_support(self) -> frozenset[str]:
        return frozenset(l.arrow for l in self.letters)

    def visits(self, v: str) -> int:
        return self.vertices.count(v)

    def inverse(self) -> "StringWord":
        return StringWord(
            tuple(l.flipped() for l in reversed(self.letters)),
            tuple(reversed(self.vertices)),
        )

    def sort_key(self) -> tuple:
        if self.is_lazy:
            return ((), self.source)
        return (tuple(l.sort_key() for l in self.letters), "")

    @property
    def key(self) -> tuple:
        """Identifies the string up to inversion."""
        return min(self.sort_key(), self.inverse().sort_key())

    def canonical(self) -> "StringWord":
        inv = self.inverse()
        return inv if inv.sort_key() < self.sort_key() else self

    def segment(self, a: int, b: int) -> "StringWord":
        """The part between vertex positions ``a <= b``."""
        return StringWord(self.letters[a:b], self.vertices[a : b + 1])

    def drop_last(self) -> "StringWord":
        if self.is_lazy:
            raise InvalidString("a lazy string has no last letter")
        return self.segment(0, self.length - 1)

    def __str__(self) -> str:
        if self.is_lazy:
            return f"e_{self.source}"
        return " ".join(str(l) for l in reversed(self.letters))

    def __repr__(self) -> str:
        return f"StringWord({str(self)!r})"


def make_word(q: GentleQuiver, letters: Iterable[Letter], start: str | None = None) -> StringWord:
    """Build a word from letters in reading order, checking only that
    consecutive letters are composable."""
    letters = tuple(Letter(l[0], l[1]) for l in letters)
    if not letters:
        if start is None:
            raise InvalidString("a lazy string needs its vertex")
        return StringWord.lazy(start)
    for l in letters:
        if l.arrow not in q.arrows:
            raise InvalidString(f"unknown arrow {l.arrow!r}")
    verts = [q.letter_source(letters[0])]
    if start is not None and start != verts[0]:
        raise InvalidString(f"word does not start at {start}")
    for l in letters:
        if q.letter_source(l) != verts[-1]:
            raise InvalidString(f"letter {l} does not start at {verts[-1]}")
        verts.append(q.letter_target(l))
    return StringWord(letters, tuple(verts))


def string_defect(q: GentleQuiver, w: StringWord) -> str | None:
    """Why ``w`` is not a string, or ``None`` when it is one."""
    for i, (a, b) in enumerate(zip(w.letters, w.letters[1:]), start=1):
        if not q.can_follow(a, b):
            if a.arrow == b.arrow and a.sign != b.sign:
                return f"letters {i} and {i + 1} cancel ({a}, {b})"
            if q.letter_target(a) != q.letter_source(b):
                return f"letters {i} and {i + 1} are not composable"
            return f"letters {i} and {i + 1} compose to a relation ({a}, {b})"
    return None


def is_valid_string(q: GentleQuiver, w: StringWord) -> bool:
    return string_defect(q, w) is None


def require_string(q: GentleQuiver, w: StringWord) -> StringWord:
    why = string_defect(q, w)
    if why:
        raise InvalidString(f"{w} is not a string: {why}")
    return w


def extend_end(q: GentleQuiver, w: StringWord, letter: Letter) -> StringWord | None:
    """``w`` followed by ``letter``, if that is still a string."""
    if w.is_lazy:
        ok = q.letter_source(letter) == w.target
    else:
        ok = q.can_follow(w.letters[-1], letter)
    if not ok:
        return None
    return StringWord(w.letters + (letter,), w.vertices + (q.letter_target(letter),))


def extend_start(q: GentleQuiver, w: StringWord, letter: Letter) -> StringWord | None:
    """``letter`` followed by ``w``, if that is still a string."""
    if w.is_lazy:
        ok = q.letter_target(letter) == w.source
    else:
        ok = q.can_follow(letter, w.letters[0])
    if not ok:
        return None
    return StringWord((letter,) + w.letters, (q.letter_source(letter),) + w.vertices)


def join(q: GentleQuiver, first: StringWord, second: StringWord) -> StringWord | None:
    """Walk ``first`` and then ``second``; ``None`` unless it is a string."""
    if first.target != second.source:
        return None
    if first.letters and second.letters and not q.can_follow(first.letters[-1], second.letters[0]):
        return None
    return StringWord(first.letters + second.letters, first.vertices + second.vertices[1:])


def is_maximal(q: GentleQuiver, w: StringWord) -> bool:
    return not any(
        extend_end(q, w, l) or extend_start(q, w, l) for l in q.letters()
    )


# substrings

class Occurrence(NamedTuple):
    """A substring occupying vertex positions ``start..end`` of its host."""

    start: int
    end: int
    word: StringWord
    on_top: bool
    at_bottom: bool


def substring_occurrences(w: StringWord) -> list[Occurrence]:
    """Every positional substring, lazy ones included, with its top and
    bottom flags. A substring is on top when the neighbouring letters point
    away from it, and at the bottom when they point into it."""
    k = w.length
    eps = [0] + [l.sign for l in w.letters]  # eps[i] is the sign of letter i
    out = []
    for a in range(k + 1):
        for b in range(a, k + 1):
            left_top = a == 0 or eps[a] == -1
            right_top = b == k or eps[b + 1] == 1
            left_bot = a == 0 or eps[a] == 1
            right_bot = b == k or eps[b + 1] == -1
            out.append(Occurrence(a, b, w.segment(a, b), left_top and right_top, left_bot and right_bot))
    return out


def same_string(u: StringWord, v: StringWord) -> bool:
    """Equality up to inversion."""
    return u == v or u == v.inverse()


# enumeration around a vertex

def half_strings(
    q: GentleQuiver, m: str, cap: int | None = None, simple: bool = True
) -> tuple[list[StringWord], StringWord | None]:
    """Strings starting at ``m`` (with ``e_m``), in breadth-first order.

    With ``simple`` the walk is pruned as soon as it would revisit a vertex;
    the first such extension is returned as a witness. Without ``simple`` a
    ``cap`` is required.
    """
    if not simple and cap is None:
        raise ValueError("unpruned enumeration needs a length cap")
    out = [StringWord.lazy(m)]
    witness = None
    layer = list(out)
    while layer:
        grown = []
        for w in layer:
            if cap is not None and w.length >= cap:
                continue
            for l in q.letters_from(w.target):
                x = extend_end(q, w, l)
                if x is None:
                    continue
                if simple and x.target in w.vertices:
                    if witness is None:
                        witness = x
                    continue
                grown.append(x)
        out.extend(grown)
        layer = grown
    return out, witness


def walks_unbounded(q: GentleQuiver, starts: list[Letter]) -> bool:
    """Whether walks in the letter graph from ``starts`` can be arbitrarily long."""
    state: dict[Letter, int] = {}
    for root in starts:
        if root in state:
            continue
        stack = [(root, iter([l for l in q.letters_from(q.letter_target(root)) if q.can_follow(root, l)]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
                continue
            if state.get(nxt) == 1:
                return True
            if nxt not in state:
                state[nxt] = 1
                succ = [l for l in q.letters_from(q.letter_target(nxt)) if q.can_follow(nxt, l)]
                stack.append((nxt, iter(succ)))
    return False


def condition_o(q: GentleQuiver, m: str) -> tuple[bool, StringWord | None]:
    """Every string through ``m`` visits each vertex at most once.

    Returns the verdict and, when it fails, a string through ``m`` that
    revisits a vertex.
    """
    halves, witness = half_strings(q, m)
    if witness is not None:
        return False, witness
    for mu in halves:
        for nu in halves:
            if mu.is_lazy or nu.is_lazy:
                continue
            rho = join(q, nu.inverse(), mu)
            if rho is not None and len(set(mu.vertices) & set(nu.vertices)) > 1:
                return False, rho
    return True, None


def _combine(q: GentleQuiver, halves: list[StringWord], cap: int | None) -> list[StringWord]:
    seen: dict[tuple, StringWord] = {}
    for mu in halves:
        for nu in halves:
            if cap is not None and mu.length + nu.length > cap:
                continue
            rho = join(q, nu.inverse(), mu)
            if rho is not None and rho.key not in seen:
                seen[rho.key] = rho.canonical()
    return sorted(seen.values(), key=lambda w: (w.length, w.key))


def strings_through(q: GentleQuiver, m: str, cap: int | None = None) -> list[StringWord]:
    """All strings passing through ``m``, one per inverse pair, in canonical
    orientation, sorted by length.

    Without ``cap`` the family must be finite; when condition (o) fails and
    walks from ``m`` can grow forever :class:`InfiniteFamily` is raised.
    """
    if cap is not None:
        halves, _ = half_strings(q, m, cap=cap, simple=False)
        return _combine(q, halves, cap)
    ok, witness = condition_o(q, m)
    if ok:
        halves, _ = half_strings(q, m)
        return _combine(q, halves, None)
    if walks_unbounded(q, q.letters_from(m)):
        raise InfiniteFamily(m, witness)
    bound = 2 * len(q.letters()) + 1  # acyclic letter graph: walks are shorter
    halves, _ = half_strings(q, m, cap=bound, simple=False)
    return _combine(q, halves, None)


def maximal_strings_through(q: GentleQuiver, m: str) -> list[StringWord]:
    return [w for w in strings_through(q, m) if is_maximal(q, w)]


def shortest_return(q: GentleQuiver, m: str) -> StringWord | None:
    """A shortest non-lazy string from ``m`` back to ``m``, if any.

    Breadth-first search over the letter graph; ``m`` is minuscule exactly
    when this returns ``None``.
    """
    parent: dict[Letter, Letter | None] = {}
    todo: deque[Letter] = deque()
    for l in q.letters_from(m):
        parent[l] = None
        todo.append(l)
    while todo:
        l = todo.popleft()
        if q.letter_target(l) == m:
            path = [l]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return make_word(q, reversed(path))
        for nxt in q.letters_from(q.letter_target(l)):
            if nxt not in parent and q.can_follow(l, nxt):
                parent[nxt] = l
                todo.append(nxt)
    return None


def is_minuscule(q: GentleQuiver, m: str) -> bool:
    return shortest_return(q, m) is None


def strings_through_by_length(q: GentleQuiver, m: str, max_len: int) -> Iterator[StringWord]:
    """Strings through ``m`` in order of length (one per inverse pair),
    generated by growing both ends of ``e_m``."""
    seen = {StringWord.lazy(m).key}
    layer = [StringWord.lazy(m)]
    yield layer[0]
    for _ in range(max_len):
        grown = []
        for w in layer:
            for l in q.letters():
                for x in (extend_end(q, w, l), extend_start(q, w, l)):
                    if x is not None and x.key not in seen:
                        seen.add(x.key)
                        grown.append(x)
        grown.sort(key=lambda w: w.key)
        yield from grown
        layer = grown


# order and distance on strings starting at a vertex

def brenner_leq(mu: StringWord, nu: StringWord) -> bool:
    """The order on strings starting at a common vertex used to sort the
    summands of the shift endomorphism."""
    if mu.source != nu.source:
        raise ValueError("strings must start at the same vertex")
    k, p = mu.length, nu.length
    j = 0
    while j < min(k, p) and mu.letters[j] == nu.letters[j]:
        j += 1
    if j < min(k, p):
        return mu.letters[j].sign == -1 and nu.letters[j].sign == 1
    if j == k < p:
        return nu.letters[j].sign == 1
    if j == p < k:
        return mu.letters[j].sign == -1
    return True


def brenner_compare(mu: StringWord, nu: StringWord) -> int:
    """-1, 0 or 1 as ``mu`` is below, equal to or above ``nu``."""
    if mu == nu:
        return 0
    le, ge = brenner_leq(mu, nu), brenner_leq(nu, mu)
    if le and not ge:
        return -1
    if ge and not le:
        return 1
    raise PreconditionFailed(f"{mu} and {nu} are not comparable")


def strings_from(q: GentleQuiver, m: str) -> list[StringWord]:
    """Strings starting at ``m``; requires condition (o) at ``m``."""
    ok, witness = condition_o(q, m)
    if not ok:
        raise PreconditionFailed(f"condition (o) fails at {m}: {witness}")
    return half_strings(q, m)[0]


def delta(q: GentleQuiver, m: str) -> dict[str, float]:
    """Length of the unique string from ``m`` to each vertex (``inf`` when
    there is none). Requires endpoint uniqueness at ``m``."""
    found: dict[str, int] = {}
    for w in strings_from(q, m):
        if w.target in found:
            raise PreconditionFailed(f"two strings from {m} end at {w.target}")
        found[w.target] = w.length
    return {v: found.get(v, math.inf) for v in q.vertices}


# bands

def rotate(w: StringWord, r: int) -> StringWord:
    k = w.length
    r %= k
    letters = w.letters[r:] + w.letters[:r]
    verts = w.vertices[r:k] + w.vertices[:r] + (w.vertices[r],)
    return StringWord(letters, verts)


def band_defect(q: GentleQuiver, w: StringWord) -> str | None:
    if w.is_lazy:
        return "a band is not lazy"
    if w.source != w.target:
        return "a band must be closed"
    why = string_defect(q, w)
    if why:
        return why
    if not q.can_follow(w.letters[-1], w.letters[0]):
        return "the square of the word is not a string"
    k = w.length
    for d in range(1, k):
        if k % d == 0 and w.letters == w.letters[d:] + w.letters[:d]:
            return "the word is a proper power"
    return None


def is_band(q: GentleQuiver, w: StringWord) -> bool:
    return band_defect(q, w) is None


def band_canonical(w: StringWord) -> tuple[StringWord, bool]:
    """The least rotation of ``w`` or of its inverse, and whether the inverse
    was needed."""
    best = None
    for inverted, base in ((False, w), (True, w.inverse())):
        for r in range(w.length):
            cand = rotate(base, r)
            key = tuple(l.sort_key() for l in cand.letters)
            if best is None or key < best[0]:
                best = (key, cand, inverted)
    return best[1], best[2]


def band_key(w: StringWord) -> tuple:
    rep, _ = band_canonical(w)
    return tuple(l.sort_key() for l in rep.letters)


def enumerate_bands(q: GentleQuiver, max_len: int) -> list[StringWord]:
    """Band classes (up to rotation and inversion) of length at most ``max_len``."""
    found: dict[tuple, StringWord] = {}
    for first in q.letters():
        stack = [make_word(q, [first])]
        while stack:
            w = stack.pop()
            if w.source == w.target and is_band(q, w):
                key = band_key(w)
                if key not in found:
                    found[key] = band_canonical(w)[0]
            if w.length < max_len:
                for l in q.letters_from(w.target):
                    x = extend_end(q, w, l)
                    if x is not None:
                        stack.append(x)
    return sorted(found.values(), key=lambda w: (w.length, band_key(w)))


# local conditions used by the structural Jordan-form route

def endpoints_unique(q: GentleQuiver, m: str) -> tuple[bool, tuple[StringWord, StringWord] | None]:
    """Strings starting at ``m`` are determined by where they end.

    Returns the verdict and, when it fails, two such strings with a common
    endpoint, chosen with the shortest lengths.
    """
    ok, _ = condition_o(q, m)
    if not ok:
        return False, None
    by_end: dict[str, list[StringWord]] = {}
    for w in half_strings(q, m)[0]:
        by_end.setdefault(w.target, []).append(w)
    pairs = [
        (ws[i], ws[j])
        for ws in by_end.values()
        for i in range(len(ws))
        for j in range(len(ws))
        if i != j and ws[i].length <= ws[j].length
    ]
    if not pairs:
        return True, None
    return False, min(pairs, key=lambda p: (p[0].length, p[1].length, p[0].key, p[1].key))


def single_arrows_bound(q: GentleQuiver, m: str) -> bool:
    """At most one arrow leaves ``m``, at most one enters it, and when both
    exist the incoming one followed by the outgoing one is a relation."""
    outs, ins = q.out_arrows(m), q.in_arrows(m)
    if len(outs) > 1 or len(ins) > 1:
        return False
    if outs and ins:
        return q.in_relation(ins[0], outs[0])
    return True
