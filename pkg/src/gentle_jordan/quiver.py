"""Finite quivers with quadratic monomial relations, and gentleness checks.

Relations are stored as traversal pairs: ``(first, second)`` means the path
that runs along ``first`` and then along ``second`` lies in the ideal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple


class Arrow(NamedTuple):
    label: str
    source: str
    target: str


class Letter(NamedTuple):
    """An arrow traversed forwards (``sign=1``) or backwards (``sign=-1``)."""

    arrow: str
    sign: int

    def flipped(self) -> "Letter":
        return Letter(self.arrow, -self.sign)

    def sort_key(self) -> tuple[str, int]:
        return (self.arrow, 0 if self.sign == 1 else 1)

    def __str__(self) -> str:
        return self.arrow if self.sign == 1 else f"{self.arrow}^-1"


class Violation(NamedTuple):
    rule: str
    detail: str
    offender: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, detail: str, offender: str) -> None:
        self.violations.append(Violation(rule, detail, offender))


class QuiverError(ValueError):
    pass


class NotGentle(QuiverError):
    def __init__(self, report: ValidationReport):
        self.report = report
        lines = "; ".join(f"{v.rule}: {v.detail}" for v in report.violations)
        super().__init__(f"not a gentle bound quiver ({lines})")


class Path(NamedTuple):
    """A path of the path algebra; arrows are listed in traversal order."""

    start: str
    arrows: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.start}"
        return " ".join(reversed(self.arrows))


class GentleQuiver:
    """A bound quiver ``(Q, I)`` whose relations are paths of length two.

    Construction checks only well-formedness (unique labels, known vertices,
    composable relations). Gentleness and admissibility are reported by
    :func:`validate_gentle`; :meth:`require_gentle` raises when they fail.
    """

    def __init__(
        self,
        vertices: Iterable[str],
        arrows: Iterable[Arrow | tuple[str, str, str]],
        relations: Iterable[tuple[str, str]] = (),
        name: str = "Q",
    ):
        self.name = name
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        self.arrows: dict[str, Arrow] = {}
        for a in arrows:
            a = Arrow(*(str(x) for x in a))
            if a.label in self.arrows:
                raise QuiverError(f"duplicate arrow label {a.label!r}")
            for end in (a.source, a.target):
                if end not in self.vertices:
                    raise QuiverError(f"arrow {a.label!r} uses unknown vertex {end!r}")
            self.arrows[a.label] = a
        rels = []
        for first, second in relations:
            for lab in (first, second):
                if lab not in self.arrows:
                    raise QuiverError(f"relation uses unknown arrow {lab!r}")
            if self.arrows[first].target != self.arrows[second].source:
                raise QuiverError(f"relation {first} {second} is not a composable path")
            if (first, second) in rels:
                raise QuiverError(f"duplicate relation {first} {second}")
            rels.append((first, second))
        self.relations: tuple[tuple[str, str], ...] = tuple(rels)
        self._rel_set = frozenset(self.relations)
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows.values():
            self._out[a.source].append(a.label)
            self._in[a.target].append(a.label)
        self._letters = tuple(
            Letter(lab, s) for lab in sorted(self.arrows) for s in (1, -1)
        )

    def __repr__(self) -> str:
        return (
            f"GentleQuiver(name={self.name!r}, vertices={list(self.vertices)}, "
            f"arrows={len(self.arrows)}, relations={list(self.relations)})"
        )

    def out_arrows(self, v: str) -> list[str]:
        return list(self._out[v])

    def in_arrows(self, v: str) -> list[str]:
        return list(self._in[v])

    def in_relation(self, first: str, second: str) -> bool:
        return (first, second) in self._rel_set

    # letters and walks

    def letters(self) -> tuple[Letter, ...]:
        return self._letters

    def letter_source(self, letter: Letter) -> str:
        a = self.arrows[letter.arrow]
        return a.source if letter.sign == 1 else a.target

    def letter_target(self, letter: Letter) -> str:
        a = self.arrows[letter.arrow]
        return a.target if letter.sign == 1 else a.source

    def can_follow(self, before: Letter, after: Letter) -> bool:
        """Whether ``after`` may come right after ``before`` in a string."""
        if self.letter_target(before) != self.letter_source(after):
            return False
        if before.arrow == after.arrow and before.sign != after.sign:
            return False
        if before.sign == after.sign == 1:
            return not self.in_relation(before.arrow, after.arrow)
        if before.sign == after.sign == -1:
            return not self.in_relation(after.arrow, before.arrow)
        return True

    def letters_from(self, v: str) -> list[Letter]:
        return [l for l in self._letters if self.letter_source(l) == v]

    def letters_into(self, v: str) -> list[Letter]:
        return [l for l in self._letters if self.letter_target(l) == v]

    def opposite(self) -> "GentleQuiver":
        """The quiver with every arrow reversed; relations reverse as well."""
        return GentleQuiver(
            self.vertices,
            [Arrow(a.label, a.target, a.source) for a in self.arrows.values()],
            [(second, first) for first, second in self.relations],
            name=f"{self.name}^op",
        )

    def require_gentle(self) -> "GentleQuiver":
        report = validate_gentle(self)
        if not report.ok:
            raise NotGentle(report)
        return self

    def to_dict(self, report: ValidationReport | None = None) -> dict:
        report = report if report is not None else validate_gentle(self)
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "arrows": [
                {"label": a.label, "source": a.source, "target": a.target}
                for a in self.arrows.values()
            ],
            "relations": [list(r) for r in self.relations],
            "violations": [v._asdict() for v in report.violations],
        }


def _connected(q: GentleQuiver) -> bool:
    if not q.vertices:
        return False
    seen = {q.vertices[0]}
    todo = [q.vertices[0]]
    while todo:
        v = todo.pop()
        for lab in q.out_arrows(v) + q.in_arrows(v):
            a = q.arrows[lab]
            for w in (a.source, a.target):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
    return len(seen) == len(q.vertices)


def validate_gentle(q: GentleQuiver) -> ValidationReport:
    """Check the degree bounds, the local relation rules, connectivity and
    admissibility. Every violation is reported, not just the first."""
    report = ValidationReport()
    if not _connected(q):
        report.add("connected", "the underlying graph is not connected", q.name)
    for v in q.vertices:
        if len(q.out_arrows(v)) > 2:
            report.add("out-degree", f"vertex {v} has {len(q.out_arrows(v))} outgoing arrows", v)
        if len(q.in_arrows(v)) > 2:
            report.add("in-degree", f"vertex {v} has {len(q.in_arrows(v))} incoming arrows", v)
    for lab, a in q.arrows.items():
        before = q.in_arrows(a.source)
        after = q.out_arrows(a.target)
        bound_before = [b for b in before if q.in_relation(b, lab)]
        free_before = [b for b in before if not q.in_relation(b, lab)]
        bound_after = [c for c in after if q.in_relation(lab, c)]
        free_after = [c for c in after if not q.in_relation(lab, c)]
        for name, group in (
            ("predecessor-in-ideal", bound_before),
            ("predecessor-free", free_before),
            ("successor-in-ideal", bound_after),
            ("successor-free", free_after),
        ):
            if len(group) > 1:
                report.add(name, f"arrow {lab} has {len(group)} such neighbours: {', '.join(group)}", lab)
    adm = check_admissible(q)
    if adm is not None:
        report.add("admissible", "oriented cycle avoiding the relations: " + " ".join(adm), adm[0])
    return report


def check_admissible(q: GentleQuiver) -> list[str] | None:
    """Return a relation-free oriented cycle (arrow labels in traversal order),
    or ``None`` when the path algebra modulo the relations is finite
    dimensional."""
    # graph on arrows: a -> b when b can follow a without hitting a relation
    succ = {
        lab: [c for c in q.out_arrows(a.target) if not q.in_relation(lab, c)]
        for lab, a in q.arrows.items()
    }
    colour = {lab: 0 for lab in q.arrows}
    parent: dict[str, str] = {}
    for root in sorted(q.arrows):
        if colour[root]:
            continue
        stack = [(root, iter(succ[root]))]
        colour[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
                continue
            if colour[nxt] == 1:
                cycle = [node]
                while cycle[-1] != nxt:
                    cycle.append(parent[cycle[-1]])
                return list(reversed(cycle))
            if colour[nxt] == 0:
                colour[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(succ[nxt])))
    return None


def algebra_basis(q: GentleQuiver) -> list[Path]:
    """All paths avoiding the relations, including one lazy path per vertex,
    ordered by length and then by their written form."""
    if check_admissible(q) is not None:
        raise QuiverError("relations are not admissible; the algebra is infinite dimensional")
    layer = [Path(v, ()) for v in q.vertices]
    out = list(layer)
    while layer:
        grown = []
        for p in layer:
            end = q.arrows[p.arrows[-1]].target if p.arrows else p.start
            for c in q.out_arrows(end):
                if p.arrows and q.in_relation(p.arrows[-1], c):
                    continue
                grown.append(Path(p.start, p.arrows + (c,)))
        out.extend(grown)
        layer = grown
    order = {v: i for i, v in enumerate(q.vertices)}
    return sorted(
        out,
        key=lambda p: (p.length, tuple(reversed(p.arrows)), order[p.start]),
    )


def random_gentle_quiver(
    rng: random.Random,
    max_vertices: int = 6,
    max_arrows: int = 8,
    loops: bool = False,
    name: str = "random",
) -> GentleQuiver:
    """Draw a connected gentle quiver with admissible relations.

    Arrows are added at random under the degree bounds; relations are then
    chosen vertex by vertex so that the local rules hold, and the draw is
    repeated until the relations are admissible.
    """
    while True:
        n = rng.randint(1, max_vertices)
        vertices = [str(i + 1) for i in range(n)]
        outdeg = dict.fromkeys(vertices, 0)
        indeg = dict.fromkeys(vertices, 0)
        arrows: list[Arrow] = []

        def add(s: str, t: str) -> bool:
            if outdeg[s] >= 2 or indeg[t] >= 2 or (s == t and not loops):
                return False
            arrows.append(Arrow(f"x{len(arrows) + 1}", s, t))
            outdeg[s] += 1
            indeg[t] += 1
            return True

        # random spanning tree first, so the quiver is connected
        ok = True
        for i in range(1, n):
            w = vertices[i]
            choices = vertices[:i]
            rng.shuffle(choices)
            placed = False
            for u in choices:
                s, t = (u, w) if rng.random() < 0.5 else (w, u)
                if add(s, t) or add(t, s):
                    placed = True
                    break
            if not placed:
                ok = False
                break
        if not ok:
            continue
        target = rng.randint(len(arrows), max(len(arrows), max_arrows))
        tries = 0
        while len(arrows) < target and tries < 50:
            tries += 1
            add(rng.choice(vertices), rng.choice(vertices))

        relations: list[tuple[str, str]] = []
        by_label = {a.label: a for a in arrows}
        for v in vertices:
            ins = [a.label for a in arrows if a.target == v]
            outs = [a.label for a in arrows if a.source == v]
            if len(ins) == 2 and len(outs) == 2:
                if rng.random() < 0.5:
                    outs.reverse()
                relations += list(zip(ins, outs))
            elif len(ins) == 2 and len(outs) == 1:
                relations.append((rng.choice(ins), outs[0]))
            elif len(ins) == 1 and len(outs) == 2:
                relations.append((ins[0], rng.choice(outs)))
            elif len(ins) == 1 and len(outs) == 1 and rng.random() < 0.5:
                relations.append((ins[0], outs[0]))
        q = GentleQuiver(vertices, arrows, relations, name=name)
        if validate_gentle(q).ok:
            assert all(by_label[f].target == by_label[s].source for f, s in relations)
            return q

