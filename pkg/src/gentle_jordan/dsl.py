"""Text formats: quiver files, string literals, module expressions and
Jordan-form data.

Quiver file::

    quiver chain
    vertex 1 2 3
    arrow a: 1 -> 2
    arrow b: 2 -> 3
    rel a b          # a then b is zero

String literals are written with the first letter on the right, letters
separated by spaces or ``·``; an inverse letter is ``a^-1`` or ``a-``; a lazy
string is ``e_<vertex>``. Module expressions join ``M(<string>)`` and
``B(<band>; <lambda>; <d>)`` terms with ``+``, each optionally raised to
``^k``. Jordan data is ``1:[1];2:[3];3:[1]`` with ``[0]`` for an empty
partition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .quiver import Arrow, GentleQuiver, Letter, QuiverError
from .representations import Representation, Summand, from_summands
from .strings import InvalidString, StringWord, make_word


class DSLError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_IDENT = r"[A-Za-z0-9_]+"
_QUIVER = re.compile(r"quiver\s+(?P<name>\S+)\s*$")
_VERTEX = re.compile(rf"vertex((?:\s+{_IDENT})+)\s*$")
_ARROW = re.compile(rf"arrow\s+(?P<label>{_IDENT})\s*:\s*(?P<src>{_IDENT})\s*->\s*(?P<tgt>{_IDENT})\s*$")
_REL = re.compile(rf"rel\s+(?P<first>{_IDENT})\s+(?P<second>{_IDENT})\s*$")


def parse_quiver(text: str) -> GentleQuiver:
    """Parse the quiver DSL. Errors carry 1-based line and column numbers.
    Gentleness is not checked here; see :func:`validate_gentle`."""
    name = "Q"
    vertices: list[str] = []
    arrows: list[Arrow] = []
    relations: list[tuple[str, str]] = []
    where: dict[str, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if not stripped:
            continue
        col = len(body) - len(stripped) + 1
        keyword = stripped.split()[0]
        if keyword == "quiver":
            m = _QUIVER.match(stripped)
            if not m:
                raise DSLError("expected 'quiver <name>'", lineno, col)
            name = m["name"]
        elif keyword == "vertex":
            m = _VERTEX.match(stripped)
            if not m:
                bad = _first_bad_token(stripped, col, start=1)
                raise DSLError("expected 'vertex <id> ...'", lineno, bad)
            for tok in re.finditer(_IDENT, m.group(1)):
                if tok[0] in vertices:
                    raise DSLError(f"vertex {tok[0]!r} declared twice", lineno, col + m.start(1) + tok.start())
                vertices.append(tok[0])
        elif keyword == "arrow":
            m = _ARROW.match(stripped)
            if not m:
                raise DSLError("expected 'arrow <label>: <src> -> <tgt>'", lineno, col)
            for group in ("src", "tgt"):
                if m[group] not in vertices:
                    raise DSLError(f"unknown vertex {m[group]!r}", lineno, col + m.start(group))
            if any(a.label == m["label"] for a in arrows):
                raise DSLError(f"arrow {m['label']!r} declared twice", lineno, col + m.start("label"))
            arrows.append(Arrow(m["label"], m["src"], m["tgt"]))
            where[m["label"]] = (lineno, col)
        elif keyword == "rel":
            m = _REL.match(stripped)
            if not m:
                raise DSLError("expected 'rel <first> <second>'", lineno, col)
            labels = {a.label: a for a in arrows}
            for group in ("first", "second"):
                if m[group] not in labels:
                    raise DSLError(f"unknown arrow {m[group]!r}", lineno, col + m.start(group))
            if labels[m["first"]].target != labels[m["second"]].source:
                raise DSLError(
                    f"{m['first']} then {m['second']} is not a path", lineno, col + m.start("first")
                )
            relations.append((m["first"], m["second"]))
        else:
            raise DSLError(f"unknown keyword {keyword!r}", lineno, col)
    if not vertices:
        raise DSLError("no vertices declared", max(1, len(text.splitlines())), 1)
    try:
        return GentleQuiver(vertices, arrows, relations, name=name)
    except QuiverError as exc:
        raise DSLError(str(exc), 1, 1) from exc


def _first_bad_token(line: str, col: int, start: int) -> int:
    pos = 0
    for i, tok in enumerate(line.split()):
        pos = line.index(tok, pos)
        if i >= start and not re.fullmatch(_IDENT, tok):
            return col + pos
        pos += len(tok)
    return col


def emit_quiver(q: GentleQuiver) -> str:
    lines = [f"quiver {q.name}", "vertex " + " ".join(q.vertices)]
    lines += [f"arrow {a.label}: {a.source} -> {a.target}" for a in q.arrows.values()]
    lines += [f"rel {f} {s}" for f, s in q.relations]
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r"^(?P<label>[A-Za-z0-9_]+)(?P<inv>\^-1|-)?$")


def parse_string(q: GentleQuiver, text: str) -> StringWord:
    """Parse a string literal; composability is checked, string rules are not."""
    tokens = [t for t in re.split(r"[\s·]+", text.strip()) if t]
    if not tokens:
        raise InvalidString("empty string literal")
    if len(tokens) == 1 and tokens[0] not in q.arrows:
        m = re.fullmatch(r"e_(.+)", tokens[0])
        if m and m.group(1) in q.vertices:
            return StringWord.lazy(m.group(1))
    letters = []
    for tok in reversed(tokens):
        m = _TOKEN.match(tok)
        if not m or m["label"] not in q.arrows:
            raise InvalidString(f"unknown letter {tok!r}")
        letters.append(Letter(m["label"], -1 if m["inv"] else 1))
    return make_word(q, letters)


class Term(NamedTuple):
    kind: str  # "string" or "band"
    word: StringWord
    power: int
    eigenvalue: int | None = None
    size: int | None = None


_TERM = re.compile(
    r"\s*(?:M\((?P<str>[^()]*)\)|B\((?P<band>[^();]*);(?P<lam>[^();]*);(?P<d>[^();]*)\))"
    r"(?:\^(?P<pow>\d+))?\s*"
)


def parse_module(q: GentleQuiver, text: str) -> list[Term]:
    """Parse ``M(a) + M(b a)^2 + B(b^-1 a; 2; 1)``."""
    terms = []
    for part in _split_plus(text):
        m = _TERM.fullmatch(part)
        if not m:
            raise InvalidString(f"cannot read module term {part.strip()!r}")
        power = int(m["pow"]) if m["pow"] else 1
        if m["str"] is not None:
            terms.append(Term("string", parse_string(q, m["str"]), power))
        else:
            terms.append(
                Term("band", parse_string(q, m["band"]), power, int(m["lam"]), int(m["d"]))
            )
    return terms


def module_from_text(q: GentleQuiver, text: str, field) -> Representation:
    """Build the (ledgered) representation described by a module expression."""
    summands = []
    for t in parse_module(q, text):
        s = Summand("string", t.word) if t.kind == "string" else Summand("band", t.word, t.eigenvalue, t.size)
        summands += [s] * t.power
    return from_summands(q, summands, field)


def _split_plus(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if any(not p.strip() for p in parts):
        raise InvalidString("empty module term")
    return parts


@dataclass(frozen=True)
class JordanFormData:
    """A partition (weakly decreasing parts) for each vertex."""

    parts: tuple[tuple[str, tuple[int, ...]], ...]

    @classmethod
    def from_dict(cls, data: dict, vertices=None) -> "JordanFormData":
        order = list(vertices) if vertices is not None else list(data)
        return cls(tuple((v, tuple(sorted(data.get(v, ()), reverse=True))) for v in order))

    def as_dict(self) -> dict[str, tuple[int, ...]]:
        return dict(self.parts)

    def __getitem__(self, v: str) -> tuple[int, ...]:
        return self.as_dict()[v]

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.parts)

    def dims(self) -> dict[str, int]:
        return {v: sum(p) for v, p in self.parts}

    def __str__(self) -> str:
        return ";".join(f"{v}:[{','.join(map(str, p)) or '0'}]" for v, p in self.parts)


def parse_jf(text: str, vertices=None) -> JordanFormData:
    data = {}
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        m = re.fullmatch(r"(?P<v>[^:\s]+)\s*:\s*\[(?P<parts>[\d,\s]*)\]", chunk)
        if not m:
            raise ValueError(f"cannot read Jordan data {chunk!r}")
        nums = [int(x) for x in m["parts"].replace(" ", "").split(",") if x]
        if any(x < 0 for x in nums):
            raise ValueError("negative part")
        data[m["v"]] = tuple(x for x in nums if x > 0)
    if vertices is not None:
        unknown = set(data) - set(vertices)
        if unknown:
            raise ValueError(f"unknown vertices {sorted(unknown)}")
    return JordanFormData.from_dict(data, vertices)
