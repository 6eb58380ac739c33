"""Bundled example quivers, stored as DSL files next to this module."""

from __future__ import annotations

from importlib import resources

from ..dsl import parse_quiver
from ..quiver import GentleQuiver


def fixture_names() -> list[str]:
    return sorted(
        p.name[: -len(".quiver")]
        for p in resources.files(__name__).iterdir()
        if p.name.endswith(".quiver")
    )


def fixture_text(name: str) -> str:
    path = resources.files(__name__) / f"{name}.quiver"
    if not path.is_file():
        raise KeyError(f"no fixture named {name!r}; known: {', '.join(fixture_names())}")
    return path.read_text()


def load_fixture(name: str) -> GentleQuiver:
    return parse_quiver(fixture_text(name))
