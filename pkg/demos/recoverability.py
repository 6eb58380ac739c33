"""Decide recoverability at every vertex of a few quivers, print the
counterexamples, and recover a module from its Jordan data.

Run with ``python3 demos/recoverability.py``.
"""

from gentle_jordan import decide, find_witness, parse_jf, recover, verify_witness
from gentle_jordan.fixtures import load_fixture
from gentle_jordan.recoverability import NoSolution

# %% Verdicts and, where they fail, a checked counterexample.
for name in ("chain3", "star4", "cycle3", "triangle", "kronecker"):
    q = load_fixture(name)
    for m in q.vertices:
        r = decide(q, m)
        line = f"{name:10} m={m}  jr={r.jr!s:5} cjr={r.cjr!s:5}"
        if not r.cjr:
            w = find_witness(q, m, report=r)
            verify_witness(w)
            line += f"  {w.construction}: X = {w.x.describe()}"
            line += f" | Y = {w.y.describe()}" if w.kind == "jr-pair" else f" | W differs on {w.arrow}"
        print(line)

# %% Recovery on the chain 1 -> 2 -> 3 at its middle vertex.
chain = load_fixture("chain3")
for text in ("1:[2];2:[4];3:[1]", "1:[0];2:[1];3:[0]", "1:[1];2:[1];3:[1]"):
    try:
        print(text, "->", recover(chain, "2", parse_jf(text, chain.vertices)).describe())
    except NoSolution as exc:
        print(text, "-> no module:", exc)
