"""Generic Jordan forms: the structural formula, the shift endomorphism that
realises it, and the search over a prime field that checks it.

Run with ``python3 demos/generic_jordan_form.py``.
"""

from gentle_jordan import PrimeField, construct_shift_endo, genjf, genjf_oracle, genjf_structural
from gentle_jordan.dsl import module_from_text
from gentle_jordan.fixtures import load_fixture
from gentle_jordan.jordan import endo_jordan_data

F2 = PrimeField(2)

# %% On A_2 the sum of simples and the projective share their Jordan data.
a2 = load_fixture("a2")
for expr in ("M(e_1) + M(e_2)", "M(a)"):
    print(expr, "->", genjf(module_from_text(a2, expr, F2), engine="oracle").jf)

# %% Every summand below passes through vertex 1 once, so one block per vertex is reached.
star = load_fixture("star4")
X = module_from_text(star, "M(e_1) + M(a) + M(c^-1 a) + M(b a)", F2)
print("structural:", genjf_structural(X, "1"))
N = construct_shift_endo(X, "1")
print("shift endomorphism at vertex 1:\n", N.maps["1"])
print("its Jordan data:", endo_jordan_data(X, N))

res = genjf_oracle(X, prime=2)
print(f"search over GF(2): {res.jf} ({res.mode}, exact={res.exhaustive})")

# %% At vertex 2 the structural route does not apply; the search still works
# and finds a vertex with two blocks.
Y = module_from_text(star, "M(b) + M(a) + M(c^-1 a) + M(c)", F2)
r = genjf(Y, vertex_hint="2")
print(f"engine {r.engine}: {r.jf}")
