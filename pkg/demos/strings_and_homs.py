"""Walk through strings, string modules and Hom spaces on two small quivers.

Run with ``python3 demos/strings_and_homs.py``.
"""

from gentle_jordan import QQ, hom_dim_combinatorial, hom_space, parse_string, string_module, strings_through
from gentle_jordan.dsl import module_from_text
from gentle_jordan.fixtures import load_fixture
from gentle_jordan.strings import substring_occurrences

# %% A quiver with two arrows into vertex 2 and one out of it.
star = load_fixture("star4")
print(star)
for m in star.vertices:
    print(f"strings through {m}:", ", ".join(map(str, strings_through(star, m))))

# %% A string module has one basis vector per position of the walk.
w = parse_string(star, "c^-1 a")
x = string_module(star, w, QQ)
print(f"M({w}) has dimension vector {x.dim_vector()}")

# Top and bottom substrings are what Hom counts.
for occ in substring_occurrences(w):
    flags = [name for name, on in (("top", occ.on_top), ("bottom", occ.at_bottom)) if on]
    print(f"  {occ.word!s:10} positions {occ.start}..{occ.end} {' '.join(flags)}")

# %% Counting versus solving: both give the same dimension.
q = load_fixture("morphisms")
for u, v in [("e_1", "a"), ("a", "a"), ("a", "b"), ("c", "b")]:
    su, sv = parse_string(q, u), parse_string(q, v)
    linear = len(hom_space(string_module(q, su, QQ), string_module(q, sv, QQ)))
    print(f"Hom(M({u}), M({v})): count {hom_dim_combinatorial(su, sv)}, kernel {linear}")

X = module_from_text(q, "M(e_1) + M(a) + M(c)^2", QQ)
Y = module_from_text(q, "M(a) + M(b)", QQ)
(f,) = hom_space(X, Y)
print("the single morphism X -> Y is nonzero at", sorted(v for v, m in f.maps.items() if m.any()))
