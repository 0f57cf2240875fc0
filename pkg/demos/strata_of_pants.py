# Boundary strata of the moduli of pairs of pants and the annulus.
# Run: python demos/strata_of_pants.py

# %%
from collections import Counter

from bordered_moduli import MarkedTopType, enumerate_strata
from bordered_moduli.pants import associahedron, check_k5_identification, graded_isomorphism
from bordered_moduli.strata import degeneration_poset, node_census

pants = MarkedTopType.of(0, 3)
en = enumerate_strata(pants)
print("strata of", pants, "by dimension (top first):", en.counts(), "total", len(en))

# %% what kind of nodes live in each dimension
for dim in sorted(en.by_dim, reverse=True):
    kinds = Counter()
    for s in en.by_dim[dim]:
        c = node_census(s)
        kinds[tuple(k for k in ("E", "H1", "H2", "H3") for _ in range(c[k]))] += 1
    print(f"dim {dim}:", dict(kinds))

# %% the closure poset is the 3-dimensional associahedron
res = check_k5_identification()
print("pants poset ~ K5:", res.isomorphic, "| K5 f-vector", associahedron(3).f_vector)

# %% the annulus with two points on one circle is a pentagon
ann = MarkedTopType.of(0, 2, 0, (2, 0))
print("annulus (2,0):", enumerate_strata(ann).counts(),
      "| ~ K4:", graded_isomorphism(degeneration_poset(ann), associahedron(2)).isomorphic)

# %% one stratum in full
print(en.by_dim[0][0].to_json())
