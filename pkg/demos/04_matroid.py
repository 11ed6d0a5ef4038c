"""Rank inequality for binary matroids; coordinate subspaces are tight."""
from __future__ import annotations

from noisecube.matroid import coordinate_subspace, random_generator, verify_matroid

M = random_generator(4, 10, seed=3)
print(M.matrix())
for p in (0.1, 0.5, 0.9):
    c = verify_matroid(M, p)
    print(f"p={p}: lhs={c.lhs:.6f} rhs={c.rhs:.6f} slack={c.margin:.3g}")

c = verify_matroid(coordinate_subspace(8, [2, 5, 7]), 0.4)
print(f"coordinate subspace: slack={c.margin:.2g} equality={c.equality}")
