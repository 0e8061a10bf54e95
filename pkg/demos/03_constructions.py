"""
Lower-bound colorings and known bounds
======================================

"""

from posetramsey.combinatorics import alpha, known_bounds, n_star
from posetramsey.constructions import claims, shrub_forest_sample, verify_coloring

# each construction comes with the objects it claims to avoid
for name, params in [("two_chain", (4,)), ("cc", (2, 2)), ("ccc", (1, 2, 2, 1)),
                     ("antichain_layered", (1, 1)), ("dn", (2,)), ("vn", (2,)),
                     ("eh_chain", (6, 2, [0b000001], [0b000110]))]:
    c, forbid = claims(name, *params)
    rep = verify_coloring(c, forbid)
    print(f"{name:18s} Q_{c.dim}  blue={len(c.blue_masks()):3d}  ok={rep.ok}")

# a sparse blue forest of shrubs on a 30-dimensional lattice
forest = shrub_forest_sample(30, 2, seed=1, ys=[0b11])
print("shrub forest blue vertices:", len(forest.blue_masks()))

# closed forms and the bounds table
print("alpha(1..10):", [alpha(n) for n in range(1, 11)])
print("N*(2..6):", [n_star(n) for n in range(2, 7)])
for P, n in [("C(3)", 2), ("A(3)", 2), ("A(5)", 2), ("CC(3,1)", 4), ("D(2)", None), ("V(3)", None)]:
    rec = known_bounds(P, n)
    print(f"{P:8s} n={n}: [{rec['lower']}, {rec['upper']}] {rec['source']}"
          + (f" ({rec['note']})" if rec["note"] else ""))
