"""
Colored patterns against monochromatic Boolean lattices
=======================================================

"""

from posetramsey.combinatorics import known_bounds
from posetramsey.poset_core import build, max_alternating
from posetramsey.search import eh_number

for expr, n in [('ALT("rbr",2)', 1), ('ALT("rbr",3)', 2), ('colored(Q(2),"brbb")', 2),
                ('colored(Q(2),"brrb")', 2), ('colored(Q(2),"rrbb")', 2)]:
    cp = build(expr)
    rec = known_bounds(expr, n)
    print(f"{expr:22s} n={n}: computed {eh_number(cp, n)}, table [{rec['lower']}, {rec['upper']}]")

print("longest alternating run of rrbbr:", max_alternating(build('colored(C(5),"rrbbr")')))
