"""
Posets from the expression language
===================================

"""

from posetramsey.embed import dim2
from posetramsey.poset_core import build, chain_cover, classify, height, is_series_parallel, width

# every pattern is built from a short expression
for expr in ["C(3)", "A(3)", "Q(2)", "par(C(2),C(1))", "ser(A(2),A(2))", "NPOSET", "SD(2,3)"]:
    p = build(expr)
    cl = classify(p)
    print(f"{expr:16s} n={p.n} h={height(p)} w={width(p)} dim2={dim2(p)[0]} "
          f"{cl.kind:10s} sp={is_series_parallel(p)}")

# Dilworth: a minimum chain cover has as many chains as the width
p = build("CC(4,4,1)")
print("chain cover of CC(4,4,1):", chain_cover(p))

# colored posets carry one letter per vertex
cp = build('colored(Q(2),"brbb")')
print("colored Q2:", cp.colors)
