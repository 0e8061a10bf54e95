"""
Exact poset Ramsey numbers by search
====================================

"""

from posetramsey.lattice import encode
from posetramsey.poset_core import build
from posetramsey.search import DecisionProblem, decide, ramsey_scan, verify_free

q2 = build("Q(2)")

# scan N upwards; the first exhausted N is the Ramsey number
for cert in ramsey_scan("induced", q2, q2):
    print(cert.sat_line() if cert.satisfiable else cert.unsat_line())

# one dimension lower a witness exists, and it re-verifies independently
cert = decide(DecisionProblem("induced", q2, q2, 3))
w = cert.witness
print("witness blue vertices:", [format(m, "03b") for m in w.blue_masks()])
print("re-verified:", verify_free(w, [(q2, "induced", "b"), (q2, "induced", "r")]))

# the coloring file format
print(encode(w))

# a few more values
for P, Q in [("C(3)", "Q(2)"), ("A(3)", "Q(2)"), ("CC(2,2)", "Q(2)"), ("V(2)", "V(2)")]:
    certs = ramsey_scan("induced", build(P), build(Q))
    print(f"R({P}, {Q}) = {certs[-1].N}")
