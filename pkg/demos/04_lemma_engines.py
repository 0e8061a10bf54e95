"""
Constructive lemma engines
==========================

"""

import random

from posetramsey.engines import (blocker_report, chain_lemma, duality_witness, phase_partition,
                                 reduce_blocker)
from posetramsey.lattice import Coloring, layered_coloring

rnd = random.Random(3)

# chain lemma: a red X-good copy of Q(X), or a blue Y-chain
c = Coloring(4, rnd.getrandbits(16))
out = chain_lemma(c, 0b0011, [2, 3])
print("chain lemma outcome:", out.kind, "validated:", out.validate(c, 0b0011))

# blockers in Q({y1, y2, x1, x2}) with Y = {y1, y2}
F = [0b0100 | y for y in range(4)]
print("x1 + Q(Y) is a blocker:", blocker_report(F, 0b0011, 0b1111).is_blocker)
print("a critical sub-blocker of the full lattice:", reduce_blocker(list(range(8)), 0b100, 0b111))

# duality: a blue-Lambda-free coloring has a red copy or a blue shrub, never both
c = Coloring.from_blue(2, [0b00, 0b11])
w = duality_witness(c, 0b01, 0b10)
print("duality:", w.kind, dict(w.shrub.xi) if w.kind == "blue" else w.red_copy.images)

# phases of a coloring free of a colored chain
c = Coloring.from_string("brrrbbbbrrrbbrbb")
print("phase sizes:", [len(p) for p in phase_partition(c, "rrbr")])
print("two blue layers:", [len(p) for p in phase_partition(layered_coloring(3, {0, 1}), "rbr")])
