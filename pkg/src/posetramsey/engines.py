"""Constructive lemma engines: chain lemma, blob completion, blockers,
the Lambda-free duality witness and Erdos-Hajnal phases.

Vertices are masks over the ground set of the coloring.  An X-good map is a
dict from submasks of X to host masks whose X-part equals the key.
"""

from dataclasses import dataclass

from .embed import FactorialTree, GoodEmbedding, Shrub, find_copy, subsets_of, verify_shrub, y_chain
from .errors import (InvalidHomomorphismError, NotABlockerError, NotFreeError,
                     NotLambdaFreeError, RangeError, SizeError, VolumeError)
from .lattice import Blob, full_mask, iter_bits, popcount
from .poset_core import LAMBDA, ColoredPoset

CHAIN_LEMMA_CAP = 12
BLOCKER_F_CAP = 12
BLOCKER_Y_CAP = 4


def _order(masks):
    return sorted(masks, key=lambda s: (popcount(s), s))


def _mask_of(elems):
    m = 0
    for e in elems:
        m |= 1 << e
    return m


def _all_red(c, masks):
    return all(not c.is_blue(m) for m in masks)


def xgood_embeddings(X, Y):
    """Yield every X-good embedding of Q(X) into Q(X ∪ Y) as a dict.

    These are exactly the maps X' -> X' ∪ g(X') for monotone g: Q(X) -> Q(Y).
    """
    dom = subsets_of(X)
    ys = subsets_of(Y)
    below = {s: [s & ~(1 << e) for e in iter_bits(s)] for s in dom}
    g = {}

    def rec(i):
        if i == len(dom):
            yield {s: s | g[s] for s in dom}
            return
        s = dom[i]
        lo = 0
        for t in below[s]:
            lo |= g[t]
        for v in ys:
            if v & lo == lo:
                g[s] = v
                yield from rec(i + 1)
        g.pop(s, None)

    yield from rec(0)


def validate_red_copy(c, emb, X):
    return (emb.X == X and emb.is_full() and emb.is_x_good() and emb.is_embedding()
            and _all_red(c, emb.image()))


# ---- chain lemma ----

@dataclass
class ChainLemmaOutcome:
    red_copy: GoodEmbedding = None
    blue_chain: list = None
    ell: dict = None
    tau: tuple = ()

    @property
    def kind(self):
        return "red" if self.red_copy is not None else "blue"

    def validate(self, c, X):
        if (self.red_copy is None) == (self.blue_chain is None):
            return False
        if self.red_copy is not None:
            return validate_red_copy(c, self.red_copy, X)
        return y_chain(self.blue_chain, self.tau, c, "b")


def chain_lemma(c, X, tau):
    """Red X-good copy of Q(X) or a blue Y-chain following tau."""
    N = c.dim
    if X >> N:
        raise RangeError("X is not a subset of the ground set")
    n = popcount(X)
    if n > CHAIN_LEMMA_CAP:
        raise SizeError(f"|X| = {n} exceeds {CHAIN_LEMMA_CAP}")
    tau = tuple(tau)
    Y = full_mask(N) & ~X
    if sorted(tau) != list(iter_bits(Y)):
        raise RangeError("tau must order exactly the elements outside X")
    k = len(tau)
    prefix = [0]
    for y in tau:
        prefix.append(prefix[-1] | 1 << y)

    ell = {}
    chain_of = {}
    best = {}  # X' -> (max ell over proper subsets, least maximizing subset)
    for S in subsets_of(X):
        if S == 0:
            lo, U = 0, None
        else:
            cand = None
            for e in iter_bits(S):
                T = S & ~(1 << e)
                for val, sub in (best[T], (ell[T], T)):
                    if sub is None:
                        continue
                    if cand is None or val > cand[0] or (val == cand[0] and sub < cand[1]):
                        cand = (val, sub)
            lo, U = cand
        best[S] = (lo, U) if S else (-1, None)
        base = chain_of[U] if U is not None else []
        hit = None
        for l in range(lo, k + 1):
            if not c.is_blue(S | prefix[l]):
                hit = l
                break
        if hit is None:
            chain = base + [S | prefix[l] for l in range(lo, k + 1)]
            return ChainLemmaOutcome(blue_chain=chain, tau=tau)
        ell[S] = hit
        chain_of[S] = base + [S | prefix[l] for l in range(lo, hit)]
    images = {S: S | prefix[ell[S]] for S in ell}
    return ChainLemmaOutcome(red_copy=GoodEmbedding(X, images), ell=ell, tau=tau)


# ---- blob lemmas ----

@dataclass
class BlobOutcome:
    red_copy: GoodEmbedding = None
    blue_blob: Blob = None
    blocks: tuple = ()

    @property
    def kind(self):
        return "red" if self.red_copy is not None else "blue"


def blob_completion(c, X, t, phi, m):
    """Extend a red X-good embedding of the t-truncated Q(X) to all of Q(X),
    or return a blue blob of dimension m."""
    N = c.dim
    n = popcount(X)
    if not 0 <= t <= n:
        raise RangeError("truncation t must lie in 0..|X|")
    images = phi.images if isinstance(phi, GoodEmbedding) else dict(phi)
    dom = [s for s in subsets_of(X) if popcount(s) <= t]
    if sorted(images) != sorted(dom):
        raise RangeError("phi must be defined exactly on subsets of X of size <= t")
    U = 0
    for v in images.values():
        U |= v
    if popcount(U) > N - (n - t) * m:
        raise VolumeError(f"volume {popcount(U)} exceeds N - (n - t) m = {N - (n - t) * m}")
    # at t = 0 the image misses X, so reserve X explicitly
    free = [e for e in range(N) if not (U | X) >> e & 1]
    if len(free) < (n - t) * m:
        raise VolumeError("not enough ground elements outside the embedded part")
    blocks = {}
    for j, i in enumerate(range(t + 1, n + 1)):
        blocks[i] = _mask_of(free[j * m:(j + 1) * m])
    out = dict(images)
    rest = U & ~X
    for S in subsets_of(X):
        size = popcount(S)
        if size <= t:
            continue
        base = S | rest
        for i in range(t + 1, size):
            base |= blocks[i]
        blob = Blob(base, blocks[size])
        red = [v for v in _order(blob.vertices()) if not c.is_blue(v)]
        if not red:
            return BlobOutcome(blue_blob=blob, blocks=tuple(blocks[i] for i in sorted(blocks)))
        out[S] = red[0]
    return BlobOutcome(red_copy=GoodEmbedding(X, out), blocks=tuple(blocks[i] for i in sorted(blocks)))


@dataclass
class MiddleLayersOutcome:
    red_layers: dict = None
    blue_blob: Blob = None
    s: int = 0
    t: int = 0

    @property
    def kind(self):
        return "red" if self.red_layers is not None else "blue"

    def validate(self, c, n):
        X = full_mask(n)
        if self.blue_blob is not None:
            b = self.blue_blob
            return popcount(b.t_mask) == n and b.is_monochromatic(c, "b")
        want = [s for s in subsets_of(X) if self.s <= popcount(s) <= self.t]
        if sorted(self.red_layers) != sorted(want):
            return False
        emb = GoodEmbedding(X, self.red_layers)
        return emb.is_x_good() and emb.is_embedding() and _all_red(c, emb.image())


def middle_layers_engine(c, n, s, t):
    """Blue Q_n blob or a red copy of layers s..t of Q([n]) in Q_{(t-s+2)n}."""
    if not 0 <= s <= t <= n:
        raise RangeError("need 0 <= s <= t <= n")
    if n > 3:
        raise SizeError("middle_layers_engine supports n <= 3")
    N = (t - s + 2) * n
    if c.dim != N:
        raise RangeError(f"coloring must have dimension (t - s + 2) n = {N}")
    X = full_mask(n)
    blocks = {i: full_mask(n) << (n * (i - s + 1)) for i in range(s, t + 1)}
    out = {}
    for S in subsets_of(X):
        size = popcount(S)
        if not s <= size <= t:
            continue
        base = S
        for i in range(s, size):
            base |= blocks[i]
        blob = Blob(base, blocks[size])
        red = [v for v in _order(blob.vertices()) if not c.is_blue(v)]
        if not red:
            return MiddleLayersOutcome(blue_blob=blob, s=s, t=t)
        out[S] = red[0]
    return MiddleLayersOutcome(red_layers=out, s=s, t=t)


# ---- blockers ----

@dataclass
class BlockerReport:
    is_blocker: bool
    avoiding: dict = None
    nodes: int = 0


def _blocker_args(F, Y, Z):
    F = _order(set(F))
    if Z is None:
        Z = Y
        for f in F:
            Z |= f
    if Y & ~Z:
        raise RangeError("Y must be a subset of Z")
    if any(f & ~Z for f in F):
        raise RangeError("every vertex of F must be a subset of Z")
    return F, Y, Z


def _avoiding_homomorphisms(F, Y):
    """Depth-first search over Y-avoiding homomorphisms F -> Q(Y).

    F is processed in (popcount, mask) order, a linear extension, and each
    value must contain the values of all earlier subsets.  Yields maps and
    finally the node count.
    """
    ys = subsets_of(Y)
    preds = [[j for j in range(i) if F[j] & F[i] == F[j]] for i in range(len(F))]
    psi = [0] * len(F)
    nodes = 0

    def rec(i):
        nonlocal nodes
        nodes += 1
        if i == len(F):
            yield dict(zip(F, psi))
            return
        lo = 0
        for j in preds[i]:
            lo |= psi[j]
        forbidden = F[i] & Y
        for v in ys:
            if v & lo == lo and v != forbidden:
                psi[i] = v
                yield from rec(i + 1)

    yield from rec(0)
    yield nodes


def blocker_report(F, Y, Z=None):
    F, Y, Z = _blocker_args(F, Y, Z)
    if len(F) > BLOCKER_F_CAP:
        raise SizeError(f"|F| = {len(F)} exceeds {BLOCKER_F_CAP}")
    if popcount(Y) > BLOCKER_Y_CAP:
        raise SizeError(f"|Y| = {popcount(Y)} exceeds {BLOCKER_Y_CAP}")
    gen = _avoiding_homomorphisms(F, Y)
    first = next(gen)
    if isinstance(first, dict):
        return BlockerReport(False, first, 0)
    return BlockerReport(True, None, first)


def blocker_definition_check(F, Y, Z=None):
    """Blocker test straight from the definition: every X-good copy of Q(X) meets F."""
    F, Y, Z = _blocker_args(F, Y, Z)
    Fs = set(F)
    X = Z & ~Y
    for emb in xgood_embeddings(X, Y):
        if not Fs.intersection(emb.values()):
            return False
    return True


def is_homomorphism(F, Y, psi):
    if set(psi) != set(F):
        return False
    if any(v & ~Y for v in psi.values()):
        return False
    return all(psi[a] & psi[b] == psi[a] for a in F for b in F if a & b == a)


def blocker_to_embedding(F, Y, psi, Z=None):
    """X-good embedding of Q(X) missing F, built from a Y-avoiding homomorphism."""
    F, Y, Z = _blocker_args(F, Y, Z)
    psi = dict(psi)
    if not is_homomorphism(F, Y, psi):
        raise InvalidHomomorphismError("psi is not a homomorphism F -> Q(Y)")
    if any(psi[f] == f & Y for f in F):
        raise InvalidHomomorphismError("psi is not Y-avoiding")
    X = Z & ~Y
    dom = subsets_of(X)
    phi = {s: s for s in dom}
    Fs = set(F)
    steps = 0
    while True:
        hit = [s for s in dom if phi[s] in Fs]
        if not hit:
            break
        Xi = hit[0]
        add = psi[phi[Xi]]
        for s in dom:
            if s & Xi == Xi:
                phi[s] |= add
        steps += 1
        if steps > len(dom) * (popcount(Y) + 1):
            raise InvalidHomomorphismError("iteration failed to terminate")
    return GoodEmbedding(X, phi)


def reduce_blocker(F, Y, Z=None):
    """Critical sub-blocker by greedy deletion in ascending mask order."""
    F, Y, Z = _blocker_args(F, Y, Z)
    if not blocker_report(F, Y, Z).is_blocker:
        raise NotABlockerError("F is not a Y-blocker")
    cur = set(F)
    for f in sorted(F):
        trial = cur - {f}
        if blocker_report(trial, Y, Z).is_blocker:
            cur = trial
    return _order(cur)


def is_critical(F, Y, Z=None):
    F, Y, Z = _blocker_args(F, Y, Z)
    if not blocker_report(F, Y, Z).is_blocker:
        return False
    return all(not blocker_report([g for g in F if g != f], Y, Z).is_blocker for f in F)


def blocker_restrict(F, Y, a, Z=None):
    """The two (Y - {a})-blockers {F : a in F} and {F : a not in F}."""
    F, Y, Z = _blocker_args(F, Y, Z)
    if not Y >> a & 1:
        raise RangeError("a must be an element of Y")
    if popcount(Y) < 2:
        raise RangeError("restriction needs |Y| >= 2")
    if not blocker_report(F, Y, Z).is_blocker:
        raise NotABlockerError("F is not a Y-blocker")
    Y2 = Y & ~(1 << a)
    with_a = [f for f in F if f >> a & 1]
    without_a = [f for f in F if not f >> a & 1]
    for part in (with_a, without_a):
        if not blocker_report(part, Y2, Z).is_blocker:
            raise NotABlockerError("restriction is not a blocker")
    return with_a, without_a


# ---- Lambda-free duality ----

@dataclass
class DualityOutcome:
    red_copy: GoodEmbedding = None
    shrub: Shrub = None
    embeddable: frozenset = frozenset()

    @property
    def kind(self):
        return "red" if self.red_copy is not None else "blue"


def embeddability(c, X, Y):
    """Embeddable vertices with witnesses, by recursion on strict supersets.

    Returns {vertex: witness dict on supersets of its X-part} for embeddable
    vertices only.
    """
    Xs = subsets_of(X)
    Ys = subsets_of(Y)
    wit = {}
    # strict supersets first: decreasing total size handles both recursions
    for xp in reversed(Xs):
        for yp in reversed(Ys):
            v = xp | yp
            if c.is_blue(v):
                for y2 in Ys:
                    if y2 != yp and y2 & yp == yp and (xp | y2) in wit:
                        wit[v] = wit[xp | y2]
                        break
                continue
            ups = [x2 for x2 in Xs if x2 != xp and x2 & xp == xp]
            if all((x2 | yp) in wit for x2 in ups):
                wit[v] = _red_witness(c, xp, yp, X, Y, wit)
    return wit


def _red_witness(c, xp, yp, X, Y, wit):
    out = {}
    Xs = [s for s in subsets_of(X) if s & xp == xp]
    blue_parts = [s for s in Xs if c.is_blue(s | yp)]
    for x2 in Xs:
        inside = [s for s in blue_parts if s & x2 == s]
        minimal = [s for s in inside if not any(o != s and o & s == o for o in inside)]
        if not minimal:
            out[x2] = x2 | yp
        elif len(minimal) == 1:
            out[x2] = wit[minimal[0] | yp][x2]
        else:
            out[x2] = x2 | Y
    return out


def _walk_to_blue(c, xp, yp, X, emb):
    """From a non-embeddable vertex, climb in the X-part to a blue non-embeddable one."""
    while not c.is_blue(xp | yp):
        ups = [x2 for x2 in subsets_of(X) if x2 != xp and x2 & xp == xp and (x2 | yp) not in emb]
        xp = ups[0]
    return xp


def duality_witness(c, X, Y):
    """Red X-good copy of Q(X) or a blue Y-shrub, for blue-Lambda-free colorings."""
    if X & Y or (X | Y) != full_mask(c.dim):
        raise RangeError("X and Y must partition the ground set")
    if popcount(X) > 4 or popcount(Y) > 3:
        raise SizeError("duality_witness supports |X| <= 4 and |Y| <= 3")
    if find_copy(LAMBDA, "induced", c, color_filter="b") is not None:
        raise NotLambdaFreeError("coloring contains a blue copy of Lambda")
    wit = embeddability(c, X, Y)
    emb = frozenset(wit)
    if 0 in wit:
        return DualityOutcome(red_copy=GoodEmbedding(X, dict(wit[0])), embeddable=emb)
    ys = list(iter_bits(Y))
    tree = FactorialTree(ys)
    xpart = {(): _walk_to_blue(c, 0, 0, X, emb)}
    for seq in tree.vertices[1:]:
        parent = xpart[seq[:-1]]
        xpart[seq] = _walk_to_blue(c, parent, _mask_of(seq), X, emb)
    xi = {seq: xpart[seq] | _mask_of(seq) for seq in tree.vertices}
    shrub = Shrub(X, tuple(ys), xi)
    if not verify_shrub(shrub) or any(not c.is_blue(v) for v in xi.values()):
        raise NotLambdaFreeError("weak shrub failed to be a blue shrub")
    return DualityOutcome(shrub=shrub, embeddable=emb)


# ---- phases ----

def _chain_colors(Cdot):
    if isinstance(Cdot, str):
        return Cdot
    if isinstance(Cdot, ColoredPoset):
        p = Cdot.poset
        order = p.linear_extension()
        for a, b in zip(order, order[1:]):
            if not p.lt(a, b):
                raise RangeError("Cdot must be a colored chain")
        return "".join(Cdot.colors[v] for v in order)
    return "".join(Cdot)


def phase_levels(c, colors):
    """g(Z) = length of the longest prefix of the colored chain below Z."""
    t = len(colors)
    g = {}
    for Z in _order(range(c.size)):
        gs = 0
        for e in iter_bits(Z):
            gs = max(gs, g[Z & ~(1 << e)])
        if gs < t and c.color(Z) == colors[gs]:
            gs += 1
        g[Z] = gs
    return g


def phase_partition(c, Cdot):
    """Phases F_1..F_t of a Cdot-free coloring as sorted mask lists."""
    colors = _chain_colors(Cdot)
    if any(ch not in "br" for ch in colors) or not colors:
        raise RangeError("chain colors must be a nonempty b/r string")
    t = len(colors)
    g = phase_levels(c, colors)
    if any(v >= t for v in g.values()):
        raise NotFreeError("coloring contains the colored chain")
    phases = [[] for _ in range(t)]
    for Z in range(c.size):
        phases[g[Z]].append(Z)
    return phases


def check_phases(c, colors, phases):
    """Partition, monotonicity and the color rule of every phase."""
    colors = _chain_colors(colors)
    t = len(colors)
    where = {}
    for i, ph in enumerate(phases):
        for Z in ph:
            if Z in where:
                return False
            where[Z] = i
    if len(where) != c.size:
        return False
    for Z in range(c.size):
        for e in iter_bits(Z):
            if where[Z & ~(1 << e)] > where[Z]:
                return False
    other = {"b": "r", "r": "b"}
    for i, ph in enumerate(phases):
        ci = colors[i]
        if i == 0 or colors[i - 1] != ci:
            if any(c.color(Z) != other[ci] for Z in ph):
                return False
            continue
        members = set(ph)
        for Z in ph:
            minimal = not any(W != Z and W & Z == W for W in members)
            want = ci if minimal else other[ci]
            if c.color(Z) != want:
                return False
    return True
