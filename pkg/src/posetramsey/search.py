"""Exact decision procedure for Ramsey-type questions on Q_N.

Every forbidden object (a monochromatic pattern, or a colored pattern) is
enumerated once as a set of hyperedges over the vertices of Q_N.  An edge
lists, for each of its vertices, the color that would complete the copy.
The backtracking search assigns colors in (popcount, mask) order and keeps
one bit-sliced counter per edge: the number of its vertices that already
carry the completing color.  A counter reaching the edge size is a conflict,
one short of it forces the last vertex to the other color.

Symmetry breaking keeps a coloring only if its restriction to the first few
layers is lexicographically least in its orbit under permutations of the
ground set (and under the color swap when both targets coincide).  Layers
are invariant under those permutations and form a prefix of the assignment
order, so every orbit keeps its least member and no answer is lost.
"""

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .embed import find_copy, iter_copies, subsets_of
from .errors import BudgetExceeded, CapExceeded
from .lattice import Coloring, masks_by_level, popcount
from .poset_core import ColoredPoset, Poset, boolean_lattice, height, isomorphic

N_CAP = 6
FREE_N = 4
DEFAULT_BUDGET_MS = 900_000


def default_budget_ms():
    env = os.environ.get("PRL_BUDGET_MS")
    if env:
        return float(env)
    return DEFAULT_BUDGET_MS


@dataclass
class DecisionProblem:
    mode: str
    blue_pattern: object
    red_pattern: object = None
    N: int = 0
    n: int = None
    budget_ms: float = None
    node_limit: int = None
    symmetry: bool = True
    sym_layers: int = 2

    def forbidden(self):
        """List of (pattern, copy mode, color or None for colored copies)."""
        if self.mode in ("induced", "weak"):
            return [(_plain(self.blue_pattern), self.mode, "b"),
                    (_plain(self.red_pattern), self.mode, "r")]
        if self.mode == "eh":
            if not isinstance(self.blue_pattern, ColoredPoset):
                raise ValueError("eh mode needs a colored pattern")
            q = boolean_lattice(self.n)
            return [(self.blue_pattern, "colored", None), (q, "induced", "b"), (q, "induced", "r")]
        raise ValueError(f"unknown mode {self.mode!r}")

    def swap_symmetric(self):
        if self.mode == "eh":
            return False
        return isomorphic(_plain(self.blue_pattern), _plain(self.red_pattern))


def _plain(p):
    return p.poset if isinstance(p, ColoredPoset) else p


@dataclass
class Certificate:
    N: int
    witness: Coloring = None
    nodes: int = 0
    classes: int = 0
    ms: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def satisfiable(self):
        return self.witness is not None

    @property
    def exhausted(self):
        return self.witness is None

    def unsat_line(self):
        return f"UNSAT N={self.N} nodes={self.nodes} classes={self.classes} ms={int(round(self.ms))}"

    def to_text(self):
        from .lattice import encode
        if self.witness is not None:
            return encode(self.witness)
        return self.unsat_line() + "\n"


def parse_unsat_line(line):
    parts = line.split()
    if not parts or parts[0] != "UNSAT":
        raise ValueError("not an UNSAT line")
    vals = dict(p.split("=") for p in parts[1:])
    return {k: int(v) for k, v in vals.items()}


# ---- hyperedges ----

def _past(deadline):
    if deadline is not None and time.perf_counter() > deadline:
        raise BudgetExceeded("time budget exhausted")


def copy_edges(N, pattern, mode, color, deadline=None):
    """Deduplicated edges: tuples of (vertex, completing color) with color 1 = blue."""
    seen = set()
    out = []
    if color is None:
        poset, pcol = pattern.poset, pattern.colors
        for m in iter_copies(poset, "induced", N):
            if not len(seen) & 0xFFF:
                _past(deadline)
            e = tuple(sorted((m[i], 1 if pcol[i] == "b" else 0) for i in range(poset.n)))
            if e not in seen:
                seen.add(e)
                out.append(e)
    else:
        c = 1 if color == "b" else 0
        copy_mode = "weak" if mode == "weak" else "induced"
        for m in iter_copies(pattern, copy_mode, N):
            if not len(seen) & 0xFFF:
                _past(deadline)
            e = tuple(sorted((v, c) for v in m))
            if e not in seen:
                seen.add(e)
                out.append(e)
    return out


class _Group:
    """Edges of one size sharing a bit-sliced counter."""

    def __init__(self, K, edges, V, deadline=None):
        self.K = K
        self.edges = edges
        self.B = max(1, K.bit_length())
        self.inc = [[0, 0] for _ in range(V)]
        for idx, e in enumerate(edges):
            if not idx & 0x3FFF:
                _past(deadline)
            bit = 1 << idx
            for v, c in e:
                self.inc[v][c] |= bit
        self.all = (1 << len(edges)) - 1


class Engine:
    def __init__(self, N, edges, swap=False, symmetry=True, sym_layers=2, deadline=None):
        self.N = N
        self.V = 1 << N
        self.order = masks_by_level(N)
        self.pos = {m: i for i, m in enumerate(self.order)}
        by_size = {}
        for e in edges:
            by_size.setdefault(len(e), []).append(e)
        self.groups = [_Group(K, es, self.V, deadline) for K, es in sorted(by_size.items())]
        self.empty_edge = 0 in by_size
        self.symmetry = symmetry
        self.swap = swap
        # layer boundaries in assignment order
        bounds = []
        acc = 0
        for k in range(N + 1):
            acc += sum(1 for m in range(self.V) if popcount(m) == k)
            bounds.append(acc)
        self.bounds = bounds
        self.D = max(0, min(sym_layers, N + 1))
        self.sym_end = bounds[self.D - 1] if self.D else 0
        self._perm_cache = {}
        self._lex_memo = {}
        self.nodes = 0
        self.classes = 0

    # -- symmetry --

    def _perms(self, length):
        if length not in self._perm_cache:
            maps = []
            for sigma in itertools.permutations(range(self.N)):
                if list(sigma) == list(range(self.N)):
                    continue
                pm = []
                for i in range(length):
                    m = self.order[i]
                    img = 0
                    for b in range(self.N):
                        if m >> b & 1:
                            img |= 1 << sigma[b]
                    pm.append(self.pos[img])
                maps.append(pm)
            self._perm_cache[length] = maps
        return self._perm_cache[length]

    def lex_leader(self, col, length):
        x = tuple(col[self.order[i]] for i in range(length))
        key = (length, x)
        hit = self._lex_memo.get(key)
        if hit is not None:
            return hit
        ok = True
        cand = [(pm, 0) for pm in self._perms(length)]
        if self.swap:
            cand.append((list(range(length)), 1))
            cand.extend((pm, 1) for pm in self._perms(length))
        for pm, flip in cand:
            for i in range(length):
                y = x[pm[i]] ^ flip
                if y != x[i]:
                    if y < x[i]:
                        ok = False
                    break
            if not ok:
                break
        self._lex_memo[key] = ok
        return ok

    # -- propagation --

    def run(self, deadline=None, node_limit=None, prefix=None):
        """Return the satisfying color array, or None when exhausted.

        ``prefix`` optionally fixes colors of the first vertices in order
        (used to split work across processes).
        """
        V = self.V
        col = [-1] * V
        groups = self.groups
        state = [[0] * g.B for g in groups]
        self.nodes = 0
        self.classes = 0
        if self.empty_edge:
            return None

        def assign_all(queue):
            trail = []
            while queue:
                v, c = queue.pop()
                cur = col[v]
                if cur == c:
                    continue
                if cur != -1:
                    return False, trail
                col[v] = c
                trail.append(v)
                for gi, g in enumerate(groups):
                    E = g.inc[v][c]
                    if not E:
                        continue
                    sl = state[gi]
                    carry = E
                    for j in range(g.B):
                        t = sl[j] & carry
                        sl[j] ^= carry
                        carry = t
                        if not carry:
                            break
                    K = g.K
                    full = E
                    for j in range(g.B):
                        full &= sl[j] if K >> j & 1 else ~sl[j]
                    if full:
                        return False, trail
                    if K >= 1:
                        forced = E
                        K1 = K - 1
                        for j in range(g.B):
                            forced &= sl[j] if K1 >> j & 1 else ~sl[j]
                        while forced:
                            low = forced & -forced
                            forced ^= low
                            for w, req in g.edges[low.bit_length() - 1]:
                                if col[w] == -1:
                                    queue.append((w, 1 - req))
                                    break
            return True, trail

        # initial units from size-one edges
        init = []
        for g in groups:
            if g.K == 1:
                for e in g.edges:
                    init.append((e[0][0], 1 - e[0][1]))
        if prefix:
            for i, c in enumerate(prefix):
                init.append((self.order[i], c))
        ok, _ = assign_all(init)
        if not ok:
            return None

        order = self.order
        sym_end = self.sym_end
        use_sym = self.symmetry and self.D > 0
        bounds = self.bounds[:self.D]

        def dfs(p, sym_done):
            while p < V and col[order[p]] != -1:
                p += 1
            if not sym_done and p >= sym_end:
                if use_sym:
                    if not self.lex_leader(col, sym_end):
                        return False
                self.classes += 1
                sym_done = True
            elif use_sym and not sym_done:
                # prune early on completed inner layers
                done = 0
                for b in bounds:
                    if b <= p:
                        done = b
                if done and not self.lex_leader(col, done):
                    return False
            if p == V:
                return True
            self.nodes += 1
            if deadline is not None and time.perf_counter() > deadline:
                raise BudgetExceeded("time budget exhausted", self.nodes)
            if node_limit is not None and self.nodes > node_limit:
                raise BudgetExceeded("node budget exhausted", self.nodes)
            v = order[p]
            for c in (0, 1):
                saved = [list(sl) for sl in state]
                ok, trail = assign_all([(v, c)])
                if ok and dfs(p + 1, sym_done):
                    return True
                for w in trail:
                    col[w] = -1
                for gi, sl in enumerate(saved):
                    state[gi] = sl
            return False

        # slices are rebound on restore, so dfs reads them through ``state``
        if dfs(0, False):
            return list(col)
        return None


def _solve(N, forbidden, swap, symmetry, sym_layers, deadline=None, node_limit=None, prefix=None):
    edges = []
    for pattern, mode, color in forbidden:
        edges.extend(copy_edges(N, pattern, mode, color, deadline))
    eng = Engine(N, edges, swap=swap, symmetry=symmetry, sym_layers=sym_layers, deadline=deadline)
    col = eng.run(deadline=deadline, node_limit=node_limit, prefix=prefix)
    return col, eng.nodes, eng.classes


def verify_free(c, forbidden):
    """True iff c contains none of the forbidden objects (independent copy search)."""
    for pattern, mode, color in forbidden:
        if color is None:
            if find_copy(pattern, "colored", c) is not None:
                return False
        elif find_copy(pattern, mode, c, color_filter=color) is not None:
            return False
    return True


def _check_caps(N, budget_ms):
    if N > N_CAP:
        raise CapExceeded(f"N={N} above the search cap {N_CAP}")
    if N > FREE_N and budget_ms is None:
        return default_budget_ms()
    return budget_ms


def decide(p, threads=1):
    """Certificate for a DecisionProblem: witness coloring or exhaustion record."""
    budget_ms = _check_caps(p.N, p.budget_ms)
    forbidden = p.forbidden()
    swap = p.swap_symmetric()
    t0 = time.perf_counter()
    deadline = None if budget_ms is None else t0 + budget_ms / 1000.0
    if threads > 1:
        col, nodes, classes = _solve_parallel(p.N, forbidden, swap, p.symmetry, p.sym_layers,
                                              deadline, p.node_limit, threads)
    else:
        try:
            col, nodes, classes = _solve(p.N, forbidden, swap, p.symmetry, p.sym_layers,
                                         deadline, p.node_limit)
        except BudgetExceeded as exc:
            exc.ms = (time.perf_counter() - t0) * 1000
            raise
    ms = (time.perf_counter() - t0) * 1000
    if col is None:
        return Certificate(p.N, None, nodes, classes, ms)
    bits = 0
    for m, c in enumerate(col):
        if c == 1:
            bits |= 1 << m
    witness = Coloring(p.N, bits)
    if not verify_free(witness, forbidden):
        raise AssertionError("search produced a coloring that fails re-verification")
    return Certificate(p.N, witness, nodes, classes, ms)


def _worker(args):
    N, forbidden, swap, symmetry, sym_layers, deadline, node_limit, prefix = args
    try:
        return _solve(N, forbidden, swap, symmetry, sym_layers, deadline, node_limit, prefix)
    except BudgetExceeded as exc:
        return "budget", exc.nodes, 0


def _split_prefixes(N, depth):
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=depth)]


def _solve_parallel(N, forbidden, swap, symmetry, sym_layers, deadline, node_limit, threads):
    V = 1 << N
    depth = min(V, max(1, (threads * 4 - 1).bit_length()))
    jobs = [(N, forbidden, swap, symmetry, sym_layers, deadline, node_limit, pre)
            for pre in _split_prefixes(N, depth)]
    nodes = classes = 0
    budget_hit = False
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for col, k, c in pool.map(_worker, jobs):
            if col == "budget":
                budget_hit = True
                nodes += k
                continue
            nodes += k
            classes += c
            if col is not None:
                pool.shutdown(wait=False, cancel_futures=True)
                return col, nodes, classes
    if budget_hit:
        raise BudgetExceeded("time budget exhausted", nodes)
    return None, nodes, classes


def ramsey_scan(mode, blue_pattern, red_pattern, max_N=N_CAP, budget_ms=None,
                symmetry=True, sym_layers=2, threads=1, start=None):
    """Certificates from the trivial lower bound up to the first exhausted N."""
    P, Q = _plain(blue_pattern), _plain(red_pattern)
    N = max(height(P) + height(Q) - 2, 0) if start is None else start
    certs = []
    while N <= max_N:
        if N > N_CAP:
            break
        prob = DecisionProblem(mode, P, Q, N, budget_ms=budget_ms, symmetry=symmetry,
                               sym_layers=sym_layers)
        cert = decide(prob, threads=threads)
        certs.append(cert)
        if cert.exhausted:
            return certs
        N += 1
    raise CapExceeded(f"no exhausted dimension up to N={min(max_N, N_CAP)}")


def ramsey(mode, blue_pattern, red_pattern, max_N=N_CAP, budget_ms=None,
           symmetry=True, sym_layers=2, threads=1):
    return ramsey_scan(mode, blue_pattern, red_pattern, max_N, budget_ms,
                       symmetry, sym_layers, threads)[-1].N


def eh_scan(pattern, n, max_N=N_CAP, budget_ms=None, symmetry=True, sym_layers=2, threads=1):
    if not isinstance(pattern, ColoredPoset):
        raise ValueError("eh_number needs a colored pattern")
    N = n
    certs = []
    while N <= min(max_N, N_CAP):
        prob = DecisionProblem("eh", pattern, None, N, n=n, budget_ms=budget_ms,
                               symmetry=symmetry, sym_layers=sym_layers)
        cert = decide(prob, threads=threads)
        certs.append(cert)
        if cert.exhausted:
            return certs
        N += 1
    raise CapExceeded(f"no exhausted dimension up to N={min(max_N, N_CAP)}")


def eh_number(pattern, n, max_N=N_CAP, budget_ms=None, symmetry=True, sym_layers=2, threads=1):
    return eh_scan(pattern, n, max_N, budget_ms, symmetry, sym_layers, threads)[-1].N


# ---- m_P(k) at tiny scale ----

def xgood_images(N, k):
    """Image masks of every X-good embedding of Q(X) in Q([N]), Y = first k elements."""
    from .engines import xgood_embeddings
    Y = (1 << k) - 1
    X = ((1 << N) - 1) & ~Y
    out = []
    for emb in xgood_embeddings(X, Y):
        m = 0
        for img in emb.values():
            m |= 1 << img
        out.append(m)
    return sorted(set(out))


def m_p_decision(P, k, N):
    """Is there an induced-P-free Y-blocker in Q([N]) for Y = [k]?"""
    if N > 4 or k > 2:
        raise CapExceeded("m_p_decision supports N <= 4 and k <= 2")
    if k < 1 or k > N:
        return False
    P = _plain(P)
    images = xgood_images(N, k)
    V = 1 << N
    blockers = []
    for F in range(1 << V):
        if all(F & img for img in images):
            blockers.append(F)
    for F in blockers:
        verts = [m for m in range(V) if F >> m & 1]
        host = Poset(len(verts), [sum(1 << j for j, b in enumerate(verts) if a & b == a) for a in verts])
        if find_copy(P, "induced", host) is None:
            return True
    return False
