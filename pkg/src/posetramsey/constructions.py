"""Lower-bound colorings and a generic verifier.

Each constructor returns a Coloring; ``claims(name, ...)`` lists the
forbidden objects the coloring is meant to avoid.
"""

import itertools
import random
from dataclasses import dataclass, field
from math import comb

from .combinatorics import alpha, beta, n_star
from .embed import Shrub, build_shrub, find_copy, shrub_block_size, verify_shrub
from .errors import CapExceeded, IncomparabilityError, RangeError, SizeError
from .lattice import DENSE_CAP, Coloring, full_mask, iter_bits, layered_coloring, popcount
from .poset_core import (ColoredPoset, Poset, alternating_chain, antichain, boolean_lattice,
                         chain, chain_composition, multipartite)


def two_chain_coloring(N):
    """Blue prefixes [i] and suffixes [N] - [i] for i in 1..N, red elsewhere."""
    if N < 1:
        raise RangeError("two_chain_coloring needs N >= 1")
    full = full_mask(N)
    blue = set()
    for i in range(1, N + 1):
        blue.add(full_mask(i))
        blue.add(full & ~full_mask(i))
    return Coloring.from_blue(N, blue)


def antichain_layered(n, r):
    """Q_{n+2r+1}, blue iff |Z| <= r or |Z| >= n+r+1."""
    if n < 0 or r < 0:
        raise RangeError("n and r must be non-negative")
    N = n + 2 * r + 1
    if N > DENSE_CAP:
        raise CapExceeded("antichain_layered stays dense, N <= 24")
    layers = [k for k in range(N + 1) if k <= r or k >= n + r + 1]
    return layered_coloring(N, layers)


def _lowest_extra(N, fixed, count):
    extra = [k for k in range(N + 1) if k not in fixed][:count]
    if len(extra) < count:
        raise RangeError("not enough layers for the extra blue ones")
    return set(fixed) | set(extra)


def cc_layers(n, t1):
    if n < 1 or t1 < 1:
        raise RangeError("cc_layered needs n, t1 >= 1")
    N = n + t1
    return N, sorted(_lowest_extra(N, {0, N}, t1 - 1))


def cc_layered(n, t1):
    """Q_{n+t1}: both one-element layers blue, t1-1 lowest other layers blue."""
    N, layers = cc_layers(n, t1)
    return layered_coloring(N, layers)


def ccc_layers(n, t1):
    if n < 1 or t1 < 2:
        raise RangeError("ccc_layered needs n >= 1 and t1 >= 2")
    N = n + t1 + 1
    return N, sorted(_lowest_extra(N, {0, 1, N - 1, N}, t1 - 2))


def ccc_layered(n, t1):
    """Q_{n+t1+1}: layers 0, 1, N-1, N blue plus the t1-2 lowest other layers."""
    N, layers = ccc_layers(n, t1)
    return layered_coloring(N, layers)


def dn_lower(n):
    """Q_{2 alpha(n) - 1}, red below layer alpha(n)."""
    if n < 2:
        raise RangeError("dn_lower needs n >= 2")
    a = alpha(n)
    N = 2 * a - 1
    if N > DENSE_CAP:
        raise CapExceeded(f"dimension {N} above the dense cap")
    return layered_coloring(N, range(a, N + 1))


def vn_lower(n):
    """Q_{N*}, red below layer beta(N*, n)."""
    if n < 1:
        raise RangeError("vn_lower needs n >= 1")
    N = n_star(n)
    if N > DENSE_CAP:
        raise CapExceeded(f"dimension {N} above the dense cap")
    b = beta(N, n)
    return layered_coloring(N, range(b, N + 1))


def eh_classes(N, n, S, T):
    """(V_T, V_S, W_S, W_T) predicates of the chain construction."""
    S, T = list(S), list(T)
    for s in S:
        for t in T:
            if not popcount(s) < popcount(t) or s & t == s:
                raise IncomparabilityError("need |s| < |t| and s not a subset of t")

    def in_vt(z):
        return 2 * popcount(z) >= n and any(z & t == z for t in T)

    def in_vs(z):
        return 2 * popcount(z) <= 2 * N - n and any(z & s == s for s in S)

    def in_ws(z):
        k = popcount(z)
        return n <= 2 * k <= N and not in_vs(z)

    def in_wt(z):
        k = popcount(z)
        return N < 2 * k <= 2 * N - n and not in_vt(z)

    return in_vt, in_vs, in_ws, in_wt


def eh_chain_coloring(N, n, S, T):
    """Four-rule coloring built from element-wise incomparable families S and T."""
    if N > DENSE_CAP:
        raise CapExceeded("eh_chain_coloring stays dense, N <= 24")
    if N < 2 * n:
        raise RangeError("construction needs N >= 2n")
    in_vt, in_vs, in_ws, in_wt = eh_classes(N, n, S, T)

    def blue(z):
        k = popcount(z)
        if 2 * k < n:
            return True
        if in_vt(z) or in_ws(z):
            return False
        if in_vs(z) or in_wt(z):
            return True
        return False

    return Coloring.from_function(N, blue)


# ---- sparse shrub forests ----

@dataclass
class SampleFailure:
    reason: str
    attempts: int


@dataclass
class Framework:
    Y: int
    A: list
    Z: int
    X: int


def _framework(N, Ymask, size_a, rng):
    rest = [e for e in range(N) if not Ymask >> e & 1]
    A = sorted(rng.sample(rest, size_a))
    Z = 0
    for e in rest:
        if e not in A:
            Z |= 1 << e
    X = 0
    for e in iter_bits(Z):
        if rng.random() < 0.5:
            X |= 1 << e
    return Framework(Ymask, A, Z, X)


def shrub_forest_sample(N, k, seed, retries=50, ys=None):
    """Blue parallel composition of random Y-shrubs, one per k-subset Y.

    ``ys`` restricts the family of Y sets (default: all k-subsets of [N]).
    Returns a Coloring on success and SampleFailure otherwise.
    """
    if k < 0 or N < 0:
        raise RangeError("N and k must be non-negative")
    if k == 0:
        return Coloring.sparse(N, (), "r")
    if ys is None:
        if comb(N, k) > 4096:
            raise CapExceeded("too many k-subsets to sample frameworks for")
        ys = [sum(1 << e for e in c) for c in itertools.combinations(range(N), k)]
    ys = list(ys)
    if any(popcount(y) != k for y in ys):
        raise RangeError("every Y must have exactly k elements")
    b = shrub_block_size(k)
    size_a = k * b
    if N < k + size_a:
        return SampleFailure(f"N={N} too small for shrub blocks of total size {size_a}", 0)
    rng = random.Random(seed)
    for attempt in range(1, retries + 1):
        frames = [_framework(N, y, size_a, rng) for y in ys]
        ok = all(f1.X & f2.Z & ~f2.X for f1 in frames for f2 in frames if f1 is not f2)
        if not ok:
            continue
        blue = set()
        for f in frames:
            shrub = build_shrub(list(iter_bits(f.Y)), f.A)
            for v in shrub.xi.values():
                blue.add(v | f.X)
        c = Coloring.sparse(N, blue, "r")
        if not blue_lambda_free(c):
            return SampleFailure("sampled forest contains a blue Lambda", attempt)
        return c
    return SampleFailure("pairwise framework condition failed on every attempt", retries)


def blue_lambda_free(c):
    """No blue vertex has two incomparable blue vertices below it."""
    blue = sorted(c.blue_masks(), key=popcount)
    for i, top in enumerate(blue):
        below = [m for m in blue[:i] if m & top == m and m != top]
        below.sort(key=popcount)
        for a, b in zip(below, below[1:]):
            if a & b != a:
                return False
    return True


# ---- verifier ----

@dataclass
class VerifyReport:
    ok: bool
    checks: list = field(default_factory=list)

    def violations(self):
        return [ch for ch in self.checks if ch[2] is not None]


def _describe(pattern, mode, color):
    return f"{mode}:{color or 'colored'}"


def verify_coloring(c, forbid):
    """Exhaustively check that c contains none of the forbidden objects.

    ``forbid`` is a list of (pattern, mode, color); color is 'b', 'r' or None
    for colored patterns.  Sparse colorings above the dense cap can only be
    checked for blue patterns, by searching inside the explicit blue set.
    """
    checks = []
    for pattern, mode, color in forbid:
        try:
            if c.is_dense:
                if mode == "colored" or color is None:
                    emb = find_copy(pattern, "colored", c)
                else:
                    emb = find_copy(pattern, mode, c, color_filter=color)
            else:
                emb = _sparse_search(c, pattern, mode, color)
        except SizeError as exc:
            raise CapExceeded(str(exc)) from exc
        checks.append((pattern, _describe(pattern, mode, color), emb))
    return VerifyReport(all(ch[2] is None for ch in checks), checks)


def _sparse_search(c, pattern, mode, color):
    default, explicit = c.sparse_parts()
    own = "r" if default == "b" else "b"
    if color != own or mode == "colored":
        raise CapExceeded("sparse colorings support searches in the explicit color only")
    verts = sorted(explicit)
    if len(verts) > 4096:
        raise CapExceeded("explicit color class too large to search")
    host = Poset(len(verts), [sum(1 << j for j, b in enumerate(verts) if a & b == a) for a in verts])
    emb = find_copy(pattern, mode, host)
    if emb is None:
        return None
    return type(emb)(emb.pattern, emb.mode, tuple(verts[i] for i in emb.map), c.dim)


# ---- catalog of constructions with their claims ----

def claims(name, *params):
    """(coloring, forbid list) for a named construction."""
    if name == "two_chain":
        (N,) = params
        forbid = [(antichain(3), "induced", "b")]
        if N >= 2:
            forbid.append((boolean_lattice(N - 2), "induced", "r"))
        return two_chain_coloring(N), forbid
    if name == "antichain_layered":
        n, r = params
        t = comb(n + 2 * r + 1, r) + 1
        forbid = [(boolean_lattice(n), "induced", "r")]
        if t <= 16:
            forbid.append((antichain(t), "induced", "b"))
        return antichain_layered(n, r), forbid
    if name == "cc":
        n, t1 = params[:2]
        t2 = params[2] if len(params) > 2 else t1
        return cc_layered(n, t1), [(chain_composition([t1, t2]), "induced", "b"),
                                   (boolean_lattice(n), "induced", "r")]
    if name == "ccc":
        n, t1, t2, t3 = params
        if t1 > t2 + 1:
            raise RangeError("the layered ccc coloring needs t1 <= t2 + 1")
        return ccc_layered(n, t1), [(chain_composition([t1, t2, t3]), "induced", "b"),
                                    (boolean_lattice(n), "induced", "r")]
    if name == "dn":
        (n,) = params
        d = multipartite([1, n, 1])
        return dn_lower(n), [(d, "induced", "b"), (d, "induced", "r")]
    if name == "vn":
        (n,) = params
        v = multipartite([1, n])
        return vn_lower(n), [(v, "induced", "b"), (v, "induced", "r")]
    if name == "eh_chain":
        N, n, S, T = params
        return eh_chain_coloring(N, n, S, T), [(alternating_chain("rbr", 4), "colored", None)]
    raise RangeError(f"unknown construction {name!r}")
