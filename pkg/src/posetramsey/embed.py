"""Copy search in posets and colored Boolean lattices, 2-dimension,
X-good normalization, factorial trees and shrubs.
"""

import itertools
import math
from dataclasses import dataclass, field

from .errors import GroundTooSmallError, NotFullLatticeError, SizeError
from .lattice import (DENSE_CAP, Coloring, full_mask, iter_bits, popcount,
                      subset_bits, superset_bits)
from .poset_core import MAX_VERTICES, ColoredPoset, Poset, boolean_lattice

MODES = ("induced", "weak", "colored")


@dataclass(frozen=True)
class Embedding:
    pattern: object
    mode: str
    map: tuple
    host_dim: int = None

    def image(self):
        return frozenset(self.map)

    def to_lines(self):
        return [f"{i} -> {m:x}" for i, m in enumerate(self.map)]


def format_witness(emb):
    return "\n".join(emb.to_lines()) + "\n"


def parse_witness(text):
    out = {}
    for line in text.strip().splitlines():
        left, right = line.split("->")
        out[int(left)] = int(right.strip(), 16)
    return [out[i] for i in range(len(out))]


def _sup(N, m):
    if N <= 12:
        return superset_bits(N, m)
    return superset_bits.__wrapped__(N, m)


def _sub(N, m):
    if N <= 12:
        return subset_bits(N, m)
    return subset_bits.__wrapped__(N, m)


class _LatticeHost:
    def __init__(self, N, blue=None):
        self.N = N
        self.universe = full_mask(1 << N)
        self.blue = blue

    def sup(self, v):
        return _sup(self.N, v)

    def sub(self, v):
        return _sub(self.N, v)


class _PosetHost:
    def __init__(self, p, colors=None):
        self.p = p
        self.universe = full_mask(p.n)
        self.blue = None
        if colors is not None:
            self.blue = sum(1 << i for i, c in enumerate(colors) if c == "b")

    def sup(self, v):
        return self.p.up[v]

    def sub(self, v):
        return self.p.down[v]


def _host_adapter(host):
    if isinstance(host, Coloring):
        if host.dim > DENSE_CAP:
            raise SizeError("lattice hosts are limited to dimension 24")
        return _LatticeHost(host.dim, host.bits), host.dim
    if isinstance(host, ColoredPoset):
        return _PosetHost(host.poset, host.colors), None
    if isinstance(host, Poset):
        return _PosetHost(host), None
    if isinstance(host, int):
        # bare dimension: uncolored Boolean lattice
        if host > DENSE_CAP:
            raise SizeError("lattice hosts are limited to dimension 24")
        return _LatticeHost(host), host
    raise TypeError(f"unsupported host {type(host).__name__}")


def processing_order(p):
    """Pattern vertices by (level, descending comparability degree, index)."""
    lev = p.levels()
    deg = [popcount(p.up[i] | p.down[i]) - 1 for i in range(p.n)]
    return sorted(range(p.n), key=lambda i: (lev[i], -deg[i], i))


def iter_copies(pattern, mode, host, color_filter=None, within=None):
    """Yield every copy map (tuple indexed by pattern vertex), least first.

    Maps are ordered lexicographically as sequences read in processing_order.
    ``within`` optionally restricts host vertices to a bitset.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(pattern, ColoredPoset):
        poset, pcolors = pattern.poset, pattern.colors
    else:
        poset, pcolors = pattern, None
    if poset.n > MAX_VERTICES:
        raise SizeError("patterns are limited to 16 vertices")
    if mode == "colored" and pcolors is None:
        raise ValueError("colored mode needs a ColoredPoset pattern")
    h, _ = _host_adapter(host)
    base = h.universe if within is None else h.universe & within
    if mode == "colored":
        if h.blue is None:
            raise ValueError("colored mode needs a colored host")
        cand = {"b": base & h.blue, "r": base & ~h.blue}
        vbase = [cand[pcolors[i]] for i in range(poset.n)]
    else:
        if color_filter is not None:
            if h.blue is None:
                raise ValueError("color_filter needs a colored host")
            base &= h.blue if color_filter == "b" else ~h.blue
        vbase = [base] * poset.n
    order = processing_order(poset)
    n = poset.n
    induced = mode != "weak"
    image = [0] * n
    # constraint kind of each earlier vertex relative to the current one
    rel = []
    for k, v in enumerate(order):
        row = []
        for u in order[:k]:
            if poset.lt(u, v):
                row.append((u, 1))
            elif poset.lt(v, u):
                row.append((u, -1))
            else:
                row.append((u, 0))
        rel.append(row)

    def cands(k, used):
        c = vbase[order[k]] & ~used
        for u, r in rel[k]:
            m = image[u]
            if r == 1:
                c &= h.sup(m)
            elif r == -1:
                c &= h.sub(m)
            elif induced:
                c &= ~(h.sup(m) | h.sub(m))
            if not c:
                break
        return c

    if n == 0:
        yield ()
        return
    stack = [cands(0, 0)]
    ustack = [0]
    while stack:
        k = len(stack) - 1
        c = stack[k]
        if not c:
            stack.pop()
            ustack.pop()
            continue
        low = c & -c
        stack[k] = c ^ low
        image[order[k]] = low.bit_length() - 1
        if k == n - 1:
            yield tuple(image)
            continue
        used = ustack[k] | low
        stack.append(cands(k + 1, used))
        ustack.append(used)


def find_copy(pattern, mode, host, color_filter=None, within=None):
    _, dim = _host_adapter(host)
    for m in iter_copies(pattern, mode, host, color_filter, within):
        return Embedding(pattern, mode, m, dim)
    return None


def check_embedding(emb, host, color_filter=None):
    """Independent re-check of an embedding's mode invariant."""
    pattern = emb.pattern
    poset = pattern.poset if isinstance(pattern, ColoredPoset) else pattern
    m = emb.map
    if len(set(m)) != len(m) or len(m) != poset.n:
        return False
    if isinstance(host, Coloring):
        le = lambda a, b: a & b == a
        color = host.color
        if any(x >> host.dim for x in m):
            return False
    else:
        hp = host.poset if isinstance(host, ColoredPoset) else host
        le = hp.le
        color = (lambda v: host.colors[v]) if isinstance(host, ColoredPoset) else None
    for i in range(poset.n):
        for j in range(poset.n):
            pij, hij = poset.le(i, j), le(m[i], m[j])
            if emb.mode == "weak":
                if pij and not hij:
                    return False
            elif pij != hij:
                return False
    if emb.mode == "colored":
        return all(color(m[i]) == pattern.colors[i] for i in range(poset.n))
    if color_filter is not None:
        return all(color(x) == color_filter for x in m)
    return True


def dim2(p):
    """(smallest n with an induced copy of p in Q_n, witness embedding)."""
    if isinstance(p, ColoredPoset):
        p = p.poset
    lo = max(max(p.levels(), default=0), (p.n - 1).bit_length())
    for n in range(lo, p.n):
        emb = find_copy(p, "induced", n)
        if emb is not None:
            return n, emb
    # down-set map is always an induced copy in Q_{|P|}
    images = tuple(p.down[i] for i in range(p.n))
    return p.n, Embedding(p, "induced", images, p.n)


# ---- X-good embeddings ----

@dataclass
class GoodEmbedding:
    """Map from subsets of X (host masks) to host masks."""

    X: int
    images: dict = field(default_factory=dict)

    def __getitem__(self, sub):
        return self.images[sub]

    def image(self):
        return set(self.images.values())

    def domain(self):
        return sorted(self.images, key=lambda s: (popcount(s), s))

    def is_x_good(self):
        return all(img & self.X == s for s, img in self.images.items())

    def is_embedding(self):
        items = list(self.images.items())
        for a, ia in items:
            for b, ib in items:
                if (a & b == a) != (ia & ib == ia):
                    return False
        return len(set(self.images.values())) == len(items)

    def is_full(self):
        return len(self.images) == 1 << popcount(self.X) and all(
            s & ~self.X == 0 for s in self.images)


def subsets_of(mask):
    """All submasks of mask in (popcount, value) order."""
    bits = list(iter_bits(mask))
    out = []
    for x in range(1 << len(bits)):
        out.append(sum(1 << bits[i] for i in range(len(bits)) if x >> i & 1))
    return sorted(out, key=lambda s: (popcount(s), s))


def normalize_xgood(phi):
    """Turn an embedding of a full Boolean lattice into an X-good one.

    ``phi`` is an Embedding whose pattern is Q_n (vertex = local mask), a
    sequence of 2^n host masks, or a dict local mask -> host mask.
    """
    if isinstance(phi, Embedding):
        seq = list(phi.map)
    elif isinstance(phi, dict):
        seq = [phi[k] for k in sorted(phi)]
        if sorted(phi) != list(range(len(seq))):
            raise NotFullLatticeError("domain is not a full Boolean lattice")
    else:
        seq = list(phi)
    size = len(seq)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise NotFullLatticeError(f"{size} images do not form Q_n")
    for a in range(size):
        for b in range(size):
            if (a & b == a) != (seq[a] & seq[b] == seq[a]):
                raise NotFullLatticeError("map is not an induced embedding of Q_n")
    if len(set(seq)) != size:
        raise NotFullLatticeError("map is not injective")
    top = size - 1
    f = []
    for u in range(n):
        avail = seq[1 << u] & ~seq[top ^ (1 << u)]
        f.append((avail & -avail).bit_length() - 1)
    X = sum(1 << e for e in f)
    images = {}
    for local in range(size):
        sub = sum(1 << f[u] for u in range(n) if local >> u & 1)
        images[sub] = seq[local]
    return X, GoodEmbedding(X, images)


# ---- factorial trees and shrubs ----

class FactorialTree:
    """All ordered subsets of Y under the prefix order."""

    def __init__(self, ground):
        self.ground = list(ground)
        k = len(self.ground)
        self.vertices = [()]
        for j in range(1, k + 1):
            self.vertices.extend(itertools.permutations(self.ground, j))

    @staticmethod
    def expected_size(k):
        return sum(math.factorial(k) // math.factorial(k - i) for i in range(k + 1))

    @staticmethod
    def le(a, b):
        return len(a) <= len(b) and b[:len(a)] == a

    def __len__(self):
        return len(self.vertices)

    def leaves(self):
        k = len(self.ground)
        return [v for v in self.vertices if len(v) == k]


@dataclass
class Shrub:
    X: int
    Y: tuple
    xi: dict

    @property
    def Y_mask(self):
        return sum(1 << y for y in self.Y)


def shrub_block_size(k):
    if k < 256:
        return 11
    return max(math.ceil(math.log2(k) + math.log2(math.log2(k))), 11)


def _block_antichain(block, k):
    """First k middle-layer subsets of a block, in lexicographic order."""
    half = len(block) // 2
    out = []
    for combo in itertools.combinations(block, half):
        out.append(sum(1 << e for e in combo))
        if len(out) == k:
            break
    return out


def build_shrub(Y, A_blocks):
    """Y-shrub on blocks A_0..A_{k-1} (lists of ground elements, or one flat list)."""
    Y = list(Y)
    k = len(Y)
    b = shrub_block_size(k) if k else 0
    if A_blocks and not isinstance(A_blocks[0], (list, tuple, range)):
        flat = list(A_blocks)
        if len(flat) < k * b:
            raise GroundTooSmallError(f"need {k * b} ground elements for k={k}, got {len(flat)}")
        A_blocks = [flat[i * b:(i + 1) * b] for i in range(k)]
    if len(A_blocks) < k:
        raise GroundTooSmallError(f"need {k} blocks, got {len(A_blocks)}")
    A_blocks = [list(blk) for blk in A_blocks[:k]]
    if any(len(blk) < b for blk in A_blocks):
        raise GroundTooSmallError(f"every block needs at least {b} elements")
    used = set()
    for blk in A_blocks:
        if used & set(blk) or set(blk) & set(Y):
            raise GroundTooSmallError("blocks must be pairwise disjoint and disjoint from Y")
        used |= set(blk)
    block_mask = [sum(1 << e for e in blk) for blk in A_blocks]
    anti = [_block_antichain(blk, k) for blk in A_blocks]
    pos = {y: i for i, y in enumerate(Y)}
    xi = {(): 0}
    for j in range(1, k + 1):
        for seq in itertools.permutations(Y, j):
            idx = [pos[y] for y in seq]
            i1 = idx[0]
            m = block_mask[i1]
            for step in range(1, j):
                m |= anti[(i1 + step) % k][idx[step]]
            for y in seq:
                m |= 1 << y
            xi[seq] = m
    X = 0
    for bm in block_mask:
        X |= bm
    return Shrub(X, tuple(Y), xi)


def verify_shrub(s):
    """Y-goodness, embedding of the factorial tree, and up-tree shape."""
    ymask = s.Y_mask
    tree = FactorialTree(s.Y)
    if set(tree.vertices) != set(s.xi):
        return False
    for v, m in s.xi.items():
        if m & ymask != sum(1 << y for y in v):
            return False
    verts = tree.vertices
    imgs = [s.xi[v] for v in verts]
    if len(set(imgs)) != len(imgs):
        return False
    for a, ia in zip(verts, imgs):
        for b, ib in zip(verts, imgs):
            if FactorialTree.le(a, b) != (ia & ib == ia):
                return False
    return is_up_tree(imgs)


def is_up_tree(masks):
    """Every down-set inside the family is a chain."""
    masks = list(masks)
    for m in masks:
        below = [x for x in masks if x & m == x]
        for a in below:
            for b in below:
                if a & b != a and a & b != b:
                    return False
    return True


def y_chain(chain, tau, c=None, color=None):
    """Check that chain Z_0 < ... < Z_k satisfies Z_i ∩ Y = {tau_1..tau_i}.

    With a coloring and a color, also require every Z_i to have that color.
    """
    tau = list(tau)
    ymask = sum(1 << y for y in tau)
    if len(chain) != len(tau) + 1:
        return False
    pref = 0
    for i, z in enumerate(chain):
        if i:
            pref |= 1 << tau[i - 1]
            prev = chain[i - 1]
            if prev & z != prev or prev == z:
                return False
        if z & ymask != pref:
            return False
    if c is not None and color is not None:
        return all(c.color(z) == color for z in chain)
    return True


def y_chain_from_xparts(xparts, tau):
    """Build Z_i = X_i ∪ {tau_1..tau_i} from nested X-parts."""
    out = []
    pref = 0
    for i, x in enumerate(xparts):
        if i:
            pref |= 1 << tau[i - 1]
        out.append(x | pref)
    return out
