"""Finite posets, colored posets, the catalog DSL and basic parameters.

A poset on vertices 0..n-1 is stored as two tuples of row bitmasks:
``up[i]`` has bit j set iff i <= j, ``down[i]`` has bit j set iff j <= i.
"""

import itertools
import re
from collections import namedtuple

from .errors import (ArityError, CycleError, GlueShapeError, NotAChainError,
                     ParseError, RangeError)

MAX_VERTICES = 16
BLUE = "b"
RED = "r"


def _bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Poset:
    __slots__ = ("n", "up", "down")

    def __init__(self, n, up):
        self.n = n
        self.up = tuple(up)
        down = [0] * n
        for i, row in enumerate(self.up):
            for j in _bits(row):
                down[j] |= 1 << i
        self.down = tuple(down)

    def le(self, i, j):
        return bool(self.up[i] >> j & 1)

    def lt(self, i, j):
        return i != j and bool(self.up[i] >> j & 1)

    def comparable(self, i, j):
        return bool((self.up[i] | self.down[i]) >> j & 1)

    @property
    def leq(self):
        return [[(self.up[i] >> j) & 1 for j in range(self.n)] for i in range(self.n)]

    def strict_up(self, i):
        return self.up[i] & ~(1 << i)

    def strict_down(self, i):
        return self.down[i] & ~(1 << i)

    def incomparable_mask(self, i):
        full = (1 << self.n) - 1
        return full & ~(self.up[i] | self.down[i])

    def minimal(self):
        return [i for i in range(self.n) if self.down[i] == 1 << i]

    def maximal(self):
        return [i for i in range(self.n) if self.up[i] == 1 << i]

    def levels(self):
        """Level of each vertex: length of the longest chain ending there, minus one."""
        lev = [0] * self.n
        for v in self.linear_extension():
            below = self.strict_down(v)
            lev[v] = max((lev[u] + 1 for u in _bits(below)), default=0)
        return lev

    def linear_extension(self):
        return sorted(range(self.n), key=lambda i: (bin(self.down[i]).count("1"), i))

    def is_valid(self):
        for i in range(self.n):
            if not self.up[i] >> i & 1:
                return False
            for j in _bits(self.up[i]):
                if j != i and self.up[j] >> i & 1:
                    return False
                if self.up[j] & ~self.up[i]:
                    return False
        return True

    def induced(self, verts):
        verts = list(verts)
        pos = {v: k for k, v in enumerate(verts)}
        up = []
        for v in verts:
            row = 0
            for w in _bits(self.up[v]):
                if w in pos:
                    row |= 1 << pos[w]
            up.append(row)
        return Poset(len(verts), up)

    def dual(self):
        return Poset(self.n, self.down)

    def relabel(self, perm):
        """Poset whose vertex k is old vertex perm[k]."""
        return self.induced(perm)

    def cover_pairs(self):
        out = []
        for i in range(self.n):
            for j in _bits(self.strict_up(i)):
                if not any(self.strict_up(k) >> j & 1 for k in _bits(self.strict_up(i))):
                    out.append((i, j))
        return sorted(out)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and self.up == other.up

    def __hash__(self):
        return hash((self.n, self.up))

    def __repr__(self):
        return f"Poset(n={self.n}, covers={self.cover_pairs()})"


class ColoredPoset:
    __slots__ = ("poset", "colors")

    def __init__(self, poset, colors):
        colors = "".join(colors)
        if len(colors) != poset.n:
            raise ArityError(f"{len(colors)} colors for {poset.n} vertices")
        if set(colors) - {BLUE, RED}:
            raise ParseError(f"colors must use b/r: {colors!r}")
        self.poset = poset
        self.colors = colors

    @property
    def n(self):
        return self.poset.n

    def __eq__(self, other):
        return (isinstance(other, ColoredPoset) and self.poset == other.poset
                and self.colors == other.colors)

    def __hash__(self):
        return hash((self.poset, self.colors))

    def __repr__(self):
        return f"ColoredPoset({self.poset!r}, {self.colors!r})"


def poset_from_relations(n, pairs):
    if not 1 <= n <= MAX_VERTICES:
        raise RangeError(f"vertex count {n} outside 1..{MAX_VERTICES}")
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise RangeError(f"pair ({i},{j}) out of range for n={n}")
        up[i] |= 1 << j
    for k in range(n):
        for i in range(n):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(n):
        for j in _bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleError(f"relations contain a cycle through {i} and {j}")
    return Poset(n, up)


def _check_size(n):
    if n > MAX_VERTICES:
        raise ArityError(f"poset would have {n} vertices, cap is {MAX_VERTICES}")


# ---- catalog atoms ----

def chain(t):
    return poset_from_relations(t, [(i, i + 1) for i in range(t - 1)])


def antichain(t):
    return poset_from_relations(t, [])


def multipartite(parts):
    pairs = []
    start = 0
    blocks = []
    for t in parts:
        blocks.append(range(start, start + t))
        start += t
    for a, b in zip(blocks, blocks[1:]):
        pairs.extend((i, j) for i in a for j in b)
    return poset_from_relations(start, pairs)


def chain_composition(parts):
    pairs = []
    start = 0
    for t in parts:
        pairs.extend((i, i + 1) for i in range(start, start + t - 1))
        start += t
    return poset_from_relations(start, pairs)


def boolean_lattice(n):
    size = 1 << n
    _check_size(size)
    up = []
    for a in range(size):
        up.append(sum(1 << b for b in range(size) if a & b == a))
    return Poset(size, up)


def cube(n, t):
    tuples = list(itertools.product(range(1, t + 1), repeat=n))
    _check_size(len(tuples))
    up = []
    for a in tuples:
        up.append(sum(1 << k for k, b in enumerate(tuples)
                      if all(x <= y for x, y in zip(a, b))))
    return Poset(len(tuples), up)


def standard_example(n):
    # vertices 0..n-1 are the a_i, n..2n-1 the b_j; a_i < b_j iff i != j
    return poset_from_relations(2 * n, [(i, n + j) for i in range(n) for j in range(n) if i != j])


def subdivided_diamond(s, t):
    # bottom, chain of s, chain of t, top
    n = s + t + 2
    top = n - 1
    pairs = [(0, 1), (0, s + 1), (s, top), (s + t, top)]
    pairs += [(i, i + 1) for i in range(1, s)]
    pairs += [(i, i + 1) for i in range(s + 1, s + t)]
    return poset_from_relations(n, pairs)


LAMBDA = multipartite([2, 1])
VEE = multipartite([1, 2])
# W=0, X=1 below Y=2, Z=3 with W<Y, X<Y, X<Z
N_POSET = poset_from_relations(4, [(0, 2), (1, 2), (1, 3)])
# X=0 below W=1 and the chain Y=2 < Z=3
HOOK = poset_from_relations(4, [(0, 1), (0, 2), (2, 3)])


def alternating_chain(pattern, t):
    if pattern not in ("rbr", "brb"):
        raise ArityError(f"ALT pattern must be rbr or brb, got {pattern!r}")
    first, second = pattern[0], pattern[1]
    return ColoredPoset(chain(t), "".join(first if i % 2 == 0 else second for i in range(t)))


# ---- composition ----

def compose(kind, p1, p2):
    if kind == "parallel":
        n1 = p1.n
        _check_size(n1 + p2.n)
        up = list(p1.up) + [row << n1 for row in p2.up]
        return Poset(n1 + p2.n, up)
    if kind == "series":
        n1 = p1.n
        _check_size(n1 + p2.n)
        top = ((1 << p2.n) - 1) << n1
        up = [row | top for row in p1.up] + [row << n1 for row in p2.up]
        return Poset(n1 + p2.n, up)
    if kind == "glue":
        tops, bots = p1.maximal(), p2.minimal()
        if len(tops) != 1 or len(bots) != 1:
            raise GlueShapeError("glue needs a unique maximal vertex in P1 and a unique minimal vertex in P2")
        z1, z2 = tops[0], bots[0]
        n1 = p1.n
        _check_size(n1 + p2.n - 1)
        rest = [v for v in range(p2.n) if v != z2]
        # vertex n1+k is rest[k]; z2 maps to z1
        idx = {z2: z1}
        for k, v in enumerate(rest):
            idx[v] = n1 + k
        upper = 0
        for v in rest:
            upper |= 1 << idx[v]
        up = [row | upper for row in p1.up]
        for v in range(p2.n):
            row = 0
            for w in _bits(p2.up[v]):
                row |= 1 << idx[w]
            if v == z2:
                up[z1] |= row
            else:
                up.append(row)
        return Poset(n1 + p2.n - 1, up)
    raise ValueError(f"unknown composition kind {kind!r}")


def compose_colored(kind, c1, c2):
    p = compose(kind, c1.poset, c2.poset)
    if kind == "glue":
        z1, z2 = c1.poset.maximal()[0], c2.poset.minimal()[0]
        if c1.colors[z1] != c2.colors[z2]:
            raise ArityError("glued vertices carry different colors")
        colors = c1.colors + "".join(c for v, c in enumerate(c2.colors) if v != z2)
    else:
        colors = c1.colors + c2.colors
    return ColoredPoset(p, colors)


# ---- parameters ----

def height(p):
    return max(p.levels(), default=-1) + 1


def chain_cover(p):
    """Minimum chain partition (Dilworth) via maximum bipartite matching.

    Left copy of i is matched to a right copy of some j > i; augmenting paths
    scan candidates by ascending index.
    """
    n = p.n
    match_right = [-1] * n
    match_left = [-1] * n

    def augment(i, seen):
        for j in _bits(p.strict_up(i)):
            if seen >> j & 1:
                continue
            seen |= 1 << j
            if match_right[j] == -1:
                match_right[j] = i
                match_left[i] = j
                return True, seen
            ok, seen = augment(match_right[j], seen)
            if ok:
                match_right[j] = i
                match_left[i] = j
                return True, seen
        return False, seen

    for i in range(n):
        augment(i, 0)
    chains = []
    for v in range(n):
        if match_right[v] == -1:
            c = [v]
            while match_left[c[-1]] != -1:
                c.append(match_left[c[-1]])
            chains.append(c)
    return chains


def width(p):
    return len(chain_cover(p))


Classification = namedtuple("Classification", "kind chains witness shape")


def _shape3(p, a, b, c):
    sub = p.induced((a, b, c))
    if sub == LAMBDA:
        return "LAM"
    if sub == VEE:
        return "VEE"
    return None


def _components(p, adjacent):
    seen = 0
    comps = []
    for v in range(p.n):
        if seen >> v & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= adjacent(u)
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        comps.append(sorted(_bits(comp)))
    return comps


def classify(p):
    """trivial(chain sizes, descending) or nontrivial(first induced Λ₂/V₂ witness).

    The witness is returned in the pattern's own vertex order: for LAM the two
    minimal vertices then the top, for VEE the bottom then the two maximal ones.
    """
    for trip in itertools.combinations(range(p.n), 3):
        for perm in itertools.permutations(trip):
            shape = _shape3(p, *perm)
            if shape:
                return Classification("nontrivial", None, perm, shape)
    comps = _components(p, lambda u: p.up[u] | p.down[u])
    return Classification("trivial", sorted((len(c) for c in comps), reverse=True), None, None)


def has_induced(p, pattern):
    for verts in itertools.permutations(range(p.n), pattern.n):
        if p.induced(verts) == pattern:
            return True
    return False


def is_series_parallel(p):
    if p.n == 1:
        return True
    full = (1 << p.n) - 1
    comps = _components(p, lambda u: p.up[u] | p.down[u])
    if len(comps) == 1:
        comps = _components(p, lambda u: full & ~(p.up[u] | p.down[u]))
        if len(comps) == 1:
            return False
    return all(is_series_parallel(p.induced(c)) for c in comps)


def is_chain(p):
    full = (1 << p.n) - 1
    return all((p.up[i] | p.down[i]) == full for i in range(p.n))


def max_alternating(cp):
    """Length of the longest alternating subchain of a colored chain."""
    p = cp.poset
    if not is_chain(p):
        raise NotAChainError("max_alternating needs a chain")
    seq = [cp.colors[v] for v in p.linear_extension()]
    runs = 0
    prev = None
    for c in seq:
        if c != prev:
            runs += 1
            prev = c
    return runs


def _profile(p, v):
    return (bin(p.down[v]).count("1"), bin(p.up[v]).count("1"))


def find_isomorphism(p1, p2):
    if p1.n != p2.n:
        return None
    n = p1.n
    prof1 = [_profile(p1, v) for v in range(n)]
    prof2 = [_profile(p2, v) for v in range(n)]
    if sorted(prof1) != sorted(prof2):
        return None
    order = p1.linear_extension()
    image = [-1] * n
    used = [False] * n

    def extend(k):
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if used[w] or prof2[w] != prof1[v]:
                continue
            ok = True
            for u in order[:k]:
                iu = image[u]
                if p1.le(u, v) != p2.le(iu, w) or p1.le(v, u) != p2.le(w, iu):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                if extend(k + 1):
                    return True
                used[w] = False
        image[v] = -1
        return False

    return list(image) if extend(0) else None


def isomorphic(p1, p2):
    return find_isomorphism(p1, p2) is not None


# ---- DSL ----

_TOKEN = re.compile(r'[A-Za-z]+|\d+|"[^"]*"|[(),]')

_COMBINATORS = ("par", "ser", "glue", "colored")


def _tokenize(text):
    stripped = re.sub(r"\s+", "", text)
    pos = 0
    toks = []
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            raise ParseError(f"unexpected character {stripped[pos]!r} at {pos}")
        toks.append(m.group())
        pos = m.end()
    return toks


def _need(cond, msg):
    if not cond:
        raise ArityError(msg)


def _atom(name, args):
    ints = [a for a in args if isinstance(a, int)]
    if len(ints) != len(args) and name != "ALT":
        raise ParseError(f"{name} takes integer parameters")

    def arity(k):
        _need(len(args) == k, f"{name} takes {k} parameter(s), got {len(args)}")

    if name == "C":
        arity(1)
        _need(args[0] >= 1, "C(t) needs t>=1")
        _check_size(args[0])
        return chain(args[0])
    if name == "A":
        arity(1)
        _need(args[0] >= 1, "A(t) needs t>=1")
        _check_size(args[0])
        return antichain(args[0])
    if name in ("CC", "K"):
        _need(len(args) >= 1, f"{name} needs at least one part")
        _need(all(t >= 1 for t in args), f"{name} parts must be >=1")
        _check_size(sum(args))
        return chain_composition(args) if name == "CC" else multipartite(args)
    if name == "Q":
        arity(1)
        _need(args[0] >= 0, "Q(n) needs n>=0")
        _need(args[0] <= 4, "Q(n) beyond 16 vertices")
        return boolean_lattice(args[0])
    if name == "D":
        arity(1)
        _need(args[0] >= 1, "D(n) needs n>=1")
        _check_size(args[0] + 2)
        return multipartite([1, args[0], 1])
    if name == "V":
        arity(1)
        _need(args[0] >= 1, "V(n) needs n>=1")
        _check_size(args[0] + 1)
        return multipartite([1, args[0]])
    if name == "S":
        arity(3)
        r, s, t = args
        _need(r >= 0 and s >= 1 and t >= 0, "S(r,s,t) needs r>=0, s>=1, t>=0")
        _check_size(r + s + t)
        return multipartite([1] * r + [s] + [1] * t)
    if name == "SD":
        arity(2)
        _need(min(args) >= 1, "SD(s,t) needs s,t>=1")
        _check_size(sum(args) + 2)
        return subdivided_diamond(*args)
    if name == "SE":
        arity(1)
        _need(args[0] >= 1, "SE(n) needs n>=1")
        _check_size(2 * args[0])
        return standard_example(args[0])
    if name == "CUBE":
        arity(2)
        n, t = args
        _need(n >= 0 and t >= 1, "CUBE(n,t) needs n>=0, t>=1")
        _need(t ** n <= MAX_VERTICES, "CUBE beyond 16 vertices")
        return cube(n, t)
    if name in ("LAM", "VEE", "NPOSET", "HOOK"):
        arity(0)
        return {"LAM": LAMBDA, "VEE": VEE, "NPOSET": N_POSET, "HOOK": HOOK}[name]
    if name == "ALT":
        arity(2)
        pat, t = args
        _need(isinstance(pat, str) and isinstance(t, int), 'ALT takes ("rbr"|"brb", t)')
        _need(t >= 1, "ALT needs t>=1")
        _check_size(t)
        return alternating_chain(pat, t)
    raise ParseError(f"unknown atom {name!r}")


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def expr(self):
        name = self.take()
        if not name.isalpha():
            raise ParseError(f"expected a name, got {name!r}")
        args = []
        if self.peek() == "(":
            self.take("(")
            if self.peek() != ")":
                while True:
                    args.append(self.arg(name))
                    if self.peek() == ",":
                        self.take(",")
                        continue
                    break
            self.take(")")
        return self.apply(name, args)

    def arg(self, name):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok.isdigit():
            self.take()
            return int(tok)
        if tok.startswith('"'):
            self.take()
            return tok[1:-1]
        if name in _COMBINATORS:
            return self.expr()
        raise ParseError(f"unexpected token {tok!r} inside {name}(...)")

    def apply(self, name, args):
        if name in ("par", "ser", "glue"):
            _need(len(args) == 2, f"{name} takes 2 arguments")
            a, b = args
            if not all(isinstance(x, (Poset, ColoredPoset)) for x in args):
                raise ParseError(f"{name} takes poset expressions")
            kind = {"par": "parallel", "ser": "series", "glue": "glue"}[name]
            if isinstance(a, ColoredPoset) and isinstance(b, ColoredPoset):
                return compose_colored(kind, a, b)
            if isinstance(a, ColoredPoset) or isinstance(b, ColoredPoset):
                raise ParseError(f"{name} mixes colored and uncolored operands")
            return compose(kind, a, b)
        if name == "colored":
            _need(len(args) == 2, "colored takes 2 arguments")
            base, s = args
            if not isinstance(base, Poset) or not isinstance(s, str):
                raise ParseError('colored takes (expr, "[br]+")')
            if not re.fullmatch(r"[br]+", s):
                raise ParseError(f"bad color string {s!r}")
            _need(len(s) == base.n, f"color string length {len(s)} != {base.n} vertices")
            return ColoredPoset(base, s)
        return _atom(name, args)


def build(expr):
    """Parse a catalog expression into a Poset or ColoredPoset."""
    if not isinstance(expr, str):
        raise ParseError("expression must be a string")
    parser = _Parser(expr)
    result = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input at token {parser.peek()!r}")
    return result
