"""Colorings of Boolean lattices, sublattice views, blobs and symmetric chains.

A vertex of Q_N is a subset of {0..N-1} encoded as an int mask.  Dense
colorings keep one Python int whose bit m is 1 when mask m is blue.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import FormatError, NotNestedError, RangeError

MAX_DIM = 30
DENSE_CAP = 24


def popcount(x):
    return bin(x).count("1")


def iter_bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def full_mask(n):
    return (1 << n) - 1


def masks_by_level(N):
    return sorted(range(1 << N), key=lambda m: (popcount(m), m))


@lru_cache(maxsize=None)
def layer_bits(N, k):
    """Bitset over vertices of Q_N selecting layer k."""
    out = 0
    for m in range(1 << N):
        if popcount(m) == k:
            out |= 1 << m
    return out


@lru_cache(maxsize=1 << 16)
def superset_bits(N, m):
    """Bitset over Q_N of all supersets of m (m included)."""
    s = 1
    for k in range(N):
        if m >> k & 1:
            s <<= 1 << k
        else:
            s |= s << (1 << k)
    return s


@lru_cache(maxsize=1 << 16)
def subset_bits(N, m):
    """Bitset over Q_N of all subsets of m (m included)."""
    s = 1
    for k in range(N):
        if m >> k & 1:
            s |= s << (1 << k)
    return s


class Coloring:
    """Blue/red coloring of Q_N, dense for N <= 24 and sparse above."""

    __slots__ = ("dim", "_bits", "_default", "_explicit")

    def __init__(self, dim, bits=0):
        if not 0 <= dim <= MAX_DIM:
            raise RangeError(f"dimension {dim} outside 0..{MAX_DIM}")
        if dim > DENSE_CAP:
            raise RangeError("dense colorings need dim <= 24, use Coloring.sparse")
        self.dim = dim
        self._bits = bits & full_mask(1 << dim)
        self._default = None
        self._explicit = None

    @classmethod
    def sparse(cls, dim, explicit, default="r"):
        """Coloring given by a default color plus the masks of the opposite color."""
        if not 0 <= dim <= MAX_DIM:
            raise RangeError(f"dimension {dim} outside 0..{MAX_DIM}")
        explicit = frozenset(explicit)
        if any(not 0 <= m < (1 << dim) for m in explicit):
            raise RangeError("explicit mask outside the lattice")
        if default not in ("b", "r"):
            raise RangeError("default color must be 'b' or 'r'")
        if dim <= DENSE_CAP:
            bits = 0
            for m in explicit:
                bits |= 1 << m
            if default == "b":
                bits ^= full_mask(1 << dim)
            return cls(dim, bits)
        obj = cls.__new__(cls)
        obj.dim = dim
        obj._bits = None
        obj._default = default
        obj._explicit = explicit
        return obj

    @classmethod
    def from_blue(cls, dim, blue):
        return cls.sparse(dim, blue, "r")

    @classmethod
    def from_function(cls, dim, is_blue):
        bits = 0
        for m in range(1 << dim):
            if is_blue(m):
                bits |= 1 << m
        return cls(dim, bits)

    @classmethod
    def from_string(cls, s):
        """Coloring from a b/r string indexed by ascending mask."""
        n = len(s)
        dim = n.bit_length() - 1
        if n != 1 << dim:
            raise FormatError(f"length {n} is not a power of two")
        bits = 0
        for m, ch in enumerate(s):
            if ch == "b":
                bits |= 1 << m
            elif ch != "r":
                raise FormatError(f"bad color character {ch!r}")
        return cls(dim, bits)

    @property
    def is_dense(self):
        return self._bits is not None

    @property
    def bits(self):
        if self._bits is None:
            raise RangeError("sparse coloring has no dense bit vector")
        return self._bits

    @property
    def size(self):
        return 1 << self.dim

    def is_blue(self, m):
        if self._bits is not None:
            return bool(self._bits >> m & 1)
        return (m in self._explicit) != (self._default == "b")

    def color(self, m):
        return "b" if self.is_blue(m) else "r"

    def blue_masks(self):
        if self._bits is not None:
            return list(iter_bits(self._bits))
        if self._default == "r":
            return sorted(self._explicit)
        return [m for m in range(self.size) if m not in self._explicit]

    def red_masks(self):
        if self._bits is not None:
            return list(iter_bits(full_mask(self.size) & ~self._bits))
        if self._default == "b":
            return sorted(self._explicit)
        return [m for m in range(self.size) if m not in self._explicit]

    def sparse_parts(self):
        """(default color, sorted explicit masks); blue set is explicit when dense."""
        if self._bits is not None:
            return "r", list(iter_bits(self._bits))
        return self._default, sorted(self._explicit)

    def complement(self):
        if self._bits is not None:
            return Coloring(self.dim, full_mask(self.size) & ~self._bits)
        return Coloring.sparse(self.dim, self._explicit, "r" if self._default == "b" else "b")

    def to_string(self):
        return "".join(self.color(m) for m in range(self.size))

    def __eq__(self, other):
        if not isinstance(other, Coloring) or other.dim != self.dim:
            return False
        if self.is_dense and other.is_dense:
            return self._bits == other._bits
        return self.sparse_parts() == other.sparse_parts()

    def __hash__(self):
        return hash((self.dim, self._bits if self._bits is not None else self._explicit))

    def __repr__(self):
        if self._bits is not None and self.dim <= 4:
            return f"Coloring(dim={self.dim}, {self.to_string()!r})"
        return f"Coloring(dim={self.dim}, blue={len(self.blue_masks()) if self.dim <= 20 else '...'})"


def layered_coloring(N, blue_layers):
    blue_layers = set(blue_layers)
    if any(not 0 <= k <= N for k in blue_layers):
        raise RangeError(f"layer index outside 0..{N}")
    bits = 0
    for k in blue_layers:
        bits |= layer_bits(N, k)
    return Coloring(N, bits)


class SublatticeView:
    """The interval [A, B] of Q_N viewed as a Boolean lattice of dimension |B-A|.

    Local coordinate i corresponds to the i-th smallest element of B - A.
    """

    def __init__(self, coloring, A, B):
        if A & ~B:
            raise NotNestedError("sublattice needs A subset of B")
        if B >> coloring.dim:
            raise NotNestedError("B is not a vertex of the host lattice")
        self.coloring = coloring
        self.A = A
        self.B = B
        self.free = list(iter_bits(B & ~A))
        self.dim = len(self.free)

    def lift(self, local):
        m = self.A
        for i, e in enumerate(self.free):
            if local >> i & 1:
                m |= 1 << e
        return m

    def project(self, mask):
        if mask & ~self.B or self.A & ~mask:
            raise NotNestedError("mask lies outside the interval")
        return sum(1 << i for i, e in enumerate(self.free) if mask >> e & 1)

    def vertices(self):
        return [self.lift(x) for x in range(1 << self.dim)]

    def is_blue(self, local):
        return self.coloring.is_blue(self.lift(local))

    def to_coloring(self):
        bits = 0
        for x in range(1 << self.dim):
            if self.coloring.is_blue(self.lift(x)):
                bits |= 1 << x
        return Coloring(self.dim, bits)


def sublattice_view(c, A, B):
    return SublatticeView(c, A, B)


@dataclass(frozen=True)
class Blob:
    """Interval {Z : S ⊆ Z ⊆ S ∪ T}, optionally with |Z - S| <= trunc."""

    s_mask: int
    t_mask: int
    trunc: int = None

    def __post_init__(self):
        if self.s_mask & self.t_mask:
            raise RangeError("blob base and variable sets overlap")
        if self.trunc is not None and not 0 <= self.trunc <= popcount(self.t_mask):
            raise RangeError("truncation outside 0..|T|")

    def vertices(self):
        free = list(iter_bits(self.t_mask))
        out = []
        for x in range(1 << len(free)):
            if self.trunc is not None and popcount(x) > self.trunc:
                continue
            m = self.s_mask
            for i, e in enumerate(free):
                if x >> i & 1:
                    m |= 1 << e
            out.append(m)
        return sorted(out)

    def volume(self):
        return popcount(self.s_mask | self.t_mask)

    def is_monochromatic(self, c, color):
        want = color == "b"
        return all(c.is_blue(m) == want for m in self.vertices())


def symmetric_chain_decomposition(N):
    """Symmetric chains of Q_N by parenthesis matching.

    Elements in the set read as ')' and elements outside as '('.  A chain is
    generated from its bottom (a mask with no unmatched ')') by switching the
    unmatched '(' one at a time, left to right.
    """
    if not 0 <= N <= DENSE_CAP:
        raise RangeError("SCD supports 0 <= N <= 24")

    def unmatched(m):
        stack = []
        closes = []
        for i in range(N):
            if m >> i & 1:
                if stack:
                    stack.pop()
                else:
                    closes.append(i)
            else:
                stack.append(i)
        return closes, stack

    chains = []
    for m in range(1 << N):
        closes, opens = unmatched(m)
        if closes:
            continue
        ch = [m]
        cur = m
        for i in opens:
            cur |= 1 << i
            ch.append(cur)
        chains.append(ch)
    return chains


def encode(c, mode=None):
    """Serialize a coloring to the text file format."""
    if mode is None:
        mode = "dense" if c.is_dense else "sparse"
    lines = [f"dim {c.dim}", f"mode {mode}"]
    if mode == "dense":
        if c.dim > DENSE_CAP:
            raise FormatError("dense mode needs dim <= 24")
        lines.append(c.to_string())
    elif mode == "sparse":
        default, explicit = c.sparse_parts()
        lines.append(f"default {default}")
        lines.extend(format(m, "x") for m in explicit)
    else:
        raise FormatError(f"unknown mode {mode!r}")
    return "\n".join(lines) + "\n"


def decode(data):
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise FormatError("coloring files are ASCII") from exc
    lines = [ln.strip() for ln in data.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if len(lines) < 2:
        raise FormatError("missing header lines")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim" or not head[1].isdigit():
        raise FormatError(f"bad dim line {lines[0]!r}")
    dim = int(head[1])
    if dim > MAX_DIM:
        raise FormatError(f"dimension {dim} above {MAX_DIM}")
    mode_line = lines[1].split()
    if len(mode_line) != 2 or mode_line[0] != "mode":
        raise FormatError(f"bad mode line {lines[1]!r}")
    mode = mode_line[1]
    if mode == "dense":
        if dim > DENSE_CAP:
            raise FormatError("dense mode needs dim <= 24")
        if len(lines) != 3 or len(lines[2]) != 1 << dim:
            raise FormatError(f"dense body must be one line of {1 << dim} characters")
        return Coloring.from_string(lines[2])
    if mode == "sparse":
        if len(lines) < 3:
            raise FormatError("sparse mode needs a default line")
        dl = lines[2].split()
        if len(dl) != 2 or dl[0] != "default" or dl[1] not in ("b", "r"):
            raise FormatError(f"bad default line {lines[2]!r}")
        masks = []
        for ln in lines[3:]:
            try:
                m = int(ln, 16)
            except ValueError as exc:
                raise FormatError(f"bad hex mask {ln!r}") from exc
            if not 0 <= m < (1 << dim):
                raise FormatError(f"mask {ln} outside Q_{dim}")
            masks.append(m)
        return Coloring.sparse(dim, masks, dl[1])
    raise FormatError(f"unknown mode {mode!r}")


def read_coloring(path):
    with open(path, "r", encoding="ascii") as fh:
        return decode(fh.read())


def write_coloring(path, c, mode=None):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(encode(c, mode))


def scd_chain_count(N):
    return comb(N, N // 2)
