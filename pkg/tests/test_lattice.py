import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from posetramsey.errors import FormatError, NotNestedError, RangeError
from posetramsey.lattice import (Blob, Coloring, decode, encode, full_mask, layer_bits,
                                 layered_coloring, masks_by_level, popcount, read_coloring,
                                 scd_chain_count, subset_bits, sublattice_view, superset_bits,
                                 symmetric_chain_decomposition, write_coloring)
from posetramsey.poset_core import antichain

from . import oracles


def colorings(max_dim=6):
    return st.integers(0, max_dim).flatmap(
        lambda d: st.integers(0, (1 << (1 << d)) - 1).map(lambda b: Coloring(d, b)))


def test_layered_examples():
    assert layered_coloring(2, {0, 1, 2}).blue_masks() == [0, 1, 2, 3]
    assert layered_coloring(3, set()).blue_masks() == []
    with pytest.raises(RangeError):
        layered_coloring(3, {4})


def test_extreme_layers_have_no_blue_antichain_pair():
    c = layered_coloring(3, {0, 3})
    blue = set(c.blue_masks())
    assert blue == {0, 7}
    assert not oracles.mono_copy(oracles.le_matrix(antichain(2)), 3, blue, "b")


@given(st.integers(0, 8), st.sets(st.integers(0, 8)))
def test_layered_constant_on_layers(N, layers):
    layers = {k for k in layers if k <= N}
    c = layered_coloring(N, layers)
    for m in range(1 << N):
        assert c.is_blue(m) == (popcount(m) in layers)


def test_layer_bits_and_levels():
    for N in range(6):
        order = masks_by_level(N)
        assert sorted(order) == list(range(1 << N))
        assert [popcount(m) for m in order] == sorted(popcount(m) for m in order)
        for k in range(N + 1):
            assert popcount(layer_bits(N, k)) == comb(N, k)


@pytest.mark.parametrize("N", range(0, 6))
def test_up_down_bitsets(N):
    for m in range(1 << N):
        up = sum(1 << x for x in range(1 << N) if x & m == m)
        down = sum(1 << x for x in range(1 << N) if x & m == x)
        assert superset_bits(N, m) == up
        assert subset_bits(N, m) == down


# ---- sublattice views ----

def test_view_examples():
    c = Coloring(3, 0b10110010)
    single = sublattice_view(c, 5, 5)
    assert single.dim == 0 and single.vertices() == [5]
    ident = sublattice_view(c, 0, 7)
    assert ident.to_coloring() == c
    with pytest.raises(NotNestedError):
        sublattice_view(c, 1, 2)


def test_view_n4():
    rnd = random.Random(3)
    c = Coloring(4, rnd.getrandbits(16))
    A, B = 0b0001, 0b0111
    v = sublattice_view(c, A, B)
    assert v.dim == 2
    verts = v.vertices()
    assert sorted(verts) == sorted(m for m in range(16) if m & A == A and m & ~B == 0)
    for local in range(4):
        assert v.is_blue(local) == c.is_blue(v.lift(local))
        assert v.project(v.lift(local)) == local


@given(colorings(5), st.data())
@settings(max_examples=100)
def test_restriction_law(c, data):
    if c.dim == 0:
        return
    # a codimension-one sublattice: fix one element in or out
    e = data.draw(st.integers(0, c.dim - 1))
    inside = data.draw(st.booleans())
    full = full_mask(c.dim)
    A, B = (1 << e, full) if inside else (0, full & ~(1 << e))
    sub = sublattice_view(c, A, B).to_coloring()
    assert sub.dim == c.dim - 1
    assert decode(encode(sub)) == sub


# ---- SCD ----

def test_scd_examples():
    assert symmetric_chain_decomposition(0) == [[0]]
    assert len(symmetric_chain_decomposition(2)) == 2
    assert len(symmetric_chain_decomposition(4)) == 6


@pytest.mark.parametrize("N", range(0, 13))
def test_scd_partition_and_symmetry(N):
    chains = symmetric_chain_decomposition(N)
    seen = [m for ch in chains for m in ch]
    assert sorted(seen) == list(range(1 << N))
    assert len(chains) == scd_chain_count(N) == comb(N, N // 2)
    for ch in chains:
        for a, b in zip(ch, ch[1:]):
            assert a & b == a and popcount(b) == popcount(a) + 1
        assert popcount(ch[0]) + popcount(ch[-1]) == N


# ---- file format ----

def test_encode_all_red():
    assert encode(Coloring(1, 0)) == "dim 1\nmode dense\nrr\n"


def test_sparse_n26():
    c = Coloring.sparse(26, [0, (1 << 26) - 1], "r")
    text = encode(c)
    body = text.splitlines()[3:]
    assert len(body) == 2
    assert decode(text) == c
    assert c.blue_masks() == [0, (1 << 26) - 1]


@given(colorings(7))
@settings(max_examples=100)
def test_round_trip(c):
    assert decode(encode(c)) == c
    assert decode(encode(c, "sparse")) == c


@given(colorings(6), st.sampled_from("br"))
@settings(max_examples=60)
def test_dense_sparse_agree(c, default):
    explicit = c.red_masks() if default == "b" else c.blue_masks()
    s = Coloring.sparse(c.dim, explicit, default)
    assert s == c and s.bits == c.bits


@pytest.mark.parametrize("text", [
    "", "dim x\nmode dense\nrr\n", "dim 1\nmode dense\nrrr\n", "dim 1\nmode weird\n",
    "dim 2\nmode sparse\ndefault q\n", "dim 2\nmode sparse\ndefault r\nzz\n",
    "dim 2\nmode sparse\ndefault r\n10\n", "dim 1\nmode dense\nrx\n",
])
def test_decode_errors(text):
    with pytest.raises(FormatError):
        decode(text)


def test_file_round_trip(tmp_path):
    c = layered_coloring(4, {0, 2})
    path = tmp_path / "c.clr"
    write_coloring(path, c)
    assert read_coloring(path) == c


# ---- blobs ----

def test_blob_vertices():
    b = Blob(0b001, 0b110)
    assert b.vertices() == [1, 3, 5, 7]
    assert Blob(0b001, 0b110, trunc=1).vertices() == [1, 3, 5]
    assert b.volume() == 3
    with pytest.raises(RangeError):
        Blob(1, 1)
