import itertools

import pytest
from hypothesis import given, settings, strategies as st

from posetramsey.combinatorics import alpha, n_star
from posetramsey.constructions import (SampleFailure, antichain_layered, blue_lambda_free,
                                       cc_layered, cc_layers, ccc_layered, ccc_layers, claims,
                                       dn_lower, eh_chain_coloring, eh_classes, shrub_forest_sample,
                                       two_chain_coloring, verify_coloring, vn_lower)
from posetramsey.errors import IncomparabilityError, RangeError
from posetramsey.lattice import Coloring, full_mask, layered_coloring, popcount
from posetramsey.poset_core import antichain, boolean_lattice, chain

from . import oracles


def _oracle_ok(c, forbid):
    """Independent permutation-based check of a verify_coloring claim."""
    blue = set(c.blue_masks())
    for pattern, mode, color in forbid:
        if color is None:
            if oracles.colored_copy(oracles.le_matrix(pattern.poset), pattern.colors, c.dim, blue):
                return False
        elif oracles.mono_copy(oracles.le_matrix(pattern), c.dim, blue, color, mode):
            return False
    return True


# ---- two chains ----

def test_two_chain_small():
    assert two_chain_coloring(1).blue_masks() == [0, 1]
    c = two_chain_coloring(4)
    blue = set(c.blue_masks())
    assert blue == {0b0001, 0b0011, 0b0111, 0b1111, 0b1110, 0b1100, 0b1000, 0}
    with pytest.raises(RangeError):
        two_chain_coloring(0)


def test_two_chain_four():
    c, forbid = claims("two_chain", 4)
    assert verify_coloring(c, forbid).ok
    assert _oracle_ok(c, forbid)
    # width at most two: any three blue vertices hold a comparable pair
    for trio in itertools.combinations(c.blue_masks(), 3):
        assert any(a & b == a or a & b == b for a, b in itertools.combinations(trio, 2))


# ---- layered colorings ----

def test_antichain_layered():
    assert antichain_layered(2, 0) == layered_coloring(3, {0, 3})
    c = antichain_layered(1, 1)
    assert c == layered_coloring(4, {0, 1, 3, 4})
    blue = set(c.blue_masks())
    big = [t for t in itertools.combinations(sorted(blue), 5)
           if all(a & b not in (a, b) for a, b in itertools.combinations(t, 2))]
    assert not big
    c, forbid = claims("antichain_layered", 1, 1)
    assert verify_coloring(c, forbid).ok


@pytest.mark.parametrize("n,r", [(0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (3, 1), (1, 2)])
def test_antichain_layered_red_layer_count(n, r):
    c = antichain_layered(n, r)
    N = n + 2 * r + 1
    red_layers = {popcount(m) for m in c.red_masks()}
    assert len(red_layers) == n
    assert c == layered_coloring(N, [k for k in range(N + 1) if k not in red_layers])


def test_cc_examples():
    assert cc_layers(1, 1) == (2, [0, 2])
    c, forbid = claims("cc", 1, 1)
    assert verify_coloring(c, forbid).ok and _oracle_ok(c, forbid)
    c, forbid = claims("cc", 2, 2)
    assert c.dim == 4
    assert verify_coloring(c, forbid).ok and _oracle_ok(c, forbid)
    with pytest.raises(RangeError):
        cc_layered(0, 1)


def test_ccc_examples():
    assert ccc_layers(1, 2) == (4, [0, 1, 3, 4])
    c, forbid = claims("ccc", 1, 2, 2, 1)
    assert verify_coloring(c, forbid).ok and _oracle_ok(c, forbid)
    with pytest.raises(RangeError):
        ccc_layered(1, 1)
    with pytest.raises(RangeError):
        claims("ccc", 1, 4, 2, 1)


def test_dn_vn_examples():
    c = dn_lower(2)
    assert c.dim == 2 * alpha(2) - 1 == 3
    assert c == layered_coloring(3, {2, 3})
    c, forbid = claims("dn", 2)
    assert verify_coloring(c, forbid).ok and _oracle_ok(c, forbid)
    v = vn_lower(2)
    assert v.dim == n_star(2) == 2 and v.red_masks() == [0]
    c, forbid = claims("vn", 2)
    assert verify_coloring(c, forbid).ok and _oracle_ok(c, forbid)
    c, forbid = claims("dn", 3)
    assert c.dim == 5 and verify_coloring(c, forbid).ok
    with pytest.raises(RangeError):
        dn_lower(1)


LAYERED = [("two_chain", (2,)), ("two_chain", (3,)), ("two_chain", (4,)), ("two_chain", (5,)),
           ("antichain_layered", (0, 1)), ("antichain_layered", (1, 1)), ("antichain_layered", (2, 1)),
           ("cc", (1, 1)), ("cc", (1, 2)), ("cc", (2, 1)), ("cc", (2, 2)), ("cc", (3, 2)), ("cc", (2, 3)),
           ("cc", (2, 2, 1)), ("cc", (1, 3, 2)),
           ("ccc", (1, 2, 2, 1)), ("ccc", (1, 2, 1, 1)), ("ccc", (2, 2, 2, 2)), ("ccc", (1, 3, 2, 2)),
           ("dn", (2,)), ("dn", (3,)), ("vn", (2,)), ("vn", (3,))]


@pytest.mark.parametrize("name,params", LAYERED)
def test_constructions_pass_their_verifier(name, params):
    c, forbid = claims(name, *params)
    rep = verify_coloring(c, forbid)
    assert rep.ok, rep.violations()
    if c.dim <= 4:
        assert _oracle_ok(c, forbid)


@pytest.mark.parametrize("name,params", [p for p in LAYERED if p[0] != "two_chain"])
def test_layered_constructions_are_layer_constant(name, params):
    c, _ = claims(name, *params)
    layers = {popcount(m) for m in c.blue_masks()}
    assert c == layered_coloring(c.dim, layers)


# ---- chain construction ----

S_HAND, T_HAND = [0b000001], [0b000110]


def test_eh_chain_trivial_families():
    N, n = 6, 2
    c = eh_chain_coloring(N, n, [], [])
    for m in range(1 << N):
        k = popcount(m)
        want = 2 * k < n or N < 2 * k <= 2 * N - n
        assert c.is_blue(m) == want


def test_eh_chain_hand_built():
    c, forbid = claims("eh_chain", 6, 2, S_HAND, T_HAND)
    assert verify_coloring(c, forbid).ok
    assert _oracle_ok(c, forbid)
    with pytest.raises(IncomparabilityError):
        eh_chain_coloring(6, 2, [0b1], [0b11])


def _random_families(draw, N):
    s_size = draw(st.integers(1, N - 2))
    t_size = draw(st.integers(s_size + 1, N))
    S = draw(st.lists(st.sampled_from([m for m in range(1 << N) if popcount(m) == s_size]),
                      max_size=2, unique=True))
    T = draw(st.lists(st.sampled_from([m for m in range(1 << N) if popcount(m) == t_size]),
                      max_size=2, unique=True))
    T = [t for t in T if all(s & t != s for s in S)]
    return S, T


@given(st.data(), st.integers(4, 6))
@settings(max_examples=60, deadline=None)
def test_eh_chain_red_intervals(data, N):
    n = data.draw(st.integers(1, N // 2))
    S, T = _random_families(data.draw, N)
    in_vt, in_vs, in_ws, in_wt = eh_classes(N, n, S, T)
    c = eh_chain_coloring(N, n, S, T)
    low = [z for z in range(1 << N) if in_vt(z) or in_ws(z)]
    assert not any(in_vt(z) and in_vs(z) for z in range(1 << N))
    lowset = set(low)
    for X in low:
        for Y in low:
            if X & Y == X:
                # every vertex between them is red
                free = Y & ~X
                sub = free
                while True:
                    assert not c.is_blue(X | sub), (X, Y)
                    if sub == 0:
                        break
                    sub = (sub - 1) & free
    assert lowset


# ---- shrub forests ----

def test_shrub_forest_k0():
    c = shrub_forest_sample(10, 0, seed=1)
    assert c.blue_masks() == [] and blue_lambda_free(c)


def _down_chains(blue):
    for m in blue:
        below = sorted((x for x in blue if x & m == x), key=popcount)
        if not all(a & b == a for a, b in zip(below, below[1:])):
            return False
    return True


@pytest.mark.parametrize("ys", [[0b1], [0b11], [0b1, 0b10, 0b100, 0b1000]])
@pytest.mark.parametrize("seed", [0, 7])
def test_shrub_forest_up_trees(ys, seed):
    k = popcount(ys[0])
    c = shrub_forest_sample(30, k, seed, ys=ys)
    assert isinstance(c, Coloring)
    blue = c.blue_masks()
    assert len(blue) == len(ys) * [1, 2, 5][k]
    assert blue_lambda_free(c) and _down_chains(blue)
    assert not oracles.blue_lambda(30, set(blue))


def test_shrub_forest_failures():
    small = shrub_forest_sample(11, 1, seed=0)
    assert isinstance(small, SampleFailure) and small.attempts == 0
    # every framework leaves Z empty, so the pairwise condition cannot hold
    crowded = shrub_forest_sample(12, 1, seed=0, retries=5)
    assert isinstance(crowded, SampleFailure) and crowded.attempts == 5


# ---- verifier ----

def test_verify_all_red():
    rep = verify_coloring(Coloring(3, 0), [(chain(1), "induced", "b")])
    assert rep.ok and rep.violations() == []


def test_verify_figure_a():
    # three low layers blue: the blue part contains a Q_2
    c = layered_coloring(3, {0, 1, 2})
    rep = verify_coloring(c, [(boolean_lattice(2), "induced", "b")])
    assert not rep.ok
    (_, _, emb), = rep.violations()
    assert all(c.is_blue(v) for v in emb.map)
    assert oracles.has_copy(oracles.le_matrix(boolean_lattice(2)), oracles.lattice_relation(list(emb.map)))


def test_verify_two_chain_four():
    c = two_chain_coloring(4)
    assert verify_coloring(c, [(antichain(3), "induced", "b"), (boolean_lattice(2), "induced", "r")]).ok


def test_verify_sparse():
    c = Coloring.sparse(26, [0, full_mask(26)], "r")
    assert verify_coloring(c, [(antichain(2), "induced", "b")]).ok
    assert not verify_coloring(c, [(chain(2), "induced", "b")]).ok
