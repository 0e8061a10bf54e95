import itertools

import pytest

from posetramsey.errors import BudgetExceeded, CapExceeded
from posetramsey.lattice import Coloring, layered_coloring, sublattice_view
from posetramsey.poset_core import boolean_lattice, build, chain, compose
from posetramsey.search import (DecisionProblem, decide, eh_number, m_p_decision,
                                parse_unsat_line, ramsey, ramsey_scan, verify_free, xgood_images)

from . import oracles

SMALL = ["C(1)", "C(2)", "C(3)", "A(2)", "A(3)", "V(2)", "LAM", "Q(2)", "CC(2,1)", "NPOSET"]


def _dec(P, Q, N, mode="induced", symmetry=True):
    return decide(DecisionProblem(mode, build(P), build(Q), N, symmetry=symmetry))


def _independent_free(c, P, Q, mode="induced"):
    blue = set(c.blue_masks())
    return (not oracles.mono_copy(oracles.le_matrix(build(P)), c.dim, blue, "b", mode)
            and not oracles.mono_copy(oracles.le_matrix(build(Q)), c.dim, blue, "r", mode))


# ---- worked examples ----

def test_q2_q2_n3_witness():
    cert = _dec("Q(2)", "Q(2)", 3)
    assert cert.satisfiable
    assert _independent_free(cert.witness, "Q(2)", "Q(2)")
    # the two-low-layers coloring is another witness
    q2 = boolean_lattice(2)
    assert verify_free(layered_coloring(3, {0, 1}), [(q2, "induced", "b"), (q2, "induced", "r")])


def test_q2_q2_n4_exhausted():
    cert = _dec("Q(2)", "Q(2)", 4)
    assert cert.exhausted
    line = cert.unsat_line()
    assert line.startswith("UNSAT N=4 ")
    rec = parse_unsat_line(line)
    assert rec["N"] == 4 and rec["nodes"] == cert.nodes and rec["classes"] == cert.classes


def test_single_vertex_host():
    assert _dec("C(1)", "C(1)", 0).exhausted


@pytest.mark.parametrize("P,Q,value", [("C(2)", "Q(2)", 3), ("A(2)", "Q(1)", 3),
                                        ("Q(2)", "Q(2)", 4)])
def test_ramsey_examples(P, Q, value):
    assert ramsey("induced", build(P), build(Q)) == value


@pytest.mark.parametrize("expr,n,value", [('ALT("rbr",2)', 1, 2), ('ALT("rbr",3)', 2, 4),
                                          ('colored(Q(2),"brbb")', 2, 4)])
def test_eh_examples(expr, n, value):
    assert eh_number(build(expr), n) == value


# ---- brute-force oracle ----

@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("mode", ["induced", "weak"])
def test_decide_matches_brute_force(N, mode):
    for P, Q in itertools.combinations_with_replacement(SMALL, 2):
        cert = _dec(P, Q, N, mode)
        want = oracles.brute_decide(oracles.le_matrix(build(P)), oracles.le_matrix(build(Q)), N, mode)
        assert cert.satisfiable == want, (P, Q, N, mode)
        if cert.satisfiable:
            assert _independent_free(cert.witness, P, Q, mode)


def test_eh_decide_matches_brute_force():
    cp = build('ALT("rbr",3)')
    q = oracles.le_matrix(boolean_lattice(1))
    for N in (1, 2, 3):
        cert = decide(DecisionProblem("eh", cp, None, N, n=1))
        want = False
        for blue in oracles.all_blue_sets(N):
            if oracles.colored_copy(oracles.le_matrix(cp.poset), cp.colors, N, blue):
                continue
            if oracles.mono_copy(q, N, blue, "b") or oracles.mono_copy(q, N, blue, "r"):
                continue
            want = True
            break
        assert cert.satisfiable == want


# ---- symmetry reduction ----

SYM_CASES = [("Q(2)", "Q(2)"), ("C(3)", "Q(2)"), ("A(3)", "Q(2)"), ("V(2)", "V(2)"),
             ("CC(2,2)", "Q(1)"), ("A(2)", "C(3)"), ("LAM", "V(2)")]


@pytest.mark.parametrize("P,Q", SYM_CASES)
def test_symmetry_reduction_agrees(P, Q):
    for N in range(0, 5):
        a = _dec(P, Q, N, symmetry=True)
        b = _dec(P, Q, N, symmetry=False)
        assert a.satisfiable == b.satisfiable, (P, Q, N)
        if N <= 3:
            assert a.classes <= b.classes or not a.exhausted


@pytest.mark.parametrize("expr,n", [('ALT("rbr",3)', 1), ('colored(Q(2),"brrb")', 1)])
def test_symmetry_reduction_agrees_eh(expr, n):
    cp = build(expr)
    for N in range(0, 5):
        a = decide(DecisionProblem("eh", cp, None, N, n=n, symmetry=True))
        b = decide(DecisionProblem("eh", cp, None, N, n=n, symmetry=False))
        assert a.satisfiable == b.satisfiable


# ---- structural laws ----

PAIRS = [("C(2)", "C(3)"), ("A(2)", "Q(2)"), ("V(2)", "LAM"), ("CC(2,1)", "Q(1)"), ("A(3)", "C(2)")]


@pytest.mark.parametrize("P,Q", PAIRS)
def test_color_swap_symmetry(P, Q):
    assert ramsey("induced", build(P), build(Q)) == ramsey("induced", build(Q), build(P))
    for N in range(0, 4):
        a = _dec(P, Q, N)
        b = _dec(Q, P, N)
        assert a.satisfiable == b.satisfiable
        if a.satisfiable:
            assert _independent_free(a.witness.complement(), Q, P)


@pytest.mark.parametrize("P,Q", PAIRS)
def test_dual_symmetry(P, Q):
    p, q = build(P), build(Q)
    assert ramsey("induced", p, q) == ramsey("induced", p.dual(), q.dual())
    cert = decide(DecisionProblem("induced", p, q, ramsey("induced", p, q) - 1))
    # complementing every set reverses the order
    N = cert.N
    flipped = Coloring.from_function(N, lambda m: cert.witness.is_blue(m ^ ((1 << N) - 1)))
    assert verify_free(flipped, [(p.dual(), "induced", "b"), (q.dual(), "induced", "r")])


@pytest.mark.parametrize("P,Q", PAIRS + [("Q(2)", "Q(2)"), ("V(2)", "V(2)")])
def test_weak_at_most_induced(P, Q):
    assert ramsey("weak", build(P), build(Q)) <= ramsey("induced", build(P), build(Q))


@pytest.mark.parametrize("P1,P2,Q", [("C(2)", "C(1)", "Q(1)"), ("C(2)", "C(2)", "Q(1)"),
                                     ("V(2)", "C(1)", "Q(1)"), ("C(3)", "C(1)", "Q(2)")])
def test_parallel_composition_bound(P1, P2, Q):
    p1, p2, q = build(P1), build(P2), build(Q)
    lhs = ramsey("induced", compose("parallel", p1, p2), q)
    assert lhs <= max(ramsey("induced", p1, q), ramsey("induced", p2, q)) + 2


@pytest.mark.parametrize("P1,P2,n", [("C(2)", "C(2)", 1), ("LAM", "C(2)", 1), ("C(2)", "V(2)", 1),
                                     ("Q(2)", "C(2)", 1)])
def test_gluing_bound(P1, P2, n):
    p1, p2 = build(P1), build(P2)
    inner = ramsey("induced", p2, boolean_lattice(n))
    glued = compose("glue", p1, p2)
    assert ramsey("induced", glued, boolean_lattice(n)) <= ramsey("induced", p1, boolean_lattice(inner))


@pytest.mark.parametrize("P,Q", [("C(3)", "Q(2)"), ("A(3)", "Q(2)"), ("V(2)", "V(2)")])
def test_monotone_by_restriction(P, Q):
    certs = ramsey_scan("induced", build(P), build(Q))
    for cert in certs:
        if not cert.satisfiable or cert.N == 0:
            continue
        # every facet of a witness is a witness one dimension lower
        full = (1 << cert.N) - 1
        for e in range(cert.N):
            for A, B in ((0, full & ~(1 << e)), (1 << e, full)):
                sub = sublattice_view(cert.witness, A, B).to_coloring()
                assert _independent_free(sub, P, Q)
    last = certs[-1]
    assert last.exhausted
    if last.N + 1 <= 4:
        assert _dec(P, Q, last.N + 1).exhausted


# ---- caps and budgets ----

def test_caps():
    with pytest.raises(CapExceeded):
        _dec("Q(2)", "Q(2)", 7)
    with pytest.raises(BudgetExceeded):
        decide(DecisionProblem("induced", build("Q(2)"), build("Q(2)"), 4, node_limit=2))


def test_budget_env(monkeypatch):
    from posetramsey.search import default_budget_ms
    monkeypatch.setenv("PRL_BUDGET_MS", "1234")
    assert default_budget_ms() == 1234
    monkeypatch.delenv("PRL_BUDGET_MS")
    assert default_budget_ms() == 900_000


def test_threads_agree():
    a = _dec("A(3)", "Q(2)", 4)
    b = decide(DecisionProblem("induced", build("A(3)"), build("Q(2)"), 4), threads=2)
    assert a.satisfiable and b.satisfiable
    assert _independent_free(b.witness, "A(3)", "Q(2)")


# ---- blockers in tiny lattices ----

def test_xgood_images_oracle():
    for N, k in [(2, 1), (3, 1), (3, 2)]:
        Y = (1 << k) - 1
        X = ((1 << N) - 1) & ~Y
        want = set()
        for m in oracles.xgood_maps(X, Y):
            want.add(sum(1 << v for v in m.values()))
        assert set(xgood_images(N, k)) == want


def test_m_p_examples():
    lam = build("LAM")
    assert m_p_decision(lam, 1, 1)
    assert not m_p_decision(chain(3), 1, 0)
    assert not m_p_decision(chain(2), 1, 2)


def _brute_m_p(P, k, N):
    Y = (1 << k) - 1
    X = ((1 << N) - 1) & ~Y
    maps = oracles.xgood_maps(X, Y)
    prel = oracles.le_matrix(P)
    for bits in range(1 << (1 << N)):
        F = [m for m in range(1 << N) if bits >> m & 1]
        if not all(set(F) & set(m.values()) for m in maps):
            continue
        if not oracles.has_copy(prel, oracles.lattice_relation(F)):
            return True
    return False


@pytest.mark.parametrize("P", ["C(2)", "A(2)", "LAM", "V(2)"])
@pytest.mark.parametrize("k,N", [(1, 1), (1, 2), (2, 2), (1, 3)])
def test_m_p_matches_brute_force(P, k, N):
    assert m_p_decision(build(P), k, N) == _brute_m_p(build(P), k, N)
