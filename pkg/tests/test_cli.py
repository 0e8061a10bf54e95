import json
import subprocess
import sys

import pytest

from posetramsey.cli import run
from posetramsey.lattice import read_coloring, write_coloring, Coloring


def _run(capsys, *argv):
    rc = run(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_ramsey_q2_q2(capsys):
    rc, out = _run(capsys, "ramsey", "Q(2)", "Q(2)")
    assert rc == 0
    assert out.splitlines()[-1] == "4"
    assert out.splitlines()[0].startswith("UNSAT N=4 ")


def test_decide_emit_verify_round_trip(capsys, tmp_path):
    w = tmp_path / "w.clr"
    rc, out = _run(capsys, "decide", "Q(2)", "Q(2)", "3", "--emit", str(w))
    assert rc == 0 and out.startswith("SAT N=3")
    assert read_coloring(w).dim == 3
    rc, out = _run(capsys, "verify", str(w), "--no-blue", "Q(2)", "--no-red", "Q(2)")
    assert rc == 0
    assert all(line.startswith("ok") for line in out.splitlines())


@pytest.mark.parametrize("P,Q,N", [("C(3)", "Q(2)", 3), ("A(3)", "Q(2)", 4), ("V(2)", "V(2)", 2),
                                   ("A(2)", "C(3)", 2)])
def test_every_emitted_witness_verifies(capsys, tmp_path, P, Q, N):
    w = tmp_path / "w.clr"
    rc, _ = _run(capsys, "decide", P, Q, str(N), "--emit", str(w))
    assert rc == 0
    rc, _ = _run(capsys, "verify", str(w), "--no-blue", P, "--no-red", Q)
    assert rc == 0


def test_decide_unsat_writes_nothing(capsys, tmp_path):
    w = tmp_path / "w.clr"
    rc, out = _run(capsys, "decide", "Q(2)", "Q(2)", "4", "--emit", str(w))
    assert rc == 0 and out.startswith("UNSAT N=4")
    assert not w.exists()


def test_info(capsys):
    rc, out = _run(capsys, "info", "par(C(2),C(1))")
    assert rc == 0
    fields = dict(line.split(" ", 1) for line in out.splitlines())
    assert fields["height"] == "2" and fields["width"] == "2"
    assert fields["class"] == "trivial([2,1])"
    assert fields["series_parallel"] == "True"


@pytest.mark.parametrize("P,Q", [("Q(2)", "Q(2)"), ("C(3)", "Q(2)"), ("A(3)", "Q(2)"), ("V(2)", "V(2)"),
                                 ("CC(2,2)", "Q(1)"), ("LAM", "C(3)")])
def test_symmetry_flag_agrees(capsys, P, Q):
    rc_a, a = _run(capsys, "ramsey", P, Q, "--max-n", "4")
    rc_b, b = _run(capsys, "ramsey", P, Q, "--max-n", "4", "--no-symmetry")
    assert rc_a == rc_b
    if rc_a == 0:
        sat = lambda out: [line.split()[:2] for line in out.splitlines()[:-1]]
        assert sat(a) == sat(b)
        assert a.splitlines()[-1] == b.splitlines()[-1]


def test_weak_and_eh(capsys):
    rc, out = _run(capsys, "ramsey", "C(2)", "C(2)", "--weak")
    assert rc == 0 and out.splitlines()[-1] == "2"
    rc, out = _run(capsys, "eh", 'ALT("rbr",3)', "2")
    assert rc == 0 and out.splitlines()[-1] == "4"


def test_bounds(capsys):
    rc, out = _run(capsys, "bounds", "C(3)", "2")
    lines = out.splitlines()
    assert lines[0] == "pattern\tn\tlower\tupper\tsource"
    assert lines[1].split("\t")[:4] == ["C(3)", "2", "4", "4"]
    assert lines[2] == "value 4 (exact)"
    rc, out = _run(capsys, "bounds", "D(2)", "diag")
    assert "value [4, 5] (bounds)" in out


def test_json_output(capsys):
    rc, out = _run(capsys, "--json", "ramsey", "Q(2)", "Q(2)")
    data = json.loads(out)
    assert data["value"] == 4 and data["certificates"][-1]["sat"] is False
    rc, out = _run(capsys, "info", "Q(2)", "--json")
    assert json.loads(out)["height"] == 3


def test_construct_and_verify(capsys, tmp_path):
    f = tmp_path / "c.clr"
    rc, _ = _run(capsys, "construct", "cc", "2", "2", "-o", str(f))
    assert rc == 0
    rc, _ = _run(capsys, "verify", str(f), "--no-blue", "CC(2,2)", "--no-red", "Q(2)")
    assert rc == 0
    g = tmp_path / "e.clr"
    rc, _ = _run(capsys, "construct", "eh_chain", "6", "2", "1", "6", "-o", str(g))
    assert rc == 0
    rc, _ = _run(capsys, "verify", str(g), "--no-colored", 'ALT("rbr",4)')
    assert rc == 0


def test_shrub_forest_needs_seed(capsys, tmp_path):
    f = tmp_path / "s.clr"
    rc, _ = _run(capsys, "construct", "shrub_forest", "30", "1", "-o", str(f))
    assert rc == 4
    rc, _ = _run(capsys, "construct", "shrub_forest", "30", "0", "--seed", "1", "-o", str(f))
    assert rc == 0 and read_coloring(f).blue_masks() == []


def test_exit_codes(capsys, tmp_path):
    f = tmp_path / "all_blue.clr"
    write_coloring(f, Coloring(3, 0xFF))
    rc, out = _run(capsys, "verify", str(f), "--no-blue", "Q(2)")
    assert rc == 3 and out.startswith("FAIL")
    assert _run(capsys, "info", "par(C(2)")[0] == 4
    assert _run(capsys, "bogus")[0] == 4
    assert _run(capsys, "verify", str(tmp_path / "missing.clr"), "--no-blue", "C(1)")[0] == 4
    assert _run(capsys, "decide", "Q(2)", "Q(2)", "7")[0] == 2
    assert _run(capsys, "ramsey", "Q(3)", "Q(3)", "--budget", "200")[0] == 2
    (tmp_path / "bad.clr").write_text("dim 1\nmode dense\nrx\n")
    assert _run(capsys, "verify", str(tmp_path / "bad.clr"), "--no-blue", "C(1)")[0] == 4


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-c", "from posetramsey.cli import main; main()",
                           "ramsey", "C(2)", "Q(2)"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "3"
