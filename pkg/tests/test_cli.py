import io
import subprocess
import sys

import pytest

from epistemic.cli import main, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_decide_valid():
    assert call("decide", "--logic", "S4", "K1 p -> p") == (0, "VALID\n")


def test_decide_countermodel_exit_one():
    code, text = call("decide", "--logic", "S4", "~K1 ~K1 p -> K1 ~K1 ~p")
    assert code == 1 and text.startswith("COUNTERMODEL\nworlds ")


def test_search_none_up_to():
    assert call("search", "--class", "wd-preorder", "--bound", "4", "~K1 ~K1 p -> K1 ~K1 ~p") == \
        (0, "NONE-UP-TO 4\n")


def test_search_fork():
    code, text = call("search", "--class", "preorder", "--bound", "3", "~K1 ~K1 p -> K1 ~K1 ~p")
    assert code == 1
    assert text == ("COUNTERMODEL\nworlds 3\nagent 1: (0,0) (0,1) (0,2) (1,1) (2,2)\n"
                    "val p: 1\nworld 0\n")


def test_check_broken_mp(tmp_path):
    prf = tmp_path / "file.prf"
    prf.write_text("system S4\n1: p -> p ; TAUT\n2: K1 (p -> p) ; NEC 1 1\n3: K1 p ; MP 7 1\n")
    code, text = call("check", "--proof", str(prf))
    assert code == 1 and text.startswith("ERROR line 3: ")


def test_derive_check_translate(tmp_path):
    code, cert = call("derive", "--logic", "S4", "k-thm", "p", "q")
    assert code == 0 and cert.startswith("system S4\n")
    prf = tmp_path / "kthm.prf"
    prf.write_text(cert)
    assert call("check", "--proof", str(prf)) == (0, "OK K1 p & ~K1 ~q -> ~K1 ~(p & q)\n")
    code, topo = call("translate", "--proof", str(prf))
    assert code == 0 and topo.startswith("system TOPOS4\n")
    prf.write_text(topo)
    assert call("check", "--proof", str(prf)) == (0, "OK K1 p & ~K1 ~q -> ~K1 ~(p & q)\n")


def test_derive_list_and_principles():
    code, text = call("derive", "list")
    assert code == 0 and "positive-introspection FORMULA" in text
    code, cert = call("derive", "belief-conjunction", "p", "q")
    assert code == 0 and cert.startswith("system S42\n")


def test_parse_and_eval(tmp_path):
    assert call("parse", "K1(p&q)->~L2 r") == (0, "K1 (p & q) -> ~~K2 ~r\n")
    model = tmp_path / "fork.kripke"
    model.write_text("worlds 3\nagent 1: (0,0) (1,1) (2,2) (0,1) (0,2)\nval p: 1\nworld 0\n")
    assert call("eval", "--model", str(model), "L1 K1 p") == (0, "TRUE\n")
    assert call("eval", "--model", str(model), "K1 L1 p") == (0, "FALSE\n")
    topo = tmp_path / "sierpinski.topo"
    topo.write_text("points 2\nopen:\nopen: 1\nopen: 0 1\nval p: 1\n")
    assert call("eval", "--model", str(topo), "K0 p") == (0, "true at: 1\n")


def test_classify(tmp_path):
    model = tmp_path / "fork.kripke"
    model.write_text("worlds 3\nagent 1: (0,0) (1,1) (2,2) (0,1) (0,2)\n")
    assert call("classify", "--model", str(model)) == \
        (0, "agent 1: all reflexive transitive preorder\n")
    assert call("classify", "--model", str(model), "--class", "wd")[0] == 1
    code, text = call("classify", "--seed", "4", "--agents", "2", "--class", "wd-preorder", "--bound", "4")
    assert code == 0


def test_mcs():
    assert call("mcs", "--logic", "K", "p") == (0, "{p}\n{~p}\n")
    assert call("mcs", "--logic", "S4", "--extend", "K1 p", "K1 p") == (0, "{p, K1 p}\n")


@pytest.mark.parametrize("argv", [
    ["parse", "p &"],
    ["decide", "--logic", "S42", "p"],
    ["search", "--class", "nope", "p"],
    ["check", "--proof", "/nonexistent/file.prf"],
    ["search", "--bound", "9", "p"],
    ["derive", "k-thm", "p"],
    ["suite", "nope"],
])
def test_usage_errors_exit_two(argv):
    assert call(*argv)[0] == 2


def test_argparse_errors_exit_two(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["decide"]) == 2


def test_suite_command():
    code, text = call("suite", "witnesses")
    assert code == 0 and text.startswith("PASS witnesses")


def test_deterministic_output():
    argv = ["search", "--class", "preorder", "--bound", "3", "K1 p -> K2 p"]
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "epistemic", "decide", "K1 p -> p"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "VALID\n"
