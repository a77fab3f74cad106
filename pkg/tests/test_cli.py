import json
import subprocess
import sys

import pytest

from hypercheck import cli
from hypercheck.engines.linear import check_linear

from helpers import NI, branching_kripke, seven_state_tree

NI_FAILS = branching_kripke({"s1": {"o"}, "s2": set()}, ("h", "i", "o"))


@pytest.fixture
def io(capsys, caplog):
    return capsys, caplog


@pytest.fixture
def tree(tmp_path):
    path = tmp_path / "tree.json"
    path.write_text(seven_state_tree().dumps())
    return str(path)


@pytest.fixture
def ni_fails(tmp_path):
    path = tmp_path / "k2.json"
    path.write_text(NI_FAILS.dumps())
    return str(path)


def run(io, *argv):
    """Exit status, parsed stdout and the logged diagnostics of one CLI run."""
    capsys, caplog = io
    caplog.clear()
    status = cli.main(list(argv))
    out, _ = capsys.readouterr()
    return status, (json.loads(out) if out.strip() else None), caplog.text


def test_holds(io, tree):
    status, out, _ = run(io, "--logic", "hyperctls", "--kripke", tree,
                         "--inline", "forall pi. X forall pi'. X (a[pi] <-> a[pi'])")
    assert status == 0
    assert out["verdict"] == "holds" and out["logic"] == "hyperctls"
    assert out["counterexample"] is None


def test_fails_with_witness(io, ni_fails):
    status, out, _ = run(io, "--logic", "hyperltl", "--kripke", ni_fails, "--inline", NI, "--witness")
    assert status == 0
    assert out["verdict"] == "fails"
    assert set(out["counterexample"]) == {"pi", "pi'"}


def test_formula_file(io, tree, tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("exists1 x. P{a}(x)\n")
    status, out, _ = run(io, "--logic", "mple", "--kripke", tree, "--formula", str(path))
    assert status == 0 and out["verdict"] == "holds"


def test_deterministic_output_is_identical(capsys, tree):
    argv = ("--logic", "hyperltl", "--kripke", tree, "--inline", "forall pi. exists rho. G (a[pi] <-> a[rho])",
            "--deterministic", "--differential")
    first = cli.main(list(argv))
    a = capsys.readouterr().out
    second = cli.main(list(argv))
    b = capsys.readouterr().out
    assert first == second == 0
    assert a == b
    assert json.loads(a)["stats"]["time_ms"] == 0


def test_oracle_bounds(io, ni_fails):
    status, out, _ = run(io, "--logic", "hyperltl", "--kripke", ni_fails, "--inline", NI,
                         "--oracle-bounds", "2,2")
    assert status == 0
    assert out["oracle"]["outcome"] == "fails_within_bound"


def test_disagreement_exit_code(io, ni_fails, monkeypatch):
    def wrong(*args, **kwargs):
        v = check_linear(*args, **kwargs)
        v.holds = not v.holds
        return v

    monkeypatch.setattr(cli, "check_linear", wrong)
    status, out, err = run(io, "--logic", "hyperltl", "--kripke", ni_fails, "--inline", NI,
                           "--oracle-bounds", "2,2")
    assert status == 1
    assert "contradicts" in err


@pytest.mark.parametrize("argv", [
    ("--logic", "hyperltl", "--inline", "forall pi. a[pi]"),
    ("--logic", "hyperltl", "--kripke", "KRIPKE", "--inline", "forall pi. (a[pi]"),
    ("--logic", "hyperltl", "--kripke", "KRIPKE", "--inline", "forall pi. a[rho]"),
    ("--logic", "nonsense", "--kripke", "KRIPKE", "--inline", "forall pi. a[pi]"),
    ("--logic", "hyperltl", "--kripke", "/nonexistent.json", "--inline", "forall pi. a[pi]"),
    ("--logic", "mple", "--kripke", "KRIPKE", "--inline", "exists1 x. P{a}(x)", "--oracle-bounds", "2,2"),
])
def test_input_errors(io, tree, argv):
    argv = [tree if a == "KRIPKE" else a for a in argv]
    status, out, err = run(io, *argv)
    assert status == 2
    assert out is None and err


@pytest.mark.parametrize("bounds", ["0,2", "x"])
def test_bad_oracle_bounds(capsys, tree, bounds):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--logic", "hyperltl", "--kripke", tree, "--inline", "forall pi. a[pi]",
                  "--oracle-bounds", bounds])
    assert exc.value.code == 2


@pytest.mark.parametrize("selector", ["hyperqptl+", "s1se", "hyperqctls"])
def test_undecidable(io, selector, monkeypatch):
    def boom(*args, **kwargs):
        raise AssertionError("no computation may start")

    for name in ("load_kripke", "parse_formula", "check_linear", "check_hyperctls", "check_mple"):
        monkeypatch.setattr(cli, name, boom)
    status, out, err = run(io, "--logic", selector, "--kripke", "/nonexistent.json", "--inline", "x")
    assert status == 3
    assert "undecidable" in err and out is None


def test_resource_guard(io, tree):
    f = "forall p. exists q. forall r. exists t. G (a[p] <-> a[t])"
    status, _, err = run(io, "--logic", "hyperltl", "--kripke", tree, "--inline", f)
    assert status == 4 and "alternation" in err
    status, out, _ = run(io, "--logic", "hyperltl", "--kripke", tree, "--inline", f,
                         "--max-alternations", "none")
    assert status == 0


def test_dump_automata(io, tree, tmp_path):
    target = tmp_path / "dump"
    status, _, _ = run(io, "--logic", "hyperltl", "--kripke", tree,
                       "--inline", "forall pi. G a[pi]", "--dump-automata", str(target))
    assert status == 0
    files = sorted(p.name for p in target.iterdir())
    assert files[0].startswith("01_matrix")
    assert all(json.loads((target / f).read_text()) for f in files)


def test_console_entry_point(tree):
    proc = subprocess.run([sys.executable, "-m", "hypercheck.cli", "--logic", "ltl", "--kripke", tree,
                           "--inline", "F G !a | F G a", "--deterministic"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["verdict"] == "holds"
