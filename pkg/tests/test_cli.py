from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from conelab.cli import SCHEMA, RunConfig, main, render, run

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_symmetry_four_verdicts(capsys):
    code, out, _ = invoke(capsys, "symmetry", "--algebra", "herm_c:3", "--level", "all", "--samples", "30",
                          "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["schema"] == SCHEMA
    assert [c["level"] for c in rep["checks"]] == ["weak", "exchange", "bit", "strong"]
    assert all(c["holds"] for c in rep["checks"])
    assert rep["config"]["seed"] == 7


def test_symmetry_direct_sum_refuted(capsys):
    code, out, _ = invoke(capsys, "symmetry", "--algebra", "sum:spin:4+spin:4", "--samples", "10")
    rep = json.loads(out)
    assert code == 1
    assert [c["holds"] for c in rep["checks"]] == [True, True, False, False]
    assert rep["checks"][2]["obstruction"]["reason"] == "FactorSignatureMismatch"


def test_starstar_pentagon_file(capsys):
    code, out, _ = invoke(capsys, "starstar", "--polytope", str(FIXTURES / "pentagon.json"), "--format", "text")
    assert code == 1
    assert "(**) fails" in out


def test_starstar_triangle(capsys):
    code, out, _ = invoke(capsys, "starstar", "--polytope", "triangle")
    assert code == 0 and json.loads(out)["passed"]


def test_polysym_and_distinguish(capsys):
    assert invoke(capsys, "polysym", "--polytope", "pentagon")[0] == 0
    assert invoke(capsys, "polysym", "--polytope", "square")[0] == 1
    code, out, _ = invoke(capsys, "distinguish", "--polytope", "pentagon")
    assert code == 0
    pairs = json.loads(out)["checks"][0]["pairs"]
    assert len(pairs) == 10
    assert sorted(tuple(p["pair"]) for p in pairs if p["distinguishable"]) == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]


def test_theorem2_report(capsys):
    code, out, _ = invoke(capsys, "theorem2", "--algebra", "herm_c:2", "--beta", "0.3", "--samples", "1000",
                          "--seed", "1")
    rep = json.loads(out)
    assert code == 0
    eps = next(c for c in rep["checks"] if c["name"] == "epsilon")
    assert eps["epsilon"] == pytest.approx(0.3, abs=1e-9)
    contract = next(c for c in rep["checks"] if c["name"] == "rescaled_form_contract")
    assert contract["trace_form_distance"] < 1e-8
    assert all(v < 1e-8 for k, v in contract.items() if k.endswith("_residual"))


def test_theorem2_cross_term_is_error_entry(capsys):
    code, out, _ = invoke(capsys, "theorem2", "--algebra", "sum:herm_c:2+herm_c:2", "--gamma", "0.1",
                          "--samples", "20")
    rep = json.loads(out)
    assert code == 1
    assert rep["checks"][0]["error"] == "EpsilonNotConstant"
    assert rep["checks"][0]["witness"]


@pytest.mark.parametrize("argv", [
    ["spectral", "--algebra", "albert", "--samples", "20"],
    ["spectral", "--algebra", "herm_c:2", "--element", "[3, -1, 0, 0]"],
    ["logic", "--algebra", "herm_h:2", "--check", "orthogonality", "--samples", "30"],
    ["logic", "--algebra", "spin:4", "--check", "frames", "--samples", "10"],
    ["logic", "--algebra", "herm_c:3", "--check", "orthomodularity", "--samples", "10"],
    ["transition", "--algebra", "herm_c:3", "--defect-scan", "50"],
    ["catalog"],
])
def test_passing_commands(capsys, argv):
    code, out, _ = invoke(capsys, *argv)
    assert code == 0, out
    assert json.loads(out)["passed"]


def test_transition_table(capsys):
    frames = json.dumps({"rows": [[1, 0, 0, 0]], "cols": [[1, 0, 0, 0], [0, 1, 0, 0]]})
    code, out, _ = invoke(capsys, "transition", "--algebra", "herm_c:2", "--frames", frames)
    assert code == 0
    assert "row_sums" in out


@pytest.mark.parametrize("argv", [
    ["spectral", "--algebra", "bogus:3"],
    ["spectral", "--algebra", "herm_c:2", "--element", "[1, 2]"],
    ["spectral", "--algebra", "herm_c:2", "--element", "{broken"],
    ["starstar", "--polytope", "dodecagon"],
    ["symmetry", "--algebra", "herm_c:2", "--samples", "0"],
])
def test_input_errors_exit_two(capsys, argv):
    code, _, err = invoke(capsys, *argv)
    assert code == 2 and err.startswith("conelab:")


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["symmetry"])
    assert exc.value.code == 2


def test_byte_identical_reruns(tmp_path):
    argv = ["symmetry", "--algebra", "sum:herm_c:2+classical:2", "--samples", "10", "--seed", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(argv + ["--output", str(a)])
    main(argv + ["--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_run_and_render_directly():
    report, code = run(RunConfig("catalog"))
    assert code == 0
    assert render(report, "text").endswith("passed")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "conelab", "catalog"], capture_output=True, text=True, check=True)
    assert "herm_c:3" in out.stdout
