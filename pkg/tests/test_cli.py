"""Command-line interface: golden outputs, determinism, exit codes."""

import json
import shutil
import subprocess
from pathlib import Path

import pytest

from quiveralg.cli import main

DATA = Path(__file__).parent / "data"
BEILINSON = str(DATA / "beilinson.quiver")
COMPLETED = str(DATA / "p2_completed.quiver")
COMMUTATIVE = str(DATA / "commutative_xy.quiver")
CUBIC = str(DATA / "cubic_loop.quiver")


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *args):
    code, out = run_cli(capsys, *args)
    return code, json.loads(out)


# -- golden pipeline -------------------------------------------------------------


def test_complete_matches_golden_bytes(capsys):
    code, out = run_cli(
        capsys, "complete", BEILINSON, "--total-deg", "3"
    )
    assert code == 0
    golden = (DATA / "p2_complete.json").read_text()
    assert out == golden


def test_complete_dsl_field_matches_golden_file(capsys):
    _, doc = run_json(capsys, "complete", BEILINSON, "--total-deg", "3")
    assert doc["dsl"] == (DATA / "p2_completed.quiver").read_text()
    assert doc["superpotential"] == (
        "x0*y1*z2 - x0*z1*y2 - y0*x1*z2 + y0*z1*x2 + z0*x1*y2 - z0*y1*x2"
    )
    assert doc["new_arrows"] == [
        {"degree": 1, "name": "z2", "source": 2, "target": 0},
        {"degree": 1, "name": "y2", "source": 2, "target": 0},
        {"degree": 1, "name": "x2", "source": 2, "target": 0},
    ]


def test_complete_is_deterministic(capsys):
    _, first = run_cli(capsys, "complete", BEILINSON, "--total-deg", "3")
    _, second = run_cli(capsys, "complete", BEILINSON, "--total-deg", "3")
    assert first == second


DERIVATIVES = {
    "z2": "x0*y1 - y0*x1",
    "y2": "-x0*z1 + z0*x1",
    "x2": "y0*z1 - z0*y1",
    "x0": "y1*z2 - z1*y2",
    "y0": "-x1*z2 + z1*x2",
    "z0": "x1*y2 - y1*x2",
    "x1": "-z2*y0 + y2*z0",
    "y1": "z2*x0 - x2*z0",
    "z1": "-y2*x0 + x2*y0",
}


@pytest.mark.parametrize("arrow", sorted(DERIVATIVES))
def test_derive_golden(capsys, arrow):
    code, doc = run_json(capsys, "derive", COMPLETED, "--arrow", arrow)
    assert code == 0
    assert doc == {"arrow": arrow, "derivative": DERIVATIVES[arrow]}


def test_derivatives_recover_original_relations(capsys, beilinson):
    from quiveralg.dsl import format_ncpoly

    originals = {
        name: format_ncpoly(beilinson.quiver, rel)
        for name, rel in zip(beilinson.rel_names, beilinson.relations)
    }
    for name, text in originals.items():
        _, doc = run_json(capsys, "derive", COMPLETED, "--arrow", name)
        assert doc["derivative"] == text


# -- parse / hilbert -------------------------------------------------------------


@pytest.mark.parametrize(
    "path", ["beilinson.quiver", "commutative_xy.quiver",
             "cubic_loop.quiver", "free_two.quiver",
             "p2_completed.quiver"],
)
def test_parse_round_trip(capsys, path):
    code, doc = run_json(capsys, "parse", str(DATA / path))
    assert code == 0
    assert doc["dsl"] == (DATA / path).read_text()


def test_parse_counts(capsys):
    _, doc = run_json(capsys, "parse", BEILINSON)
    assert doc["nodes"] == 3
    assert len(doc["arrows"]) == 6
    assert len(doc["relations"]) == 3


def test_hilbert_degree_zero_is_identity(capsys):
    code, doc = run_json(capsys, "hilbert", BEILINSON, "--max-deg", "0")
    assert code == 0
    assert doc["table"] == [
        {"component": [i, i], "degree": 0, "dimension": 1}
        for i in range(3)
    ]


def test_hilbert_beilinson(capsys):
    _, doc = run_json(capsys, "hilbert", BEILINSON, "--max-deg", "2")
    by_key = {
        (row["degree"], tuple(row["component"])): row["dimension"]
        for row in doc["table"]
    }
    assert by_key[(1, (0, 1))] == 3
    assert by_key[(1, (1, 2))] == 3
    assert by_key[(2, (0, 2))] == 6
    assert (2, (0, 1)) not in by_key


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr(
        "sys.stdin", io.StringIO(Path(COMMUTATIVE).read_text())
    )
    code, doc = run_json(capsys, "parse", "-")
    assert code == 0
    assert doc["nodes"] == 1


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["parse", BEILINSON, "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["nodes"] == 3


# -- analysis commands ------------------------------------------------------------


def test_ext_totals(capsys):
    code, doc = run_json(capsys, "ext", BEILINSON)
    assert code == 0
    assert doc["totals"] == {"0": 3, "1": 6, "2": 3}
    labels = {
        (row["k"], label)
        for row in doc["groups"] for label in row["basis"]
    }
    assert (2, "y0|x1") in labels and (1, "x0") in labels


def test_reconstruct_fixed_point(capsys):
    code, doc = run_json(capsys, "reconstruct", COMMUTATIVE)
    assert code == 0
    assert doc["hilbert_match"] is True
    assert any("x*y - y*x" in r["text"] for r in doc["relations"])


def test_cycfill_checks(capsys):
    code, doc = run_json(capsys, "cycfill", COMMUTATIVE)
    assert code == 0
    checks = doc["checks"]
    assert checks["stasheff"] and checks["cyclicity"]
    assert checks["dual_vanishing"]
    assert doc["structure"]["format"] == "ainf-structure"


def test_cycfill_weight_flag(capsys):
    code, doc = run_json(capsys, "cycfill", CUBIC, "--total-deg", "4")
    assert code == 0
    assert doc["checks"]["stasheff"]


def test_mc_command(capsys):
    code, doc = run_json(
        capsys, "mc", COMMUTATIVE, "--samples", "5", "--seed", "3"
    )
    assert code == 0
    assert doc["all_ok"] is True
    assert doc["instances"] == 6
    assert doc["failures"] == []
    assert doc["gauge_first_order"] is True


def test_mc_beilinson(capsys):
    code, doc = run_json(
        capsys, "mc", BEILINSON, "--samples", "3"
    )
    assert code == 0
    assert doc["all_ok"] is True


def test_repcheck(capsys):
    code, doc = run_json(
        capsys, "repcheck", COMPLETED, "--dim", "1,1,1",
        "--samples", "3",
    )
    assert code == 0
    assert doc["symbolic_gradient_ok"] is True
    assert doc["hessian_symmetric"] is True
    assert doc["finite_difference_ok"] is True


def test_stability_command(capsys):
    code, doc = run_json(
        capsys, "stability", COMPLETED, "--theta=-2,1,1",
        "--samples", "4", "--seed", "1",
    )
    assert code == 0
    assert len(doc["samples"]) == 4
    for row in doc["samples"]:
        assert row["verdict"] in {"stable", "semistable", "unstable"}


def test_stability_nonzero_total(capsys):
    _, doc = run_json(
        capsys, "stability", COMPLETED, "--theta", "1,1,1",
        "--samples", "2",
    )
    for row in doc["samples"]:
        assert row["verdict"] == "unstable"
        assert row["reason"] == "nonzero total weight"


# -- errors and exit codes ---------------------------------------------------------


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.quiver"
    bad.write_text("nodes: 1\narrow x: 0 -> 0 deg 1\nrel r: x*q\n")
    code, out = run_cli(capsys, "parse", str(bad))
    assert code == 2
    doc = json.loads(out)
    assert doc["error"]["code"] == "unknown-arrow"
    assert doc["error"]["line"] == 3
    assert doc["error"]["col"] > 0


def test_domain_error_exit_code(capsys):
    code, out = run_cli(capsys, "derive", COMPLETED, "--arrow", "nope")
    assert code == 1
    assert json.loads(out)["error"]["code"] == "domain"


def test_missing_file_is_io_error(capsys):
    code, out = run_cli(capsys, "parse", "/nonexistent/file.quiver")
    assert code == 1
    assert json.loads(out)["error"]["code"] == "io"


def test_console_script_matches_golden():
    exe = shutil.which("quiveralg")
    assert exe, "console script not installed"
    result = subprocess.run(
        [exe, "complete", BEILINSON, "--total-deg", "3"],
        capture_output=True, text=True, timeout=120,
    )
    assert result.returncode == 0
    assert result.stdout == (DATA / "p2_complete.json").read_text()
