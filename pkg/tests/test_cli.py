import json

import numpy as np
import pytest

from minsum import cli, membership
from minsum.geometry import INSIDE, Verdict
from minsum.serialize import save_scenario


@pytest.fixture
def smooth_path(tmp_path, smooth_pair):
    p = tmp_path / "smooth.json"
    save_scenario(smooth_pair, p)
    return str(p)


@pytest.fixture
def bounded_path(tmp_path, bounded_pair):
    p = tmp_path / "bounded.json"
    save_scenario(bounded_pair, p)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -------------------------------------------------------------------- check


def test_check_inside(capsys, smooth_path):
    code, out, _ = run(capsys, "check", smooth_path, "--point", "0.45", "0.0")
    assert code == 0
    payload = json.loads(out)
    assert payload["state"] == "inside"
    assert payload["predicate_used"] == "two_smooth"
    assert payload["margin"] > 0


def test_check_outside(capsys, smooth_path):
    code, out, _ = run(capsys, "check", smooth_path, "--point", "9", "9")
    assert code == 1
    assert json.loads(out)["state"] == "outside"


def test_check_boundary_exit_code(capsys, tmp_path):
    # mu = 0 pair: on the colinear exterior ray the margin is exactly 0
    path = tmp_path / "flat.json"
    path.write_text(
        '{"summands": [{"x_star": [-1.0, 0.0], "mu": 0.0, "L": 2.0},'
        ' {"x_star": [1.0, 0.0], "mu": 0.0, "L": 3.0}]}'
    )
    code, out, _ = run(capsys, "check", str(path), "--point", "2.0", "0.0")
    assert code == 2
    assert json.loads(out)["state"] == "boundary"


def test_check_forced_predicate(capsys, smooth_path):
    code, out, _ = run(
        capsys, "check", smooth_path, "--point", "0.45", "0.0", "--predicate", "m_smooth"
    )
    assert code == 0
    assert json.loads(out)["predicate_used"] == "m_smooth"


# -------------------------------------------------------------- exit codes


def test_exit_code_bad_json(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{nope")
    code, _, err = run(capsys, "check", str(p), "--point", "0", "0")
    assert code == 64
    assert "minsum" in err


def test_exit_code_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/sc.json", "--point", "0", "0")
    assert code == 64


def test_exit_code_dimension(capsys, smooth_path):
    code, _, err = run(capsys, "check", smooth_path, "--point", "1", "2", "3")
    assert code == 65
    assert "dimension" in err


def test_exit_code_unsupported(capsys, tmp_path):
    p = tmp_path / "three.json"
    p.write_text(
        '{"summands": [{"x_star": [-1.0, 0.0], "mu": 1.0, "L": "inf"},'
        ' {"x_star": [1.0, 0.0], "mu": 1.0, "L": "inf"},'
        ' {"x_star": [0.0, 1.0], "mu": 1.0, "L": "inf"}], "bound_B": 5.0}'
    )
    code, _, err = run(capsys, "check", str(p), "--point", "0", "0")
    assert code == 66
    assert "unsupported" in err


def test_exit_code_usage(capsys, smooth_path):
    code, _, err = run(capsys, "region", smooth_path, "--bbox", "1")
    assert code == 64
    code, _, _ = run(capsys, "nonsense")
    assert code == 64
    code, _, _ = run(capsys, "check", smooth_path)  # missing --point
    assert code == 64


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


# ------------------------------------------------------------------- region


def test_region_writes_outputs(capsys, tmp_path, bounded_path):
    csv_path = tmp_path / "r.csv"
    svg_path = tmp_path / "r.svg"
    code, out, _ = run(
        capsys,
        "region",
        bounded_path,
        "--bbox", "-2", "2", "-2", "2",
        "--res", "20", "20",
        "--out", str(csv_path),
        "--svg", str(svg_path),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["cells"] == 400
    assert summary["inside"] + summary["boundary"] + summary["outside"] == 400
    assert summary["inside"] > 0
    assert summary["predicate_used"] == "two_nonsmooth_bounded"
    text = csv_path.read_text()
    assert text.startswith("x,y,state,margin,conditions\n")
    assert len(text.strip().split("\n")) == 401
    assert svg_path.read_text().startswith("<?xml")


def test_region_deterministic_across_workers(capsys, tmp_path, smooth_path):
    outs = []
    for tag, workers in (("a", "1"), ("b", "4"), ("c", "1")):
        csv_path = tmp_path / f"{tag}.csv"
        svg_path = tmp_path / f"{tag}.svg"
        code, _, _ = run(
            capsys,
            "region",
            smooth_path,
            "--bbox", "-1.5", "1.5", "-1", "1",
            "--res", "30", "20",
            "--out", str(csv_path),
            "--svg", str(svg_path),
            "--workers", workers,
        )
        assert code == 0
        outs.append((csv_path.read_bytes(), svg_path.read_bytes()))
    assert outs[0] == outs[1] == outs[2]


# ------------------------------------------------------------------- bounds


def test_bounds_reports(capsys, bounded_path):
    code, out, _ = run(capsys, "bounds", bounded_path)
    assert code == 0
    payload = json.loads(out)
    assert payload["reports"][0]["binding_term"] == "focal_linear"
    assert payload["enclosing"]["radius"] == pytest.approx(1.0)
    assert payload["focal"] is not None
    assert payload["notes"] == []


def test_bounds_smooth(capsys, smooth_path):
    code, out, _ = run(capsys, "bounds", smooth_path)
    payload = json.loads(out)
    assert code == 0
    assert [r["binding_term"] for r in payload["reports"]] == ["ball_smooth", "baseline"]
    assert payload["reports"][0]["kappa"] == pytest.approx(15.0)


# -------------------------------------------------------------------- focal


def test_focal_weightings(capsys, smooth_path, bounded_path):
    code, out, _ = run(capsys, "focal", smooth_path)
    assert code == 0
    payload = json.loads(out)
    assert payload["weighting"] == "smoothness"
    assert payload["focal"][0] == pytest.approx(10 / 22)

    code, out, _ = run(capsys, "focal", bounded_path)
    assert code == 0
    payload = json.loads(out)
    assert payload["weighting"] == "moduli"
    assert payload["focal"][0] == pytest.approx(0.25 / 3.75)


def test_focal_unsupported_pattern(capsys, tmp_path, mixed_pair):
    p = tmp_path / "mixed.json"
    save_scenario(mixed_pair, p)
    code, _, err = run(capsys, "focal", str(p))
    assert code == 66


# ------------------------------------------------------------------- verify


def test_verify_scenario_ok(capsys, smooth_path):
    code, out, _ = run(capsys, "verify", smooth_path, "--points", "60", "--seed", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["mismatches"] == []
    assert payload["necessity"]["failures"] == []
    assert payload["necessity"]["worst_margin"] > 0


def test_verify_bounded_ok(capsys, bounded_path):
    code, out, _ = run(capsys, "verify", bounded_path, "--points", "120")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert "necessity" not in payload  # nonsmooth summands: no quadratic sweep


def test_verify_random_ok(capsys):
    code, out, _ = run(capsys, "verify", "--random", "--seeds", "4", "--points", "40")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert len(payload["runs"]) == 4


def test_verify_requires_input(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 64


def test_verify_flags_corrupted_predicate(capsys, monkeypatch, bounded_path):
    # simulate a broken closed form: every point reported inside
    def always_inside(scenario, x, predicate=None):
        return Verdict(INSIDE, 1.0)

    monkeypatch.setattr(membership, "evaluate", always_inside)
    code, out, _ = run(capsys, "verify", bounded_path, "--points", "80")
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False
    assert payload["mismatches"]
    # reproduction data comes along
    assert "point" in payload["mismatches"][0]
