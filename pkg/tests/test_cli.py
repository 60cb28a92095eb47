import json

import numpy as np
import pytest

from setopt.cli import main


def run(argv):
    return main([str(a) for a in argv])


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return path


@pytest.fixture
def outdir(tmp_path):
    d = tmp_path / "out"
    d.mkdir()
    return d


def test_solve_hyperbola(outdir):
    assert run(["solve", "--catalog", "hyperbola", "--out", outdir]) == 0
    rep = json.loads((outdir / "solve_report.json").read_text())
    assert rep["verdict"] == "sc-solution"
    assert (outdir / "support.csv").exists()
    assert (outdir / "infimum_polyline.csv").exists()


def test_solve_writes_only_requested_formats(outdir):
    assert run(["solve", "--catalog", "hyperbola", "--out", outdir,
                "--format", "json"]) == 0
    assert (outdir / "solve_report.json").exists()
    assert not (outdir / "support.csv").exists()


def test_solve_deterministic_bytes(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    d1.mkdir(), d2.mkdir()
    for d in (d1, d2):
        assert run(["solve", "--catalog", "linear_vop", "--out", d,
                    "--base-res", 21]) == 0
    for name in ("solve_report.json", "support.csv", "infimum_polyline.csv"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_solve_scalar_identity_single_direction(outdir):
    assert run(["solve", "--catalog", "scalar_identity", "--out", outdir]) == 0
    rep = json.loads((outdir / "solve_report.json").read_text())
    assert len(rep["condition3"]["directions"]) >= 1
    x = rep["candidate"]["points"][0][0]
    assert abs(x - 2.0) <= 1e-3


def test_verify_true_infimizer(outdir):
    assert run(["verify", "--catalog", "linear_vop", "--m", "1,0;0,1",
                "--out", outdir, "--base-res", 181]) == 0
    rep = json.loads((outdir / "verify_report.json").read_text())
    assert rep["verdict"] == "sc-solution"
    assert rep["gaps"]["max"] <= 1e-9
    gens = np.array(rep["infimum"]["generators"], dtype=float)
    assert sorted(map(tuple, np.round(gens, 9))) == [(0.0, 1.0), (1.0, 0.0)]


def test_verify_detects_missing_point(outdir):
    assert run(["verify", "--catalog", "linear_vop", "--m", "1,0",
                "--out", outdir, "--base-res", 181]) == 3
    rep = json.loads((outdir / "verify_report.json").read_text())
    assert rep["verdict"] == "fail"
    assert rep["gaps"]["max"] >= 0.2


def test_verify_m_from_problem_file(tmp_path, outdir):
    prob = write_json(tmp_path / "p.json", {
        "objective": {"catalog": "linear_vop"},
        "m": [[1.0, 0.0], [0.0, 1.0]],
    })
    assert run(["verify", "--problem", prob, "--out", outdir]) == 0


def test_verify_without_m_is_an_input_error(outdir, capsys):
    assert run(["verify", "--catalog", "linear_vop", "--out", outdir]) == 1
    assert "candidate" in capsys.readouterr().err


def test_oracle_chain_instance(tmp_path, outdir):
    inst = write_json(tmp_path / "chain.json", {
        "cone": {"kind": "orthant", "dim": 2},
        "table": [
            {"x": [0.0], "generators": [[2.0, 2.0]]},
            {"x": [1.0], "generators": [[1.0, 1.0]]},
            {"x": [2.0], "generators": [[0.0, 0.0]]},
        ],
    })
    assert run(["oracle", "--problem", inst, "--out", outdir]) == 0
    rep = json.loads((outdir / "oracle_report.json").read_text())
    assert rep["lemma"]["passed"] is True
    assert rep["commutation_gap"] <= 1e-12
    assert rep["lattice_minimizers"] == [[2.0]]
    assert rep["fault_injected"] is False


def test_oracle_fault_injection_fails(tmp_path, outdir):
    inst = write_json(tmp_path / "chain.json", {
        "cone": {"kind": "orthant", "dim": 2},
        "table": [
            {"x": [0.0], "generators": [[2.0, 2.0]]},
            {"x": [1.0], "generators": [[1.0, 1.0]]},
            {"x": [2.0], "generators": [[0.0, 0.0]]},
        ],
    })
    assert run(["oracle", "--problem", inst, "--inject-fault",
                "--out", outdir]) == 3
    rep = json.loads((outdir / "oracle_report.json").read_text())
    assert rep["fault_injected"] is True
    assert rep["lemma"]["passed"] is False or rep["commutation_gap"] > 1e-12


def test_oracle_campaign(outdir):
    assert run(["oracle", "--instances", 10, "--seed", 7,
                "--out", outdir]) == 0
    rep = json.loads((outdir / "oracle_report.json").read_text())
    assert rep["commutation_campaign"]["count"] == 10
    assert rep["commutation_campaign"]["max_gap"] <= 1e-12
    assert rep["lemma_campaign"]["passed"] is True


def test_cvp_catalog(outdir):
    assert run(["cvp", "--catalog", "quadratic_cvp", "--mesh", 60,
                "--out", outdir]) == 0
    rep = json.loads((outdir / "cvp_report.json").read_text())
    assert all(rep["converged"])
    assert max(rep["residuals"]) <= 1e-6
    assert rep["translation"]["pass"] is True
    front = (outdir / "front.csv").read_text().splitlines()
    assert len(front) == 10  # header + 9 directions
    assert (outdir / "arcs.csv").exists()


def test_cvp_divergent_direction_flagged(tmp_path, outdir):
    prob = write_json(tmp_path / "drift.json", {
        "a": 0.0, "b": 1.0, "A": [0.0], "B": [1.0], "N": 40,
        "lagrangian": "drift", "alphas": [0.0, 0.5],
    })
    assert run(["cvp", "--problem", prob, "--out", outdir]) == 2
    rep = json.loads((outdir / "cvp_report.json").read_text())
    assert not all(rep["converged"])
    notes = " ".join(rep["notes"])
    assert "non-attainment" in notes


def test_catalog_lists_everything(capsys):
    assert run(["catalog"]) == 0
    out = capsys.readouterr().out
    for name in ("hyperbola", "linear_vop", "scalar_identity",
                 "quadratic_cvp", "chain", "pair"):
        assert name in out


def test_malformed_json_is_input_error(tmp_path, outdir, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"objective": }')
    assert run(["solve", "--problem", bad, "--out", outdir]) == 1
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_unknown_catalog_name_is_input_error(outdir, capsys):
    assert run(["solve", "--catalog", "nope", "--out", outdir]) == 1
    assert "nope" in capsys.readouterr().err


def test_infeasible_table_is_input_error(tmp_path, outdir, capsys):
    prob = write_json(tmp_path / "empty.json", {
        "cone": {"kind": "orthant", "dim": 2},
        "objective": {"table": [
            {"x": [0.0], "generators": []},
            {"x": [1.0], "generators": []},
        ]},
    })
    assert run(["solve", "--problem", prob, "--out", outdir]) == 1
    assert capsys.readouterr().err != ""


def test_solve_needs_exactly_one_source(outdir, capsys):
    assert run(["solve", "--out", outdir]) == 1
    assert run(["solve", "--catalog", "hyperbola", "--problem", "x.json",
                "--out", outdir]) == 1
