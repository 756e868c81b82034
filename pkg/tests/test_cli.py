import csv
import io
import json

import pytest

from gnkls.cli import EXIT_BREAKDOWN, EXIT_OK, EXIT_VALIDATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "example1", "--method", "gnk", "--x0", "1,0.1")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["status"] == "Converged" and d["iterations"] == 5
    assert "0.10000000000000001" in out


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "example2", "--method", "sec", "--x0", "1,0.1", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "k,x,step_norm,grad_norm"
    assert lines[-1].startswith("# status=Converged")


def test_rank_deficient_linear_file(capsys, tmp_path):
    f = tmp_path / "rank1.txt"
    f.write_text("1 1 1\n2 2 2\n")
    code, _, err = run(capsys, "solve", "--problem", f"linear:{f}", "--x0", "0,0")
    assert code == EXIT_VALIDATION
    assert err.startswith("error: RankDeficient:")


def test_solve_breakdown_status(capsys, monkeypatch):
    import numpy as np

    from gnkls import cli
    from gnkls.problems import Problem

    flat = Problem(
        name="flat",
        n=2,
        m=2,
        eval_F=lambda v: np.array([v[0] + v[1] - 1, v[0] + v[1]]),
        eval_G=lambda v: np.zeros(2),
        jacobian_F=lambda v: np.ones((2, 2)),
    )
    monkeypatch.setattr(cli.bench, "get_problem", lambda name: flat)
    code, _, err = run(capsys, "solve", "--problem", "flat", "--x0", "0,0")
    assert code == EXIT_BREAKDOWN
    assert err.startswith("error: Breakdown:")


@pytest.mark.parametrize(
    "argv",
    [
        ("solve", "--problem", "nope", "--x0", "1,2"),
        ("solve", "--problem", "example1", "--x0", "1,2,3"),
        ("solve", "--problem", "example1", "--x0", "a,b"),
        ("basin", "--problem", "example1", "--grid", "0,1,1;0,1,2"),
        ("radius", "--problem", "example1", "--radius", "-1"),
    ],
)
def test_validation_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_VALIDATION
    assert err.count("\n") == 1 and err.startswith("error: ")


def test_bench_default_table(capsys):
    code, out, _ = run(capsys, "bench")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 24


def test_bench_spec_file(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"problems": ["example2"], "methods": ["sec"], "starts": [[0.5, 0.5]]}))
    code, out, _ = run(capsys, "bench", "--spec", str(spec), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)[0]["method"] == "SEC"

    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "bench", "--spec", str(bad))
    assert code == EXIT_VALIDATION and err.startswith("error: ")
    bad.write_text(json.dumps({"problems": ["example2"]}))
    code, _, err = run(capsys, "bench", "--spec", str(bad))
    assert code == EXIT_VALIDATION


def test_basin_to_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GNKLS_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "basin", "--problem", "example1", "--grid", "0.8,1,2;0.2,0.4,2", "--out", "b.csv")
    assert code == EXIT_OK and out == ""
    first = (tmp_path / "b.csv").read_text()
    assert len(first.strip().splitlines()) == 5
    run(capsys, "basin", "--problem", "example1", "--grid", "0.8,1,2;0.2,0.4,2", "--out", "b.csv")
    assert (tmp_path / "b.csv").read_text() == first


def test_radius_json(capsys):
    code, out, _ = run(capsys, "radius", "--problem", "example1", "--radius", "0.1", "--samples", "200", "--seed", "7")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["condition15_holds"] is True
    assert d["constants"]["source"] == "sampled_lower_bound"
    code2, out2, _ = run(capsys, "radius", "--problem", "example1", "--radius", "0.1", "--samples", "200", "--seed", "7")
    assert out2 == out
