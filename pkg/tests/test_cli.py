import io
import json
import math
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import jsonschema
import numpy as np
import pytest

from betajacobi.cli import main, parse_grid, schema, UsageError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:  # argparse usage errors
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def test_exponential_law_csv():
    code, out, _ = run("pdf", "--law", "case2-r2", "--beta", "2", "--k", "1", "--grid", "0:5:6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,pdf"
    y, f = np.array([[float(v) for v in line.split(",")] for line in lines[1:]]).T
    assert np.array_equal(y, np.arange(6.0))
    assert np.array_equal(f, np.exp(-y))


def test_exact_min_json_validates():
    code, out, _ = run(
        "pdf", "--law", "exact-min", "--beta", "2", "--a", "0", "--b", "3", "--m", "2",
        "--grid", "0.1:0.9:5", "--format", "json",
    )
    assert code == 0
    rec = json.loads(out)
    jsonschema.validate(rec, schema("pdf"))
    lam = np.array(rec["grid"])
    assert np.allclose(rec["values"], 10 * (1 - lam) ** 9, rtol=1e-12)


def test_domain_error_exit_code():
    code, _, err = run("pdf", "--law", "case1", "--beta", "2", "--b", "3", "--m", "2", "--grid", "0.1:0.9:5")
    assert code == 3
    assert "case 1 requires beta in (0,2)" in err


def test_usage_errors():
    assert run("experiment", "--preset", "nope")[0] == 2
    assert run("pdf", "--law", "exact-min", "--beta", "1", "--a", "0", "--b", "1", "--m", "2", "--grid", "0:1")[0] == 2
    assert run("pdf", "--law", "exact-min", "--b", "1", "--m", "2", "--grid", "0:1:3")[0] == 2
    with pytest.raises(UsageError):
        parse_grid("a:b:c")


def test_convergence_error_exit_code():
    # a large-exponent exact law outside the series budget
    code, _, err = run(
        "pdf", "--law", "exact-min", "--beta", "6", "--a", "9.5", "--b", "9.5", "--m", "8", "--grid", "0.05:0.1:2"
    )
    assert code == 4, err


def test_sample_is_deterministic_and_lossless(tmp_path):
    args = ["sample", "--model", "sutton", "--beta", "1.75", "--a", "2.3", "--b", "2.5", "--m", "4",
            "--n-samples", "300", "--seed", "7"]
    c1, o1, _ = run(*args)
    c2, o2, _ = run(*args, "--threads", "3")
    assert c1 == c2 == 0 and o1 == o2
    rows = o1.splitlines()
    assert rows[0] == "index,value" and len(rows) == 301
    c3, o3, _ = run(*args, "--format", "json")
    rec = json.loads(o3)
    jsonschema.validate(rec, schema("sample"))
    csv_values = [float(r.split(",")[1]) for r in rows[1:]]
    assert csv_values == rec["values"]


def test_full_size_sample_rows():
    code, out, _ = run("sample", "--model", "sutton", "--beta", "1.75", "--a", "2.3", "--b", "2.5", "--m", "4",
                       "--n-samples", "10000", "--seed", "7")
    assert code == 0 and len(out.splitlines()) == 10001


def test_haar_sample_support():
    code, out, _ = run("sample", "--model", "haar", "--field", "complex", "--n", "40", "--r", "10",
                       "--n-samples", "1000", "--seed", "1")
    assert code == 0
    v = np.array([float(r.split(",")[1]) for r in out.splitlines()[1:]])
    assert v.size == 1000 and np.all((v > 0) & (v < 1))


def test_experiment_preset(tmp_path):
    out_file = tmp_path / "r.json"
    code, _, err = run("experiment", "--preset", "f-b2", "--seed", "42", "-o", str(out_file),
                       "--csv", str(tmp_path / "fb2"))
    assert code == 0, err
    rec = json.loads(out_file.read_text())
    jsonschema.validate(rec, schema("experiment"))
    assert rec["pass"] and rec["spec"]["figure_id"] == "f_b2"
    theory = (tmp_path / "fb2_theory.csv").read_text().splitlines()
    assert theory[0] == "x,pdf" and len(theory) == len(rec["theory"]["grid"]) + 1
    hist = (tmp_path / "fb2_histogram.csv").read_text().splitlines()
    assert hist[0] == "bin_left,bin_right,height"


def test_experiment_fig_gen_passes():
    code, out, _ = run("experiment", "--preset", "fig-gen", "--seed", "42")
    assert code == 0
    assert json.loads(out)["pass"]


def test_custom_experiment_failure_exit_code():
    # complex hard-edge samples scored against the real-case limit law
    code, out, _ = run("experiment", "--law", "case2-r2", "--beta", "2", "--k", "1", "--b", "50", "--m", "15",
                       "--scaling", "raw", "--n-samples", "2000", "--seed", "3")
    assert code == 1
    assert not json.loads(out)["pass"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "betajacobi", "pdf", "--law", "case2-r2", "--beta", "4",
                          "--k", "1", "--grid", "1:1:1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert float(res.stdout.splitlines()[1].split(",")[1]) == pytest.approx(2 * math.exp(-2))
