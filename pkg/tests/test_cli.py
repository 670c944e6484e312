import json
import subprocess
import sys

import pytest

from liequot.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def line3(tmp_path):
    p = tmp_path / "line3.json"
    p.write_text(json.dumps({"rank": 1, "weights": [[0], [1], [2]]}))
    return str(p)


def test_roots_report(capsys):
    code, out, _ = run(capsys, "roots", "A", "2")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["n_positive_roots"] == 3 and rep["weyl_order"] == 6
    assert rep["cartan_matrix"] == [[2, -1], [-1, 2]]
    assert len(rep["faces"]) == 4


def test_roots_usage_errors(capsys):
    assert run(capsys, "roots", "B", "2")[0] == EXIT_USAGE
    assert run(capsys, "roots", "A", "9")[0] == EXIT_USAGE
    assert run(capsys, "roots", "A")[0] == EXIT_USAGE
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    code, out, _ = run(capsys, "roots", "B", "2", "--experimental")
    assert code == EXIT_OK and json.loads(out)["n_positive_roots"] == 4


def test_chambers_command(capsys, line3):
    code, out, _ = run(capsys, "chambers", line3, "--region", "0:2", "--verify", "--samples", "5")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["n_walls"] == 3 and rep["n_chambers"] == 2
    assert rep["verify"]["passed"]


def test_chambers_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 1,\n "weights": [[0] [1]]}')
    code, _, err = run(capsys, "chambers", str(bad))
    assert code == EXIT_USAGE and f"{bad}:2:" in err
    empty = tmp_path / "empty.json"
    empty.write_text('{"rank": 1, "weights": []}')
    assert run(capsys, "chambers", str(empty))[0] == EXIT_USAGE
    assert run(capsys, "chambers", str(tmp_path / "missing.json"))[0] == EXIT_USAGE


def test_verify_quick_and_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "rescale-identity", "--suite", "orbit-metric", "--rank", "2", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["passed"] and [s["suite"] for s in rep["suites"]] == ["orbit-metric", "rescale-identity"]


def test_verify_mutation_is_caught(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "m-oracle", "--mutate", "sign-flip")
    rep = json.loads(out)
    assert code == EXIT_FAIL
    assert rep["suites"][0]["failures"] > 0 and rep["suites"][0]["witnesses"]


def test_verify_modes(capsys):
    for mode in ("exact", "float"):
        code, out, _ = run(capsys, "verify", "--suite", "projection-lemma", "--mode", mode)
        assert code == EXIT_OK
    assert run(capsys, "verify", "--mode", "other")[0] == EXIT_USAGE


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "rescale-identity", "--format", "text")
    assert code == EXIT_OK
    assert "PASS  rescale-identity" in out


def test_master_check(capsys, tmp_path):
    good = tmp_path / "m.json"
    good.write_text(json.dumps({"r": 2, "eps": ["1/50", "1/50"], "s_grid": {"max_den": 6, "random": 50}}))
    code, out, _ = run(capsys, "master-check", str(good))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["passed"] and rep["boundary"]["nonvanishing"]
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps({"r": 1, "eps": ["0"]}))
    assert run(capsys, "master-check", str(bad))[0] == EXIT_USAGE
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"r": 1, "eps": ["1/2"]}))
    assert run(capsys, "master-check", str(big))[0] == EXIT_USAGE


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "liequot.cli", "roots", "A", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["weyl_order"] == 2


def test_verify_orbit_metric_rank3(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "orbit-metric", "--rank", "3")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["suites"][0]["passed"] and rep["suites"][0]["failures"] == 0
