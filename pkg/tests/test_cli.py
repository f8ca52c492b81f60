import json
import subprocess
import sys

import pytest

FSING = [sys.executable, "-m", "fsing.cli"]


def run_cli(*args, check=True):
    proc = subprocess.run(
        FSING + list(args), capture_output=True, text=True
    )
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture
def tame_problem(tmp_path):
    path = tmp_path / "tame.json"
    path.write_text(json.dumps({
        "p": 3, "gamma": 1, "num_vars": 0, "rank": 1, "matrix": [["t"]],
    }))
    return str(path)


def test_froot(tmp_path):
    proc = run_cli("froot", "--gens", "x0^3", "--e", "1", "-p", "2", "--json")
    assert json.loads(proc.stdout) == {"generators": ["x0"]}


def test_froot_vector_generators():
    proc = run_cli(
        "froot", "--gens", "x0^2,0;0,x0^2", "--e", "1", "-p", "2", "--json"
    )
    assert json.loads(proc.stdout) == {"generators": ["(x0, 0)", "(0, x0)"]}


def test_tau_fixed_level():
    proc = run_cli(
        "tau", "--f", "x0^3", "--alpha", "1/3", "--e", "3", "-p", "2", "--json"
    )
    assert json.loads(proc.stdout) == {"generators": ["x0"]}


def test_tau_stable():
    proc = run_cli("tau", "--f", "x0^3", "--alpha", "1/3", "-p", "2", "--json")
    assert json.loads(proc.stdout) == {"generators": ["x0"]}


def test_tau_rejects_float_alpha():
    proc = run_cli(
        "tau", "--f", "x0^2", "--alpha", "0.5", "-p", "3", check=False
    )
    assert proc.returncode == 1


def test_fjump():
    proc = run_cli("fjump", "--f", "x0^3", "-p", "2", "--e-max", "5", "--json")
    assert json.loads(proc.stdout) == {
        "exponents": [
            {"num": 1, "den": 3},
            {"num": 2, "den": 3},
            {"num": 1, "den": 1},
        ]
    }


def test_bfun_tame_end_to_end(tame_problem):
    proc = run_cli("bfun", "--input", tame_problem, "--e-max", "5", "--json")
    report = json.loads(proc.stdout)
    assert report["roots"] == [{"den": 2, "num": 1}]
    assert report["shift_N"] == 0
    assert report["unresolved"] == []
    assert report["s_sets"]["0"] == [{"den": 3, "num": 1}]


def test_sset(tame_problem):
    proc = run_cli("sset", "--input", tame_problem, "--e", "1", "--json")
    assert json.loads(proc.stdout) == {"e": 1, "s_set": [{"den": 9, "num": 4}]}


def test_jumps(tame_problem):
    proc = run_cli("jumps", "--input", tame_problem, "--e-max", "3", "--json")
    report = json.loads(proc.stdout)
    assert report["estimates"] == [{"den": 2, "num": 1}]
    assert report["chains"][0]["resolved"] is True


def test_hexpand(tame_problem):
    proc = run_cli("hexpand", "--input", tame_problem, "--e", "2", "--json")
    assert json.loads(proc.stdout) == {
        "e": 2, "tau_bound": 0, "table": {"4": [["1"]]},
    }


def test_graphgen_roundtrip(tmp_path):
    proc = run_cli("graphgen", "--f", "x0^2", "-p", "3")
    problem = json.loads(proc.stdout)
    assert problem["matrix"] == [["x0^4 + x0^2*t + t^2"]]
    path = tmp_path / "graph.json"
    path.write_text(proc.stdout)
    report = json.loads(
        run_cli("bfun", "--input", str(path), "--e-max", "3", "--json").stdout
    )
    assert {"num": 1, "den": 2} in report["roots"]

    # same answer through the library composition
    from fsing.bfun import b_function, graph_generator
    from fsing.polyring import CharConfig, Ring, poly_parse

    cfg = CharConfig(3)
    res = b_function(graph_generator(poly_parse("x0^2", Ring(3, 1)), cfg), cfg, 3)
    assert [{"num": r.numerator, "den": r.denominator} for r in res.roots] == (
        report["roots"]
    )


def test_byte_determinism(tame_problem):
    args = ["bfun", "--input", tame_problem, "--e-max", "4", "--json"]
    assert run_cli(*args).stdout == run_cli(*args).stdout


def test_text_mode(tame_problem):
    proc = run_cli("bfun", "--input", tame_problem, "--e-max", "3")
    assert "roots: 1/2" in proc.stdout


def test_unknown_subcommand():
    assert run_cli("nonsense", check=False).returncode == 1


def test_malformed_problem_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"p": 3}')
    proc = run_cli("sset", "--input", str(path), "--e", "0", check=False)
    assert proc.returncode == 1
    assert "gamma" in proc.stderr


def test_unparsable_polynomial():
    proc = run_cli("tau", "--f", "x0 - 1", "--alpha", "1/2", "-p", "3", check=False)
    assert proc.returncode == 1


def test_pair_limit_exit_code():
    proc = run_cli(
        "froot", "--gens", "x0^4;x0^2*x1^2 + x1^4", "--e", "1", "-p", "2",
        "--limit-pairs", "1", check=False,
    )
    assert proc.returncode == 2
