import json

import pytest

from torsionlab import cli
from torsionlab.core import settings
from torsionlab.search.families import fibonacci_data


SMALL_DATA = '{"n": 2, "items": [{"w": [2, 1], "a": 1, "b": 0}]}'


@pytest.fixture(autouse=True)
def restore_caps(monkeypatch):
    """run() writes the rank and factoring caps into settings."""
    monkeypatch.setattr(settings, "NILHECKE_MAX_RANK", settings.NILHECKE_MAX_RANK)
    monkeypatch.setattr(settings, "FACTOR_FULL_BITS", settings.FACTOR_FULL_BITS)


@pytest.fixture
def fib_file(tmp_path):
    path = tmp_path / "fib3.json"
    path.write_text(json.dumps(fibonacci_data(3).to_json()))
    return str(path)


def documents(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_eval_word(capsys, fib_file):
    assert cli.main(["eval-word", "--data", fib_file]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["kind"] == "operator_word_value"
    assert doc["schema_version"] == settings.SCHEMA_VERSION
    assert (doc["value"], doc["N"], doc["a"], doc["b"]) == ("3", 14, 4, 6)


def test_certify(capsys, fib_file):
    assert cli.main(["certify", "--data", fib_file]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["kind"] == "certificate"
    assert doc["value"] == "3"
    assert doc["N"] == 14
    assert doc["word_length"] == 47
    assert doc["primes"] == ["3"]
    assert "nilhecke" not in doc["evaluators"]


def test_certify_with_forced_nilhecke(capsys):
    assert cli.main(["certify", "--data", SMALL_DATA, "--nilhecke", "on"]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["value"] == "-1"
    assert "nilhecke" in doc["evaluators"]


def test_build(capsys):
    assert cli.main(["build", "--data", SMALL_DATA]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["word"] == [2, 1, 2]
    assert doc["x"] == [1, 3, 2]
    assert doc["subexpression"]["defect"] == 0


def test_degree_violation_exits_with_input_error(capsys):
    data = '{"n": 3, "items": [{"w": [2, 3, 1], "a": 1, "b": 0}]}'
    assert cli.main(["eval-word", "--data", data]) == 1
    assert capsys.readouterr().out == ""


def test_vanishing_certificate_exits_with_input_error():
    data = '{"n": 3, "items": [{"w": [1, 3, 2], "a": 1, "b": 0}]}'
    assert cli.main(["certify", "--data", data]) == 1


def test_malformed_json_exits_with_input_error(tmp_path):
    assert cli.main(["eval-word", "--data", "{not json"]) == 1
    assert cli.main(["eval-word", "--data", str(tmp_path / "missing.json")]) == 1


def test_resource_cap_exit_code(monkeypatch, fib_file):
    monkeypatch.setattr(settings, "NILHECKE_PRUNED_MAX_RANK", 10)
    assert cli.main(["certify", "--data", fib_file, "--nilhecke", "on"]) == 3
    assert cli.main(["zaremba", "growth", "--L", "1000"]) == 3


def test_fib_table(capsys):
    assert cli.main(["fib", "--max-i", "10", "--format", "table"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["i", "N", "value"]
    assert lines[-1].split() == ["10", "35", "89"]


def test_fib_emit_data(capsys):
    assert cli.main(["fib", "--max-i", "3", "--emit-data"]) == 0
    docs = documents(capsys.readouterr().out)
    assert [d["value"] for d in docs] == ["1", "2", "3"]
    assert docs[-1]["data"] == fibonacci_data(3).to_json()


def test_ulu(capsys):
    assert cli.main(["ulu", "--word", "LU", "--certify"]) == 0
    docs = documents(capsys.readouterr().out)
    assert [(d["row"], d["column"], d["entry"]) for d in docs] == [(0, 0, "-1"), (0, 1, "-1"), (1, 0, "-1"), (1, 1, "-2")]
    assert all(d["N"] == 11 for d in docs)
    assert all("certificate" in d for d in docs)


def test_search_output_is_deterministic(capsys):
    argv = ["search", "--ops", "fibonacci", "--n", "4", "--seeds", "x1", "--max-len", "5", "--iters", "100",
            "--rng-seed", "3", "--workers", "1"]
    assert cli.main(argv) == 0
    first = capsys.readouterr().out
    assert cli.main(argv) == 0
    assert capsys.readouterr().out == first
    assert all(doc["kind"] == "search_record" for doc in documents(first))


def test_search_defaults_follow_operator_set(capsys):
    assert cli.main(["search", "--ops", "fibonacci", "--max-len", "5", "--iters", "100", "--rng-seed", "3"]) == 0
    docs = documents(capsys.readouterr().out)
    assert {(doc["N"], int(doc["p"])) for doc in docs} == {(11, 2), (14, 2), (14, 3), (17, 3), (17, 5), (20, 2), (20, 5)}
    assert all(doc["seed"] == "x1" and doc["data"]["n"] == 4 for doc in docs)


@pytest.mark.parametrize("workers", ["2", "3"])
def test_search_output_is_byte_identical_across_workers(capsys, workers):
    argv = ["search", "--ops", "paper8", "--max-len", "5", "--iters", "400", "--max-rank", "16",
            "--generation-size", "100", "--rng-seed", "1"]
    assert cli.main(argv + ["--workers", workers]) == 0
    first = capsys.readouterr().out
    assert cli.main(argv + ["--workers", workers]) == 0
    assert capsys.readouterr().out == first
    assert cli.main(argv + ["--workers", "1"]) == 0
    assert capsys.readouterr().out == first
    assert documents(first)


@pytest.mark.parametrize(
    "argv",
    [
        ["zaremba", "density", "--A", "3", "--N", "2000"],
        ["zaremba", "primes", "--A", "2", "--theta", "1/4", "--N", "3000"],
    ],
)
def test_zaremba_output_is_byte_identical_across_workers(capsys, argv):
    assert cli.main(argv + ["--workers", "2"]) == 0
    first = capsys.readouterr().out
    assert cli.main(argv + ["--workers", "2"]) == 0
    assert capsys.readouterr().out == first
    assert cli.main(argv + ["--workers", "1"]) == 0
    assert capsys.readouterr().out == first


def test_search_beam_needs_max_rank():
    assert cli.main(["search", "--ops", "fibonacci", "--n", "4", "--seeds", "x1", "--mode", "beam"]) == 1


def test_zaremba_density(capsys):
    assert cli.main(["zaremba", "density", "--A", "1", "--N", "100", "--workers", "1"]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert (doc["count"], doc["density"]) == (5, "1/20")


def test_zaremba_primes(capsys):
    assert cli.main(["zaremba", "primes", "--A", "1", "--theta", "0.01", "--N", "100", "--workers", "1"]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["primes"] == ["2", "5", "13", "89"]
    assert doc["theta"] == "1/100"


def test_zaremba_growth(capsys):
    assert cli.main(["zaremba", "growth", "--L", "40", "--A", "5", "--theta", "1/2"]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["p"] == "31"
    assert doc["length"] <= 40


def test_zaremba_bridge(capsys):
    assert cli.main(["zaremba", "bridge", "--word", "RL"]) == 0
    (doc,) = documents(capsys.readouterr().out)
    assert doc["kind"] == "zaremba_bridge"
    assert doc["N"] == 11
    assert len(doc["entries"]) == 4


def test_output_file(tmp_path, capsys):
    target = tmp_path / "density.jsonl"
    assert cli.main(["zaremba", "density", "--A", "1", "--N", "100", "--workers", "1", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    (doc,) = documents(target.read_text())
    assert doc["density"] == "1/20"


def test_selftest_reports_pytest_status(monkeypatch, capsys):
    calls = []

    def fake_main(args):
        calls.append(args)
        return 0

    monkeypatch.setattr(pytest, "main", fake_main)
    assert cli.main(["selftest"]) == 0
    assert calls[0][-2:] == ["-m", "not slow"]
    (doc,) = documents(capsys.readouterr().out)
    assert doc["status"] == "passed"

    monkeypatch.setattr(pytest, "main", lambda args: 1)
    assert cli.main(["selftest", "--slow"]) == 2


def test_run_config_from_args():
    args = cli.setup_args(["zaremba", "primes", "--N", "50", "--rng-seed", "9"])
    config = cli.RunConfig.from_args(args)
    assert config.command == "zaremba primes"
    assert config.rng_seed == 9
    assert config.options == {"A": settings.ZAREMBA_A, "theta": settings.ZAREMBA_THETA, "N": 50}
