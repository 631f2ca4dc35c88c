import json
import subprocess
import sys

import pytest

from cnfgraph.cli import main
from cnfgraph.graph import dumps_instance, loads_instance, parse_edge_list
from cnfgraph import ClauseSystem, count_k22, materialize


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def instance(tmp_path, capsys):
    path = tmp_path / "inst.json"
    code, _, _ = run(capsys, "--seed", "11", "-o", str(path), "gen", "--p", "0.3",
                     "--n-left", "20", "--n-right", "25", "--n-clauses", "6")
    assert code == 0
    return path


def test_gen_writes_instance(instance):
    doc = json.loads(instance.read_text())
    assert doc["n"] == 6 and doc["seed"] == 11
    assert doc["params"] == {"d": None, "p": 0.3, "n_left": 20, "n_right": 25,
                             "n_clauses": 6, "seed": 11}
    assert len(doc["left_masks"]) == 20


def test_gen_derives_clause_count(capsys):
    code, out, _ = run(capsys, "gen", "--p", "0.5", "--d", "2", "--n-left", "1024",
                       "--n-right", "1024")
    assert code == 0
    assert json.loads(out)["n"] == 25


def test_stats(instance, capsys):
    code, out, _ = run(capsys, "stats", str(instance))
    doc = json.loads(out)
    cs = loads_instance(instance.read_text())
    assert code == 0
    assert doc["edge_count"] == materialize(cs).edge_count
    assert len(doc["degrees"]) == 20
    assert sum(doc["left_histogram"].values()) == 20
    _, out, _ = run(capsys, "stats", "--summary", str(instance))
    assert "degrees" not in json.loads(out)


def test_count_k22(instance, capsys):
    code, out, _ = run(capsys, "count-k22", str(instance))
    cs = loads_instance(instance.read_text())
    doc = json.loads(out)
    assert code == 0
    assert doc == count_k22(cs).to_dict()
    _, out, _ = run(capsys, "count-k22", "--summary", "--method", "pairs", str(instance))
    assert json.loads(out) == {"total": doc["total"], "algorithm": "pairs"}


def test_prune(instance, tmp_path, capsys):
    edges = tmp_path / "pruned.txt"
    code, out, _ = run(capsys, "prune", str(instance), "--threshold", "1",
                       "--edge-list", str(edges))
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"surviving_left", "threshold", "stats"}
    g = parse_edge_list(edges.read_text())
    assert g.n_left == len(doc["surviving_left"])
    # default threshold from embedded params
    code, out, _ = run(capsys, "prune", str(instance))
    assert code == 0


def test_prune_needs_threshold_without_params(tmp_path, capsys):
    path = tmp_path / "bare.json"
    path.write_text(dumps_instance(ClauseSystem(1, [1, 0], [1, 0])))
    code, _, err = run(capsys, "prune", str(path))
    assert code == 2 and "threshold" in err


def test_certify_instance_and_edge_list(instance, tmp_path, capsys):
    code, out, _ = run(capsys, "certify", str(instance))
    doc = json.loads(out)
    assert code == 0 and doc["consistent"]
    assert doc["lower_bound"] <= 6
    el = tmp_path / "matching.txt"
    el.write_text("p bip 4 4 4\n0 0\n1 1\n2 2\n3 3\n")
    code, out, _ = run(capsys, "certify", str(el))
    assert json.loads(out) == {"distinct_neighborhoods": 4, "lower_bound": 2}


def test_expect(capsys):
    code, out, _ = run(capsys, "expect", "--p", "0.5", "--n-left", "2", "--n-right", "1000",
                       "--n-clauses", "2", "--M", "100", "--mu", "0.1")
    doc = json.loads(out)
    assert code == 0
    assert doc["edge_probability"] == 0.5625
    assert doc["expected_degree"] == pytest.approx(562.5)
    assert doc["k22_probability"] == pytest.approx(0.19140625)
    assert doc["chernoff_bound"] == pytest.approx(0.2706705664732254)


def test_experiment_csv_and_json(capsys):
    args = ["experiment", "--p", "0.3", "--n-left", "20", "--n-right", "20",
            "--n-clauses", "4", "--replicates", "3"]
    code, out, _ = run(capsys, "--format", "csv", *args)
    assert code == 0
    assert out.splitlines()[0].startswith("replicate,seed,edge_count")
    assert len(out.splitlines()) == 4
    code, out, _ = run(capsys, *args)
    assert json.loads(out)["completed"] == 3


def test_compare_models(capsys):
    code, out, _ = run(capsys, "compare-models", "--p", "0.3", "--n-left", "20",
                       "--n-right", "20", "--n-clauses", "4", "--replicates", "2")
    assert code == 0
    assert len(json.loads(out)["cnf_k22"]) == 2


@pytest.mark.parametrize("argv", [
    ["gen", "--p", "1.5", "--n-left", "3", "--n-right", "3", "--n-clauses", "2"],
    ["gen", "--p", "0.3", "--n-left", "3", "--n-right", "3"],
    ["expect", "--p", "0.3", "--n-left", "3", "--n-right", "3"],
    ["stats", "/nonexistent/instance.json"],
])
def test_validation_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_cap_violation_exit_3(instance, capsys):
    code, _, err = run(capsys, "--cap-pairs", "10", "certify", str(instance))
    assert code == 3 and "cap" in err
    code, _, _ = run(capsys, "--cap-sos-bits", "2", "count-k22", "--method", "sos", str(instance))
    assert code == 3


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "cnfgraph.cli", *argv],
                          capture_output=True, check=True).stdout


def test_subprocess_determinism():
    args = ["--seed", "5", "--format", "csv", "experiment", "--p", "0.3", "--n-left", "30",
            "--n-right", "30", "--n-clauses", "5", "--replicates", "4"]
    first = _cli(*args)
    assert first == _cli(*args)
    assert first == _cli("--jobs", "3", *args)
