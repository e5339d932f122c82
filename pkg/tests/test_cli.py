import json

import pytest

from scripts.oed import build_parser, main

from conftest import INPUT_DIR


@pytest.fixture
def run_config(tmp_path):
    data = {
        "name": "cli test",
        "constellation": {"rings": 4, "sats_per_ring": 4},
        "stations_csv": str(INPUT_DIR / "stations.csv"),
        "seeds": {"requests": 5, "channels": 7},
        "window": {"tau": 1.0, "delta": 0.01},
        "requests": {"count": 4},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return path


def cli(config, out_dir, *args):
    return main([args[0], "--config", str(config), "--out-dir", str(out_dir), *args[1:]])


def test_graph_output_is_reproducible(run_config, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert cli(run_config, first, "graph") == 0
    assert cli(run_config, second, "graph") == 0
    name = "graph_R4_K4_tau1_delta0.01.json"
    assert (first / name).read_bytes() == (second / name).read_bytes()

    document = json.loads((first / name).read_text())
    assert document["summary"]["vertices"] == 60 + 16
    assert document["summary"]["isl_edges"] == 16
    assert len(document["edges"]) == document["summary"]["edges"]
    assert "path" not in document


def test_graph_path_query(run_config, tmp_path):
    # At tau 0 satellite S0.1 sits over 36N 0E, within 8 degrees of both cities.
    assert cli(run_config, tmp_path, "graph", "--rings", "10", "--sats-per-ring", "10",
               "--tau", "0", "--delta", "0", "--path", "Madrid", "Lisbon") == 0
    document = json.loads((tmp_path / "graph_R10_K10_tau0_delta0.json").read_text())
    path = document["path"]
    assert path is not None
    assert path["labels"][0] == "Madrid"
    assert path["labels"][-1] == "Lisbon"
    assert len(path["vertices"]) == 3
    assert path["labels"][1].startswith("S")


def test_solve_generated_batch(run_config, tmp_path):
    assert cli(run_config, tmp_path, "solve") == 0
    document = json.loads((tmp_path / "solution_tau1_delta0.01.json").read_text())
    assert len(document["requests"]) == 4
    solvers = [s["solver"] for s in document["solutions"]]
    assert solvers == ["greedy", "exact", "restricted_exact"]
    rewards = {s["solver"]: s["total_reward"] for s in document["solutions"]}
    assert rewards["greedy"] <= rewards["exact"]
    assert rewards["restricted_exact"] <= rewards["exact"]
    assert all(s["verification"]["valid"] for s in document["solutions"])


def test_nyc_singapore_without_isl(run_config, tmp_path):
    batch = tmp_path / "batch.txt"
    batch.write_text("NYC Singapore 1 1\n")
    assert cli(run_config, tmp_path, "solve", "--batch", str(batch), "--no-isl",
               "--rings", "10", "--sats-per-ring", "10", "--tau", "0") == 0
    document = json.loads((tmp_path / "solution_tau0_delta0.01.json").read_text())
    solutions = {s["solver"]: s for s in document["solutions"]}
    assert set(solutions) == {"greedy", "restricted_exact"}
    assert solutions["restricted_exact"]["total_reward"] == 0
    assert document["config"]["allow_isl"] is False


def test_empty_batch(run_config, tmp_path):
    batch = tmp_path / "batch.txt"
    batch.write_text("# nothing to serve\n")
    assert cli(run_config, tmp_path, "solve", "--batch", str(batch)) == 0
    document = json.loads((tmp_path / "solution_tau1_delta0.01.json").read_text())
    assert document["requests"] == []
    assert all(s["total_reward"] == 0 for s in document["solutions"])


def test_greedy_only(run_config, tmp_path):
    assert cli(run_config, tmp_path, "solve", "--greedy-only") == 0
    document = json.loads((tmp_path / "solution_tau1_delta0.01.json").read_text())
    assert [s["solver"] for s in document["solutions"]] == ["greedy"]


def test_unknown_station_fails(run_config, tmp_path, caplog):
    batch = tmp_path / "batch.txt"
    batch.write_text("NYC Atlantis 1 1\nGotham Paris 2 2\n")
    assert cli(run_config, tmp_path, "solve", "--batch", str(batch)) == 1
    assert "Atlantis" in caplog.text and "Gotham" in caplog.text


def test_missing_config_fails(tmp_path):
    assert main(["graph", "--config", str(tmp_path / "absent.json")]) == 1


def test_unknown_scenario_is_a_usage_error(run_config):
    with pytest.raises(SystemExit) as info:
        main(["scenario", "iv", "--config", str(run_config)])
    assert info.value.code == 2


def test_parser_defaults():
    args = build_parser().parse_args(["scenario"])
    assert args.which == []
    assert not args.no_isl
    args = build_parser().parse_args(["solve", "--tau", "2", "--no-isl"])
    assert args.tau == 2.0 and args.no_isl
