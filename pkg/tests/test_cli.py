import json

import pytest

from coevo.cli import cli


def run_cli(capsys, *argv):
    code = cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_fig1(capsys):
    code, out, _ = run_cli(capsys, "solve", "--fixture", "fig1")
    assert code == 0
    payload = json.loads(out)
    assert payload["grundy"] == [1, 0, 2, 1, 0]
    assert payload["critical"] == [0, 2]
    assert payload["first_player_win"] is True
    assert payload["canonical_strategy"] == {"0": 1, "1": 2, "2": 4, "3": 4}


def test_solve_second_player_game(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--family", "subtraction_nim", "--n", "7", "--k", "2"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["first_player_win"] is False
    assert payload["canonical_strategy"] is None


def test_gen_writes_game_and_dot(capsys, tmp_path):
    game_path = tmp_path / "game.json"
    dot_path = tmp_path / "game.dot"
    code, _, _ = run_cli(
        capsys,
        "gen", "--family", "chomp", "--m", "2",
        "--out", str(game_path), "--dot", str(dot_path),
    )
    assert code == 0
    data = json.loads(game_path.read_text())
    assert len(data["vertices"]) == 5
    assert "digraph" in dot_path.read_text()


def test_gen_then_solve_file(capsys, tmp_path):
    game_path = tmp_path / "fig1.json"
    run_cli(capsys, "gen", "--fixture", "fig1", "--out", str(game_path))
    code, out, _ = run_cli(capsys, "solve", "--game", str(game_path))
    assert code == 0
    assert json.loads(out)["grundy"] == [1, 0, 2, 1, 0]


def test_run_deterministic(capsys, tmp_path):
    argv = [
        "run", "--family", "subtraction_nim", "--n", "10", "--k", "2",
        "--mu", "64", "--gamma-theorem", "--max-gen", "500", "--seed", "7",
    ]
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert run_cli(capsys, *argv, "--out", str(first))[0] == 0
    assert run_cli(capsys, *argv, "--out", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    payload = json.loads(first.read_text())
    assert payload["result"]["succeeded"] is True
    assert payload["extended"] is True  # n=10 heap game needs the start vertex
    assert payload["config"]["gamma"] == pytest.approx(1 / 400)


def test_run_trace(capsys):
    code, out, _ = run_cli(
        capsys,
        "run", "--fixture", "fig1", "--mu", "8", "--gamma", "0.02",
        "--max-gen", "6", "--seed", "1", "--stop", "cap", "--trace-every", "2",
    )
    assert code == 0
    payload = json.loads(out)
    assert [t["generation"] for t in payload["trace"]] == [2, 4, 6]


def test_switch_vertex(capsys, tmp_path):
    game_path = tmp_path / "fig1.json"
    run_cli(capsys, "gen", "--fixture", "fig1", "--out", str(game_path))
    code, out, _ = run_cli(
        capsys, "switch", "--game", str(game_path), "--vertex", "3", "--mode", "hybrid"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["exact"] == 2
    assert payload["method"] == "exact_search"
    assert payload["witness"]


def test_switch_profile(capsys):
    code, out, _ = run_cli(capsys, "switch", "--fixture", "fig1")
    assert code == 0
    payload = json.loads(out)
    assert payload["s_bar"] == 2
    assert payload["s_hat"] == 1
    assert payload["reports"]["3"]["value"] == 2


def test_analyze_uniform(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--fixture", "fig1")
    assert code == 0
    payload = json.loads(out)
    assert payload["reach"]["0"] == 1.0
    assert payload["win"]["0"] == pytest.approx(2 / 3)
    assert sum(payload["selection"]["0"]) == pytest.approx(1.0)


def test_analyze_model_file(capsys, tmp_path):
    model_path = tmp_path / "model.json"
    model_path.write_text(
        json.dumps({"gamma": 0.0, "dists": {"0": [0, 0, 1], "1": [1], "2": [1, 0], "3": [1]}})
    )
    code, out, _ = run_cli(
        capsys, "analyze", "--fixture", "fig1", "--model", str(model_path)
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["reach"]["4"] == 1.0
    assert payload["win"]["0"] == 1.0


def test_intrans_nim(capsys):
    code, out, _ = run_cli(
        capsys, "intrans", "--family", "subtraction_nim", "--n", "7", "--k", "2"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is True
    assert len(payload["nim_strings"]) == 3


def test_sweep_outputs(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--family", "subtraction_nim",
        "--instances", "n=8,k=2;n=16,k=2", "--mu-grid", "32",
        "--replicates", "1", "--gamma-theorem", "--max-gen", "1000",
        "--seed", "3", "--out-dir", str(tmp_path),
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == 2
    assert (tmp_path / "records.csv").exists()
    assert (tmp_path / "plot.json").exists()


def test_usage_errors(capsys):
    assert run_cli(capsys, "nonsense")[0] == 1
    assert run_cli(capsys, "solve")[1] == ""  # no game source given
    assert run_cli(capsys, "solve")[0] == 1
    assert run_cli(capsys, "run", "--fixture", "fig1", "--mu", "4")[0] == 1  # no gamma
    assert run_cli(capsys, "--help")[0] == 0


def test_runtime_errors(capsys):
    code, _, err = run_cli(capsys, "solve", "--game", "/nonexistent/game.json")
    assert code == 2
    assert "error" in err
