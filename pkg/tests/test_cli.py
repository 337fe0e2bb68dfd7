import json
import subprocess
import sys

import pytest

from galois_energy import fileio
from galois_energy.cli import main


ESPRESSO = str(fileio.bundled_game_path())


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_text_output(capsys):
    code, out, _ = run(capsys, "solve", ESPRESSO)
    assert code == 0
    lines = out.splitlines()
    office = next(line for line in lines if line.startswith("Office:"))
    assert "0,0,0,10" in office
    assert "0,0,1,9" in office
    assert "1,20,0,0" in office
    ids = [line.split(":", 1)[0] for line in lines]
    assert ids == sorted(ids)


def test_solve_csv_output(capsys):
    code, out, _ = run(capsys, "solve", ESPRESSO, "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "position,component_0,component_1,component_2,component_3"
    assert "Office,0,0,0,10" in lines
    assert "Office,0,0,1,9" in lines
    assert "Energized,0,0,0,0" in lines


def test_solve_stats(capsys):
    code, out, _ = run(capsys, "solve", ESPRESSO, "--stats")
    assert code == 0
    assert any(line.startswith("iterations: ") for line in out.splitlines())
    assert any(line.startswith("max_front_size: ") for line in out.splitlines())
    code, out, _ = run(capsys, "solve", ESPRESSO, "--format", "csv", "--stats")
    assert code == 0
    assert any(line.startswith("# iterations=") for line in out.splitlines())
    assert any(line.startswith("# max_front_size=") for line in out.splitlines())


def test_solve_iteration_cap_exit_code(capsys, monkeypatch):
    from galois_energy import cli
    from galois_energy.errors import IterationCapExceeded

    def blow_up(game, **kwargs):
        raise IterationCapExceeded(7, {}, {})

    monkeypatch.setattr(cli.solver, "compute_winning_budgets", blow_up)
    code, _, err = run(capsys, "solve", ESPRESSO)
    assert code == 3
    assert "7" in err


def test_solve_deterministic(capsys):
    _, first, _ = run(capsys, "solve", ESPRESSO, "--format", "csv", "--stats")
    _, second, _ = run(capsys, "solve", ESPRESSO, "--format", "csv", "--stats")
    assert first == second


def test_solve_empty_game(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(
        json.dumps(
            {"schema": "galois-energy/1", "dimension": 1, "positions": [], "edges": []}
        )
    )
    code, out, _ = run(capsys, "solve", str(path))
    assert code == 0
    assert out == ""


def test_solve_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "schema": "galois-energy/1",
                "dimension": 1,
                "positions": [{"id": "a", "owner": "attacker"}],
                "edges": [{"from": "a", "to": "a", "update": [[{"op": "sub", "z": 2}]]}],
            }
        )
    )
    code, _, err = run(capsys, "solve", str(path))
    assert code == 2
    assert "error" in err


def test_query_win_and_lose(capsys):
    code, out, _ = run(capsys, "query", ESPRESSO, "--position", "Office", "--energy", "10,1,0,0")
    assert (code, out.strip()) == (0, "WIN")
    code, out, _ = run(capsys, "query", ESPRESSO, "--position", "Office", "--energy", "0,0,0,0")
    assert (code, out.strip()) == (1, "LOSE")
    code, out, _ = run(
        capsys, "query", ESPRESSO, "--position", "Office", "--energy", "inf,inf,inf,inf"
    )
    assert (code, out.strip()) == (0, "WIN")


def test_query_bad_energy(capsys):
    code, _, err = run(capsys, "query", ESPRESSO, "--position", "Office", "--energy", "1,2")
    assert code == 2
    code, _, err = run(capsys, "query", ESPRESSO, "--position", "Nowhere", "--energy", "0,0,0,0")
    assert code == 2


def test_transform_shortest_path_and_solve(tmp_path, capsys):
    src = tmp_path / "graph.json"
    src.write_text(
        json.dumps(
            {
                "schema": "weighted-graph/1",
                "nodes": ["s", "x", "t"],
                "edges": [["s", 2, "x"], ["x", -1, "t"]],
                "source": "s",
                "target": "t",
            }
        )
    )
    out_file = tmp_path / "game.json"
    code, _, _ = run(capsys, "transform", "shortest-path", str(src), "-o", str(out_file))
    assert code == 0
    loaded = fileio.load_game(out_file)
    assert loaded.annotations["query"]["position"] == "s"
    code, out, _ = run(capsys, "query", str(out_file), "--position", "s", "--energy", "2")
    assert (code, out.strip()) == (0, "WIN")
    code, out, _ = run(capsys, "query", str(out_file), "--position", "s", "--energy", "1")
    assert (code, out.strip()) == (1, "LOSE")


def test_transform_vass_round_trip(tmp_path, capsys):
    src = tmp_path / "vass.json"
    src.write_text(
        json.dumps(
            {
                "schema": "vass/1",
                "states": ["s", "t"],
                "transitions": [["s", [-1, 2], "s"], ["s", [0, 0], "t"]],
                "initial": {"state": "s", "energy": [2, 0]},
                "target": {"state": "t", "energy": [0, 4]},
            }
        )
    )
    out_file = tmp_path / "vass-game.json"
    code, _, _ = run(capsys, "transform", "vass-coverability", str(src), "-o", str(out_file))
    assert code == 0
    loaded = fileio.load_game(out_file)
    query = loaded.annotations["query"]
    code, out, _ = run(
        capsys, "query", str(out_file), "--position", query["position"], "--energy", query["energy"]
    )
    assert (code, out.strip()) == (0, "WIN")
    reloaded = fileio.load_game(out_file)
    assert reloaded.game == loaded.game


def test_transform_unknown_kind_exits_2(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["transform", "fancy-kind", "in.json", "-o", "out.json"])
    assert err.value.code == 2


def test_transform_parse_failure(tmp_path, capsys):
    src = tmp_path / "broken.json"
    src.write_text("{}")
    code, _, err = run(capsys, "transform", "shortest-path", str(src), "-o", str(tmp_path / "o"))
    assert code == 2


def test_check_espresso_agrees(capsys):
    code, out, _ = run(capsys, "check", ESPRESSO, "--samples", "8", "--seed", "1", "--bound", "6")
    assert code == 0
    assert "0 mismatches" in out
    assert "MISMATCH" not in out


def test_check_corrupt_front_detected(capsys):
    code, out, _ = run(
        capsys,
        "check",
        ESPRESSO,
        "--samples",
        "8",
        "--seed",
        "1",
        "--bound",
        "6",
        "--corrupt",
    )
    assert code == 1
    assert "MISMATCH" in out


def test_check_seed_determinism(capsys):
    args = ("check", ESPRESSO, "--samples", "5", "--seed", "9", "--bound", "5")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_check_guard_rejects_large_dimension(tmp_path, capsys):
    doc = {
        "schema": "galois-energy/1",
        "dimension": 5,
        "positions": [{"id": "d", "owner": "defender"}],
        "edges": [],
    }
    path = tmp_path / "wide.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", str(path))
    assert code == 2
    assert "dimension" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "galois_energy", "query", ESPRESSO, "--position", "Office",
         "--energy", "0,0,0,10"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "WIN"
