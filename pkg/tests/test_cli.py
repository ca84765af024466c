import csv
import json
import subprocess
import sys

import pytest

from statecomp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve2_human(capsys):
    code, out, _ = run(capsys, "solve2", "--q1", "0.5", "--costheta", "0.5")
    assert code == 0
    assert "P_opt = 0.5 " in out and "P_sep = 0.25 " in out and "gain  = 0.25" in out
    assert "F_a =" in out and "F_?" in out


def test_solve2_json(capsys):
    code, out, _ = run(capsys, "solve2", "--q1", "0.9", "--costheta", "0.5", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["p_opt"] == pytest.approx(0.5595, abs=1e-12)
    assert doc["branch"] == "else"
    assert doc["simulation"] is None
    assert set(doc) == {"command", "q1", "cos_theta", "p_opt", "branch", "p_sep",
                        "doublestar", "gain", "alpha", "beta", "povm", "simulation"}
    assert len(doc["povm"]["a"]) == 4


def test_solve2_csv(capsys):
    code, out, _ = run(capsys, "solve2", "--q1", "0.5", "--costheta", "0.5", "--csv")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["gain"]) == pytest.approx(0.25)


@pytest.mark.parametrize("argv", [
    ["solve2", "--q1", "0.5", "--costheta", "1.0"],
    ["solve2", "--q1", "1.2", "--costheta", "0.5"],
    ["solve2", "--q1", "abc", "--costheta", "0.5"],
    ["solve3", "--costheta", "0"],
    ["gain-grid", "--steps", "1", "--out", "x.csv"],
])
def test_invalid_input_exit_2(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_solve2_simulation(capsys):
    code, out, _ = run(capsys, "solve2", "--q1", "0.5", "--costheta", "0.5", "--json",
                       "--simulate", "100000", "--seed", "7", "--shards", "3")
    doc = json.loads(out)
    assert code == 0
    sim = doc["simulation"]
    assert sim["error_count"] == 0 and sim["agrees"]
    code2, out2, _ = run(capsys, "solve2", "--q1", "0.5", "--costheta", "0.5", "--json",
                         "--simulate", "100000", "--seed", "7")
    assert json.loads(out2)["simulation"]["empirical_p"] == sim["empirical_p"]


def test_gain_grid(tmp_path, capsys):
    path = tmp_path / "grid.csv"
    code, out, _ = run(capsys, "gain-grid", "--steps", "200", "--out", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 200 * 200
    assert list(rows[0]) == ["q1", "cos_theta", "p_opt", "p_sep", "gain", "star", "doublestar"]
    gains = [float(r["gain"]) for r in rows]
    assert min(gains) >= 0
    best = rows[max(range(len(rows)), key=gains.__getitem__)]
    assert float(best["gain"]) == pytest.approx(0.25, abs=1e-3)
    assert abs(float(best["q1"]) - 0.5) <= 0.005 and abs(float(best["cos_theta"]) - 0.5) <= 0.005
    first = path.read_bytes()
    run(capsys, "gain-grid", "--steps", "200", "--out", str(path))
    assert path.read_bytes() == first


def test_gain_grid_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "gain-grid", "--steps", "3", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 2 and "cannot write" in err


def test_solve3(capsys):
    code, out, _ = run(capsys, "solve3", "--costheta", "0.2", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["p_opt"] == pytest.approx(0.76115504, abs=1e-8)
    assert (doc["dim_H_prime"], doc["dim_kcap_a"], doc["dim_kcap_b"]) == (6, 3, 0)
    assert doc["boundary"] == pytest.approx(0.38408, abs=5e-5)
    code, out, _ = run(capsys, "solve3", "--costheta", "0.5", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["region_ok"] is False and doc["p_opt"] is None


def write(tmp_path, doc):
    path = tmp_path / "ens.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_feasible_pure_qubits(tmp_path, capsys):
    f = write(tmp_path, {"dim": 2, "priors": [0.5, 0.5], "pure": True,
                         "states": [[1, 0], [0.6, 0.8]]})
    code, out, _ = run(capsys, "feasible", "--input", f, "--witness", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["feasible"]
    pattern = doc["witness"]["pattern"]
    assert pattern[0][0] > 1e-9 and abs(pattern[0][1]) <= 1e-9
    assert doc["witness"]["success"] > 0


def test_feasible_rank_two_qubit(tmp_path, capsys):
    f = write(tmp_path, {"dim": 2, "priors": [0.5, 0.5],
                         "states": [[[0.7, 0], [0, 0], [0, 0], [0.3, 0]], [1, 0, 0, 0]]})
    code, out, _ = run(capsys, "feasible", "--input", f)
    assert code == 1 and "possible: no" in out


def test_feasible_dependent_states(tmp_path, capsys):
    f = write(tmp_path, {"dim": 2, "priors": [0.3, 0.3, 0.4], "pure": True,
                         "states": [[1, 0], [0, 1], [0.6, 0.8]]})
    code, _, _ = run(capsys, "feasible", "--input", f, "--json")
    assert code == 1


def test_feasible_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2,\n "priors": [0.5, 0.5],\n "states": [1, 2')
    code, _, err = run(capsys, "feasible", "--input", str(path))
    assert code == 2 and "line 3" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "statecomp", "solve2", "--q1", "0.5",
                          "--costheta", "0.5", "--json"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["gain"] == pytest.approx(0.25)


def test_simulation_mismatch_exit_3(capsys, monkeypatch):
    from statecomp import montecarlo

    def broken(cfg):
        return montecarlo.SimReport({}, cfg.trials, 0.4, 3, 0.001)

    monkeypatch.setattr(montecarlo, "simulate", broken)
    code, out, _ = run(capsys, "solve2", "--q1", "0.5", "--costheta", "0.5",
                       "--simulate", "1000")
    assert code == 3 and "MISMATCH" in out
