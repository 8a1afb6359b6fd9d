import csv
import io
import json
import subprocess
import sys

import pytest

from holologic.cli import build_parser, main
from holologic.holostate import monomial, variable

STATE = json.dumps(monomial((1, 1)).to_dict())
PROGRAM = {
    "space": {"dim": 2, "t": 1.0},
    "subsystems": [{"name": "q1", "state": variable(0, 2).to_dict()}],
    "gates": ["X", "Y", "Z", "H", "S"],
    "iterations": 2,
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestGates:
    def test_table_csv(self, capsys):
        code, out, _ = run(capsys, "gates", "table", "--state", STATE, "--gates", "X,Z")
        assert code == 0
        assert out.splitlines() == ["gate,image,expectation", "X,z1^2+z2^2,0", "Z,0,0"]

    def test_table_json(self, capsys):
        code, out, _ = run(capsys, "gates", "table", "--state", STATE, "--gates", "Y,Rx:0.5", "--format", "json")
        data = json.loads(out)
        assert code == 0 and [r["gate"] for r in data] == ["Y", "Rx:0.5"]
        assert data[0]["image_text"] == "-1j*z1^2+1j*z2^2"

    def test_state_file(self, capsys, tmp_path):
        p = tmp_path / "state.json"
        p.write_text(STATE)
        out_file = tmp_path / "t.csv"
        code, out, _ = run(capsys, "gates", "table", "--state", str(p), "--gates", "I", "--out", str(out_file))
        assert code == 0 and out == ""
        assert rows(out_file.read_text())[0] == {"gate": "I", "image": "2*z1*z2", "expectation": "2"}

    def test_gate_dimension_error(self, capsys):
        code, _, err = run(capsys, "gates", "table", "--state", STATE, "--gates", "CNOT")
        assert code == 1 and "CNOT" in err and len(err.strip().splitlines()) == 1

    def test_unknown_gate(self, capsys):
        code, _, err = run(capsys, "gates", "table", "--state", STATE, "--gates", "Q")
        assert code == 1 and "unknown gate" in err


def test_bargmann_check(capsys):
    code, out, _ = run(capsys, "bargmann", "check", "--max-degree", "4")
    table = rows(out)
    assert code == 0
    assert list(table[0]) == ["test", "exact_re", "exact_im", "quad_re", "quad_im", "rel_err"]
    assert max(float(r["rel_err"]) for r in table) < 1e-7


def test_bargmann_check_fails_on_coarse_grid(capsys):
    code, _, err = run(capsys, "bargmann", "check", "--max-degree", "6", "--radial", "4", "--angular", "4")
    assert code == 1 and "rel_err" in err


def test_info(capsys, tmp_path):
    ens = {
        "space": {"dim": 2, "t": 1},
        "components": [variable(0, 2).to_dict(), variable(1, 2).to_dict()],
    }
    p = tmp_path / "ens.json"
    p.write_text(json.dumps(ens))
    code, out, _ = run(capsys, "info", "--ensemble", str(p), "--gate", "Rz:0")
    data = json.loads(out)
    assert code == 0 and set(data) == {"S_in", "S_out", "delta_S"}
    assert data["delta_S"] == pytest.approx(0.0, abs=1e-12)


def test_pendulum(capsys):
    code, out, _ = run(capsys, "pendulum", "--omega0", "1", "--coupling", "1.5", "--table")
    table = rows(out)
    assert code == 0
    assert [r["gate"] for r in table] == ["X", "Y", "Z", "I", "H"]
    assert table[0]["image"] == "z1^2+z2^2"
    code, out, _ = run(capsys, "pendulum", "--omega0", "1", "--coupling", "1.5", "--format", "json")
    assert json.loads(out) == [{"omega0": 1.0, "omega": 2.0}]


def test_fhn(capsys, tmp_path):
    cfg = tmp_path / "rd.cfg"
    cfg.write_text("n = 16\nsteps = 100\nalpha = 0.3\ninit = fixed\n")
    out_file = tmp_path / "fields.csv"
    code, _, _ = run(capsys, "fhn", "--config", str(cfg), "--out", str(out_file))
    table = rows(out_file.read_text())
    assert code == 0 and len(table) == 16 and list(table[0]) == ["cell_index", "a", "b"]
    assert float(table[3]["a"]) == pytest.approx(0.3 ** (1 / 3), abs=1e-10)


def test_fhn_errors(capsys, tmp_path):
    code, _, err = run(capsys, "fhn", "--config", str(tmp_path / "nope.cfg"))
    assert code == 1 and "nope.cfg" in err
    bad = tmp_path / "unstable.cfg"
    bad.write_text("Da = 1\ndt = 1\n")
    code, _, err = run(capsys, "fhn", "--config", str(bad))
    assert code == 1 and "stability" in err


def test_memristor(capsys, tmp_path):
    out_file = tmp_path / "traj.csv"
    code, _, _ = run(capsys, "memristor", "--steps", "10", "--out", str(out_file))
    table = rows(out_file.read_text())
    assert code == 0 and len(table) == 11
    assert list(table[0]) == ["step", "t", "u", "x", "y", "S", "Q", "R"]


def test_neuron_train(capsys, tmp_path):
    data = tmp_path / "and.csv"
    data.write_text("x1,x2,target\n1,1,1\n1,-1,0\n-1,1,0\n-1,-1,0\n")
    code, out, _ = run(capsys, "neuron", "train", "--data", str(data))
    res = json.loads(out)
    assert code == 0 and res["errors"][-1] == 0 and len(res["weights"]) == 2


class TestUpl:
    def test_run(self, capsys, tmp_path):
        prog = tmp_path / "prog.json"
        prog.write_text(json.dumps(PROGRAM))
        cat = tmp_path / "catalog.json"
        code, _, _ = run(capsys, "upl", "run", "--program", str(prog), "--out", str(cat))
        assert code == 0
        first = cat.read_text()
        assert [p["gate"] for p in json.loads(first)["patterns"]] == ["H", "S", "X", "Y", "Z"]
        run(capsys, "upl", "run", "--program", str(prog), "--out", str(cat))
        assert cat.read_text() == first

    def test_missing_program(self, capsys):
        code, _, err = run(capsys, "upl", "run", "--program", "missing.json")
        assert code == 1 and "missing.json" in err

    def test_layers(self, capsys, tmp_path):
        sched = tmp_path / "sched.json"
        sched.write_text(json.dumps({"layers": [{"time_scale": t, "program": PROGRAM} for t in (1, 10, 100)]}))
        trace = tmp_path / "trace.json"
        code, _, _ = run(capsys, "upl", "layers", "--schedule", str(sched), "--trace", str(trace))
        entries = json.loads(trace.read_text())["layers"]
        assert code == 0 and len(entries) == 3
        assert all(a["end_tick"] < b["start_tick"] for a, b in zip(entries, entries[1:]))

    def test_reversed_layers(self, capsys, tmp_path):
        sched = tmp_path / "sched.json"
        sched.write_text(json.dumps({"layers": [{"time_scale": t, "program": PROGRAM} for t in (5, 1)]}))
        code, _, err = run(capsys, "upl", "layers", "--schedule", str(sched))
        assert code == 1 and "increase" in err

    def test_bad_json(self, capsys, tmp_path):
        prog = tmp_path / "prog.json"
        prog.write_text("{not json")
        code, _, err = run(capsys, "upl", "run", "--program", str(prog))
        assert code == 1 and "invalid JSON" in err


class TestUsage:
    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bogus"])
        assert exc.value.code == 2

    def test_bad_format(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["pendulum", "--format", "xml"])
        assert exc.value.code == 2

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["gates"],
            ["gates", "table"],
            ["bargmann", "check"],
            ["info"],
            ["pendulum"],
            ["fhn"],
            ["memristor"],
            ["neuron", "train"],
            ["upl", "run"],
            ["upl", "layers"],
        ],
    )
    def test_help(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv + ["--help"])
        assert exc.value.code == 0
        assert "--" in capsys.readouterr().out

    def test_every_data_command_has_format(self):
        parser = build_parser()
        sub = next(a for a in parser._actions if a.dest == "command")
        leaves = []
        for name, p in sub.choices.items():
            nested = [a for a in p._actions if a.dest == "action"]
            leaves += list(nested[0].choices.values()) if nested else [p]
        for p in leaves:
            assert any("--format" in a.option_strings for a in p._actions), p.prog

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "holologic", "--help"], capture_output=True, text=True)
        assert proc.returncode == 0 and "upl" in proc.stdout
