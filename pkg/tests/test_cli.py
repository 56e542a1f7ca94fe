import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from ndopacity import cli
from ndopacity.conversion import FiniteSupervisor
from ndopacity.infostate import decision, micro
from ndopacity.oracle import deterministic_mapping
from ndopacity.plant import dump_des

FIG1 = str(Path(__file__).parents[1] / "fixtures" / "paper-fig1.des")
C1, C2 = decision("c1"), decision("c2")


def run(*argv, stdin=""):
    out = io.StringIO()
    code = cli.main(list(argv), stdout=out, stdin=io.StringIO(stdin))
    return code, out.getvalue()


@pytest.fixture
def theta_file(tmp_path):
    path = tmp_path / "t.json"
    assert run("synth", FIG1, "-o", str(path))[0] == 0
    return str(path)


def test_verify(capsys):
    assert run("verify", FIG1) == (1, "not opaque, witness: o3\n")
    assert run("verify", FIG1, "--depth", "0")[0] == 64
    assert run("verify", "/nonexistent.des")[0] == 64
    assert run()[0] == 64


def test_verify_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.des"
    bad.write_text("plant x\nevents: a\ntrans:\n0 a\n")
    assert run("verify", str(bad))[0] == 65
    assert "parse error" in capsys.readouterr().err


def test_verify_opaque(tmp_path):
    p = tmp_path / "ok.des"
    p.write_text("plant ok\nevents: o\nobservable: o\ncontrollable:\ninitial: 0\nsecret:\ntrans:\n0 o 1\n")
    assert run("verify", str(p)) == (0, "opaque\n")


def test_synth_outputs(theta_file, tmp_path, reveal2, capsys):
    text = Path(theta_file).read_text()
    assert json.loads(text)["plant"] == "paper-fig1"
    code, stdout = run("synth", FIG1)
    assert code == 0 and stdout == text
    assert run("synth", FIG1, "--strategy", "first")[0] == 0
    assert run("synth", FIG1, "--strategy", "greedy")[0] == 64
    assert run("synth", FIG1, "--cap", "1")[0] == 3
    r2 = tmp_path / "reveal2.des"
    r2.write_text(dump_des(reveal2))
    capsys.readouterr()
    assert run("synth", str(r2)) == (2, "")
    assert "no solution" in capsys.readouterr().err


def test_oracle(theta_file, fig1, tmp_path, capsys):
    code, stdout = run("oracle", FIG1, theta_file, "--depth", "4")
    assert code == 0 and stdout.startswith("opaque up to depth 4")
    leaky = deterministic_mapping(fig1, {micro("0"): C1, micro("4"): decision(), micro("5"): decision()})
    path = tmp_path / "leaky.json"
    path.write_text(leaky.to_json())
    assert run("oracle", FIG1, str(path), "--depth", "3") == (1, "not opaque, witness: o1\n")
    partial = tmp_path / "partial.json"
    partial.write_text(deterministic_mapping(fig1, {micro("0"): C1}).to_json())
    assert run("oracle", FIG1, str(partial))[0] == 65


def test_oracle_reports_mismatch(theta_file, monkeypatch, capsys):
    real = cli.intruder_estimates

    def skewed(p, theta, s):
        r = real(p, theta, s)
        return r._replace(flat=r.flat | {"11"}) if s else r

    monkeypatch.setattr(cli, "intruder_estimates", skewed)
    assert run("oracle", FIG1, theta_file, "--depth", "2")[0] == 4
    assert "agreement mismatch at s=o1" in capsys.readouterr().err


def test_convert(tmp_path, fig1, theta_file, capsys):
    from ndopacity.synthesis import IsMapping
    theta = IsMapping.from_json(Path(theta_file).read_text())
    sn = tmp_path / "sn.json"
    sn.write_text(FiniteSupervisor.from_mapping(fig1, theta).to_json())
    code, stdout = run("convert", FIG1, str(sn))
    assert code == 0 and stdout == Path(theta_file).read_text()
    broken = tmp_path / "broken.json"
    broken.write_text(FiniteSupervisor(("q",), "q", {"q": {C1}}).to_json())
    assert run("convert", FIG1, str(broken))[0] == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{")
    assert run("convert", FIG1, str(garbage))[0] == 65


def test_export(tmp_path):
    code, total = run("export-gbts", FIG1, "--stage", "total")
    assert code == 0 and total.count("shape=box") == 12
    out = tmp_path / "p.dot"
    assert run("export-gbts", FIG1, "--stage", "pruned", "-o", str(out)) == (0, "")
    assert out.read_text().count("shape=ellipse") == 8


def test_simulate_script(theta_file, capsys):
    code, stdout = run("simulate", FIG1, theta_file, "--seed", "3", "--script", "o1")
    lines = stdout.splitlines()
    assert code == 0
    assert lines[0] == "step 0 obs=- issued={{c1},{c2}} picked={c1} m={0} macro={{0}} flat={0,1,3}"
    assert lines[1].startswith("step 1 obs=o1 issued={{}} picked={} m={4} macro={{4},{5}}")
    code, _ = run("simulate", FIG1, theta_file, "--seed", "3", "--script", "o1 o1")
    assert code == 1
    assert "o1 is not enabled" in capsys.readouterr().err


def test_simulate_interactive(theta_file, capsys):
    code, stdout = run("simulate", FIG1, theta_file, "--seed", "5", stdin="\nbogus\no2\nquit\n")
    assert code == 0
    assert "hidden=0 enabled: o1 o2" in stdout
    assert "step 1 obs=o2" in stdout
    assert "bogus is not enabled" in capsys.readouterr().err


def test_outputs_are_deterministic(theta_file, tmp_path):
    sn = tmp_path / "sn.json"
    sn.write_text(FiniteSupervisor(("a", "b"), "a", {"a": {C1, C2}, "b": {decision()}},
                                   {("a", C1, "o1"): "b", ("a", C1, "o2"): "b", ("a", C2, "o1"): "b",
                                    ("a", C2, "o2"): "b", ("b", decision(), "o1"): "a"}).to_json())
    commands = [
        ("verify", FIG1),
        ("synth", FIG1),
        ("synth", FIG1, "--strategy", "first"),
        ("export-gbts", FIG1, "--stage", "total"),
        ("export-gbts", FIG1, "--stage", "pruned"),
        ("oracle", FIG1, theta_file, "--depth", "3"),
        ("convert", FIG1, str(sn)),
        ("simulate", FIG1, theta_file, "--seed", "7", "--script", "o2"),
    ]
    for argv in commands:
        assert run(*argv) == run(*argv)


def test_module_entry_point_streams(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ndopacity", "synth", FIG1, "--cap", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 3 and proc.stdout == "" and "cap exceeded" in proc.stderr
