import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from fracdimer.cli import main
from fracdimer.sweep_io import CSV_COLUMNS

REF_FLAGS = ["--nu1", "1", "--nu2", "2", "--v12", "1", "--p", "0.70710678", "--tau", "0.1",
        "--t-max", "10", "--steps", "500", "--preset", "single_excitation"]


def test_evolve_reference_trajectory(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["evolve", *REF_FLAGS, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 501


def test_evolve_stdout(capsys):
    assert main(["evolve", "--steps", "3", "--t-max", "1"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("tau = 0.5\nsteps = 4\n")
    out = tmp_path / "a.csv"
    assert main(["evolve", "--config", str(cfg), "--tau", "0.9", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 5 and rows[1].split(",")[1] == "0.9"


def test_evolve_rejects_varied_config(tmp_path, capsys):
    cfg = tmp_path / "v.cfg"
    cfg.write_text("vary.tau = 0.1:1:3\n")
    assert main(["evolve", "--config", str(cfg)]) == 2
    assert "sweep" in capsys.readouterr().err


def test_sweep_and_plot(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACDIMER_THREADS", "2")
    cfg = tmp_path / "s.cfg"
    cfg.write_text("vary.tau = 0.5:1.0:3\nsteps = 20\nt_max = 2\n")
    csv_path, svg_path = tmp_path / "s.csv", tmp_path / "s.svg"
    assert main(["sweep", str(cfg), "--out", str(csv_path)]) == 0
    assert len(csv_path.read_text().splitlines()) == 61
    assert main(["plot", str(csv_path), "--y", "coherence", "--group-by", "tau", "--out", str(svg_path)]) == 0
    root = ET.parse(svg_path).getroot()
    assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 3


def test_sweep_threads_flag(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("vary.p = 0.2:0.8:3\nsteps = 5\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", str(cfg), "--threads", "1", "--out", str(a)]) == 0
    assert main(["sweep", str(cfg), "--threads", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["sweep", str(cfg), "--threads", "0"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["evolve", "--bogus"],
        ["evolve", "--tau", "1.5"],
        ["evolve", "--steps", "many"],
        ["sweep", "/nonexistent/config.cfg"],
        ["plot", "/nonexistent/data.csv", "--y", "chsh"],
        ["rates"],
        ["rates", "--zeta", "1", "--mu1", "1,0"],
        ["rates", "--zeta", "1e-6"],
        ["rates", "--zeta", "1", "--mu1", "1,1,0"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_config_error_names_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nu1 = 1\nflavour = 3\n")
    assert main(["sweep", str(cfg)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_plot_unknown_field(tmp_path, capsys):
    csv_path = tmp_path / "x.csv"
    assert main(["evolve", "--steps", "2", "--out", str(csv_path)]) == 0
    assert main(["plot", str(csv_path), "--y", "purity"]) == 2
    assert "purity" in capsys.readouterr().err


def test_plot_empty_csv(tmp_path):
    csv_path = tmp_path / "e.csv"
    csv_path.write_text(",".join(CSV_COLUMNS) + "\n")
    assert main(["plot", str(csv_path), "--y", "chsh"]) == 2


def test_rates_output(capsys):
    assert main(["rates", "--zeta", "3.141592653589793", "--freq", "1", "--dipole-sq", "9.42477796076938"]) == 0
    out = dict(line.split(" = ") for line in capsys.readouterr().out.splitlines())
    assert float(out["gamma12"]) == pytest.approx(-3 / (2 * 3.141592653589793**2), rel=1e-10)
    assert float(out["emission_rate"]) == pytest.approx(1.0, rel=1e-10)


def test_rates_small_zeta(capsys):
    assert main(["rates", "--zeta", "1e-6", "--small-zeta"]) == 0
    assert "gamma12 = 1" in capsys.readouterr().out


def test_validate_quick_suite(capsys):
    assert main(["validate", "--suite", "dimer", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "0 failed" in out


def test_validate_failure_exit_one(monkeypatch, capsys):
    import fracdimer.validation as val

    monkeypatch.setitem(val.SUITES, "dimer", lambda rng, quick: [val.CheckResult("dimer", "forced", False, 1.0, 0.0)])
    assert main(["validate", "--suite", "dimer"]) == 1


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "0.1.0" in capsys.readouterr().out


def test_console_module_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fracdimer.cli", "evolve", "--steps", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("t,tau,")
