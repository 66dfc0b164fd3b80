import json
import subprocess
import sys

import numpy as np
import pytest

from catsim.cli import main


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


def test_herald_report_and_manifest(workdir):
    assert run("herald", "--xi", 0.43, "--transmission", 0.99, "--alpha", 1.2, "--out", "r.json") == 0
    report = json.loads((workdir / "r.json").read_text())
    assert report["fidelity"] == pytest.approx(0.99, abs=0.005)
    for key in ("herald_probability", "alpha_star", "state"):
        assert key in report
    assert report["state"]["format"] == "catsim-state-v1"
    manifest = json.loads((workdir / "r.json.manifest.json").read_text())
    assert manifest["command"] == "herald"
    assert manifest["parameters"]["xi"] == 0.43
    assert manifest["outputs"] == ["r.json"]
    assert "duration_s" in manifest and "version" in manifest


def test_lossy_herald_has_no_pure_state(workdir):
    assert run("herald", "--xi", 0.43, "--transmission", 0.9, "--eta-det", 0.5) == 0
    assert json.loads((workdir / "herald.json").read_text())["state"] is None


@pytest.mark.parametrize("args, code", [
    (["herald", "--xi", 0, "--transmission", 0.9], 3),
    (["herald", "--xi", 0.4, "--transmission", 1.2], 2),
    (["herald", "--xi", 0.4, "--transmission", 1.0], 4),
    (["herald", "--xi", 1.5, "--transmission", 0.9, "--cutoff", 20], 3),
    (["fig2", "--xi-min", 1.0, "--xi-max", 0.5], 2),
    (["fig3", "--alpha-steps", 1], 2),
    (["noon", "--eta", "1.5"], 2),
    (["wigner", "--state", "missing.json"], 2),
    (["logical", "--xi", 0.4, "--transmission", 1.0, "--herald-a", 2], 4),
])
def test_exit_codes(args, code, capsys):
    assert run(*args) == code
    assert capsys.readouterr().err.startswith("catsim ")


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run("herald", "--transmission", 0.9)
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("logical", "--xi", 0.4, "--transmission", 0.9, "--herald-a", 3)
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("bogus")
    assert exc.value.code == 2


def test_fig2_fig3_headers_and_determinism(workdir):
    for _ in range(2):
        assert run("fig2", "--xi-steps", 5, "--xi-max", 0.8, "--out", "a.csv") == 0
        first = (workdir / "a.csv").read_bytes()
        assert run("fig2", "--xi-steps", 5, "--xi-max", 0.8, "--out", "b.csv") == 0
        assert (workdir / "b.csv").read_bytes() == first
    lines = first.decode().splitlines()
    assert lines[0] == "alpha,xi,fidelity" and len(lines) == 16
    assert run("fig3", "--xi-t-steps", 4, "--alpha-steps", 3) == 0
    assert (workdir / "fig3.csv").read_text().splitlines()[0] == "xi_T,alpha,fidelity"


def test_ecs_and_logical(workdir):
    flags = ["--xi", 0.4264, "--transmission", 0.95]
    assert run("ecs", *flags) == 0
    report = json.loads((workdir / "ecs.json").read_text())
    assert report["state"]["modes"] == 2
    assert report["fidelity_vs_qudit_ecs"] > 0.9
    for n, support in ((2, [0, 4]), (4, [2, 6])):
        assert run("logical", *flags, "--herald-a", n, "--out", f"l{n}.json") == 0
        data = json.loads((workdir / f"l{n}.json").read_text())
        assert data["support"] == support
        amps = np.array(data["state"]["amplitudes"])
        off = [k for k in range(len(amps)) if k not in support]
        assert np.max(np.abs(amps[off])) < 1e-6


def test_noon(workdir):
    assert run("noon", "--eta", "1,0.8") == 0
    lines = (workdir / "noon.csv").read_text().splitlines()
    assert lines[0] == "state,theta,eta,trace_distance"
    assert {line.split(",")[0] for line in lines[1:]} == {"noon", "ecs"}


def test_state_wigner_quadrature(workdir, capsys):
    assert run("state", "--kind", "vacuum", "--cutoff", 10, "--out", "v.json") == 0
    assert run("quadrature", "--state", "v.json", "--phi", 0) == 0
    assert "integral=1.000000" in capsys.readouterr().out
    assert run("state", "--kind", "cat-odd", "--im", 1.2, "--out", "c.json") == 0
    assert run("wigner", "--state", "c.json", "--points", 41) == 0
    rows = (workdir / "wigner.csv").read_text().splitlines()
    assert rows[0] == "x,p,w" and len(rows) == 41 * 41 + 1
    summary = capsys.readouterr().out
    assert '"min": -0.3183' in summary
    two_mode = {"format": "catsim-state-v1", "modes": 2, "cutoff_a": 1, "cutoff_b": 1,
                "amplitudes": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}
    (workdir / "two.json").write_text(json.dumps(two_mode))
    assert run("wigner", "--state", "two.json") == 2


def test_selftest_command(workdir, capsys):
    assert run("selftest") == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 8 and "FAIL" not in out
    assert json.loads((workdir / "selftest.json").read_text())["passed"] is True


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "catsim", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("catsim ")
