import json
import subprocess
import sys

import pytest

from delaystab import cli
from delaystab.errors import NonPositiveState

MG_ARGS = ["--model", "mackey-glass", "--beta", "0.8", "--gamma", "0.3", "--n", "10"]
LS_ARGS = ["--model", "lasota", "--beta", "0.9", "--gamma", "0.1", "--n", "0.1"]


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv(text):
    lines = text.splitlines()
    config = json.loads(lines[0][len("# config:"):])
    header = lines[1].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[2:]]
    return config, rows


def test_thresholds_example(capsys):
    code, out, _ = run(["thresholds", *MG_ARGS], capsys)
    assert code == 0
    config, rows = _csv(out)
    assert out.splitlines()[1] == "tau,tau_noc,tau_suff,tau_c,period"
    assert config["beta"] == 0.8 and config["model"] == "mackey-glass"
    assert float(rows[0]["tau_c"]) == pytest.approx(1.14, abs=0.005)
    assert float(rows[0]["period"]) == pytest.approx(4.06, abs=0.01)


def test_thresholds_sentinel_when_no_crossing(capsys):
    code, out, _ = run(["thresholds", "--model", "lasota", "--beta", "0.4", "--gamma", "0.3", "--n", "0.1"], capsys)
    assert code == 0
    _, rows = _csv(out)
    assert rows[0]["tau_c"] == "unbounded" and rows[0]["period"] == "unbounded"
    assert float(rows[0]["tau_noc"]) == pytest.approx(1.4259, abs=1e-4)


def test_domain_error_exit_code(capsys):
    code, out, err = run(["thresholds", "--model", "mackey-glass", "--beta", "0.3", "--gamma", "0.5",
                          "--n", "10"], capsys)
    assert code == 2
    assert out == ""
    assert "no positive equilibrium" in err


def test_missing_option_is_domain_error(capsys):
    code, _, err = run(["hopf", *MG_ARGS], capsys)
    assert code == 2 and "--tau" in err


def test_no_hopf_exit_code(capsys):
    code, _, err = run(["hopf", "--model", "lasota", "--beta", "0.4", "--gamma", "0.3", "--n", "0.1",
                        "--tau", "1.0"], capsys)
    assert code == 4
    assert "Hopf" in err


def test_no_convergence_exit_code(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise NonPositiveState("state left x > 0")

    monkeypatch.setattr(cli, "integrate", fail)
    code, _, err = run(["simulate", *MG_ARGS, "--tau", "1.0"], capsys)
    assert code == 3 and "x > 0" in err


def test_step_too_large_exit_code(capsys):
    code, _, _ = run(["simulate", *MG_ARGS, "--tau", "1.0", "--h", "0.5"], capsys)
    assert code == 2


def test_usage_error_is_nonzero():
    with pytest.raises(SystemExit) as exc:
        cli.main(["chart", "--sweep", "eta"])
    assert exc.value.code != 0


def test_hopf_json(capsys):
    code, out, _ = run(["hopf", *LS_ARGS, "--tau", "17.69", "--eta", "1.05"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["eta"] == 1.05
    assert doc["bifurcation_type"] == "supercritical" and doc["orbit_stable"] is True
    assert set(doc["c1_0"]) == {"re", "im"}
    assert doc["beta2"] == pytest.approx(2 * doc["c1_0"]["re"], rel=1e-15)
    assert doc["at_eta_c"]["eta"] == pytest.approx(doc["eta_c"], rel=1e-15)


ROUND_TRIP = [
    ["equilibrium", "--model", "lasota", "--beta", "2.0", "--gamma", "0.3", "--n", "3.0"],
    ["thresholds", *LS_ARGS],
    ["chart", "--preset", "fig2d"],
    ["chart", "--sweep", "b", "--a", "0.3", "--range", "0.1", "1.0", "--resolution", "10"],
    ["chart", "--preset", "fig1", "--format", "json"],
    ["roc", "--preset", "fig4b"],
    ["robust", "--preset", "fig5a"],
    ["robust", "--model", "mackey-glass", "--beta-interval", "1", "1", "--gamma-interval", "0.9", "1",
     "--n-interval", "1", "1.05"],
    ["hopf", "--preset", "hopf-mg"],
    ["hopf", "--preset", "hopf-lasota", "--format", "csv"],
    ["simulate", *MG_ARGS, "--tau", "1.3", "--t-end", "30", "--every", "10"],
    ["phase", "--preset", "fig7b", "--every", "50"],
    ["bifurcate", *MG_ARGS, "--etas", "0.95", "1.05", "--h", "0.02"],
    ["verify", "--samples", "5", "--format", "json"],
]


@pytest.mark.parametrize("argv", ROUND_TRIP, ids=lambda a: "-".join(a[:3]))
def test_round_trip_through_from_file(argv, tmp_path, capsys):
    first = tmp_path / "first.out"
    second = tmp_path / "second.out"
    assert cli.main([*argv, "-o", str(first)]) == 0
    assert cli.main([argv[0], "--from-file", str(first), "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    capsys.readouterr()


def test_from_file_rejects_other_command(tmp_path, capsys):
    out = tmp_path / "t.csv"
    cli.main(["thresholds", *MG_ARGS, "-o", str(out)])
    code, _, err = run(["roc", "--from-file", str(out)], capsys)
    assert code == 2 and "thresholds" in err


def test_from_file_without_header(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("tau,x\n1,2\n")
    code, _, _ = run(["thresholds", "--from-file", str(bad)], capsys)
    assert code == 2


def test_output_is_deterministic(capsys):
    argv = ["roc", "--preset", "fig4a"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_workers_do_not_change_output(capsys, monkeypatch):
    argvs = [["chart", "--preset", "fig2a"], ["bifurcate", *MG_ARGS, "--etas", "0.95", "1.05", "1.2"]]
    serial = [run(a, capsys)[1] for a in argvs]
    monkeypatch.setenv("DELAYSTAB_WORKERS", "2")
    parallel = [run(a, capsys)[1] for a in argvs]
    assert serial == parallel


def test_bad_worker_count(capsys, monkeypatch):
    monkeypatch.setenv("DELAYSTAB_WORKERS", "many")
    code, _, _ = run(["chart", "--preset", "fig2a"], capsys)
    assert code == 2


@pytest.mark.parametrize("name", sorted(cli.PRESETS))
def test_every_preset_runs(name, capsys):
    preset = cli.PRESETS[name]
    code, out, _ = run([preset["command"], "--preset", name], capsys)
    assert code == 0
    if preset["command"] == "hopf":
        config = json.loads(out)["config"]
    else:
        config, rows = _csv(out)
        assert rows
    assert config["preset"] == name
    for key, value in preset.items():
        assert config[key] == value


def test_preset_caption_values():
    p = cli.PRESETS
    assert (p["fig4b"]["beta"], p["fig4b"]["gamma"], p["fig4b"]["n"]) == (0.4, 0.3, 0.1)
    for name in ("fig6", "fig7a", "fig7b", "hopf-mg"):
        assert (p[name]["beta"], p[name]["gamma"], p[name]["n"]) == (0.8, 0.3, 10.0)
    for name in ("fig9", "fig10a", "fig10b", "hopf-lasota"):
        assert (p[name]["beta"], p[name]["gamma"], p[name]["n"]) == (0.9, 0.1, 0.1)
    assert (p["fig7a"]["tau"], p["fig7b"]["tau"]) == (1.0, 1.3)
    assert (p["fig10a"]["tau"], p["fig10b"]["tau"]) == (13.69, 21.69)
    assert p["fig5a"]["range"] == [7.0, 20.0] and p["fig5b"]["range"] == [0.1, 0.9]
    assert p["fig6"]["eta_range"][0] == 0.9


def test_fig5_curves_monotone(capsys):
    _, out, _ = run(["robust", "--preset", "fig5a"], capsys)
    mg = [float(r["tau_rob"]) for r in _csv(out)[1]]
    assert mg[0] == pytest.approx(0.00379, abs=1e-5)
    assert all(a > b for a, b in zip(mg, mg[1:]))
    _, out, _ = run(["robust", "--preset", "fig5b"], capsys)
    ls = [float(r["tau_rob"]) for r in _csv(out)[1]]
    assert all(a < b for a, b in zip(ls, ls[1:]))


def test_verify_text(capsys):
    code, out, _ = run(["verify", "--samples", "10"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4 and all(line.startswith("PASS") for line in lines)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "delaystab.cli", "thresholds", *MG_ARGS],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.startswith("# config: ")
