"""End-to-end runs of the command-line interface, in process."""

import json

import numpy as np
import pytest

from ugame.analytic import pguess_max_d2, pguess_max_gamma0
from ugame.cli import main
from ugame.game import phi_jl


def _write_state(path, d, amplitudes):
    pairs = [[float(a.real), float(a.imag)] for a in np.asarray(amplitudes)]
    path.write_text(json.dumps({"d": d, "amplitudes": pairs}))
    return str(path)


def test_version_exits_zero():
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_curve_analytic_d2(capsys):
    assert main(["curve", "--d", "2", "--steps", "11", "--mode", "analytic"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "gamma,p_guess,mode,d"
    assert lines[1] == "0,0.853553391,analytic,2"
    assert lines[-1] == "1,1,analytic,2"
    assert len(lines) == 12
    for line in lines[1:]:
        g, p, mode, d = line.split(",")
        assert abs(float(p) - pguess_max_d2(float(g))) < 1e-9
        assert mode == "analytic" and d == "2"


def test_curve_analytic_rejects_higher_dimensions_off_zero(capsys):
    assert main(["curve", "--d", "3", "--mode", "analytic"]) == 2
    assert "analytic mode" in capsys.readouterr().err


def test_curve_analytic_zero_coherence_any_dimension(capsys):
    args = ["curve", "--d", "5", "--gamma-end", "0", "--steps", "1"]
    assert main(args + ["--mode", "analytic"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[1] == "0,0.723606798,analytic,5"


def test_curve_numeric_single_point(capsys):
    args = [
        "curve", "--d", "3", "--gamma-end", "0", "--steps", "1",
        "--restarts", "16", "--seed", "0",
    ]
    assert main(args) == 0
    row = capsys.readouterr().out.strip().split("\n")[1]
    value = float(row.split(",")[1])
    assert abs(value - pguess_max_gamma0(3)) < 1e-4


def test_curve_usage_errors(capsys):
    assert main(["curve", "--d", "1", "--mode", "analytic"]) == 2
    assert main(["curve", "--d", "2", "--steps", "0", "--mode", "analytic"]) == 2
    assert (
        main(["curve", "--d", "2", "--gamma-start", "0.8", "--gamma-end", "0.2",
              "--mode", "analytic"])
        == 2
    )
    capsys.readouterr()


def test_curve_writes_file_and_manifest(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    args = [
        "curve", "--d", "2", "--steps", "3", "--mode", "analytic",
        "--out", str(out), "--seed", "0",
    ]
    assert main(args) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().startswith("gamma,p_guess,mode,d\n")
    manifest = json.loads((tmp_path / "curve.csv.manifest.json").read_text())
    assert manifest["command"] == "curve"
    assert manifest["seed"] == 0
    assert manifest["parameters"]["mode"] == "analytic"


def test_curve_numeric_reruns_are_byte_identical(tmp_path):
    paths = (tmp_path / "a.csv", tmp_path / "b.csv")
    for path in paths:
        args = [
            "curve", "--d", "2", "--steps", "3", "--restarts", "4",
            "--seed", "1", "--out", str(path),
        ]
        assert main(args) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_curve_blocked_output_path_is_an_io_error(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    args = [
        "curve", "--d", "2", "--steps", "3", "--mode", "analytic",
        "--out", str(blocker / "curve.csv"),
    ]
    assert main(args) == 3
    assert "I/O error" in capsys.readouterr().err


def test_fig3_outputs(tmp_path, capsys):
    out_dir = tmp_path / "f3"
    args = [
        "fig3", "--dims", "2", "--steps", "3", "--restarts", "4",
        "--out-dir", str(out_dir), "--seed", "0",
    ]
    assert main(args) == 0
    capsys.readouterr()
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == ["curve_d2.csv", "fig3.svg", "manifest.json"]
    rows = (out_dir / "curve_d2.csv").read_text().strip().split("\n")
    assert rows[1] == "0,0.853553391,analytic,2"
    assert rows[2] == "0.5,0.895284708,analytic,2"
    assert rows[3] == "1,1,analytic,2"
    svg = (out_dir / "fig3.svg").read_text()
    assert svg.startswith("<svg ") and "polyline" in svg


def test_fig3_rejects_bad_dims(capsys):
    assert main(["fig3", "--dims", "2,1", "--steps", "3"]) == 2
    assert main(["fig3", "--dims", "x", "--steps", "3"]) == 2
    capsys.readouterr()


def test_schmidt_d2(tmp_path, capsys):
    report = tmp_path / "schmidt.json"
    args = ["schmidt", "--d", "2", "--restarts", "8", "--seed", "0",
            "--out", str(report)]
    assert main(args) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "d,p_guess,schmidt_1,schmidt_2"
    d, p, s1, s2 = lines[1].split(",")
    assert d == "2"
    assert abs(float(p) - 1.0) < 1e-6
    r = 1.0 / np.sqrt(2.0)
    assert abs(float(s1) - r) < 1e-3
    assert abs(float(s2) - r) < 1e-3
    payload = json.loads(report.read_text())
    assert sorted(payload.keys()) == [
        "amplitudes", "d", "manifest", "p_guess", "schmidt",
    ]
    assert len(payload["amplitudes"]) == 2


def test_entropy_stdout(capsys):
    assert main(["entropy", "--steps", "5"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "gamma,h_B_given_R,h_X_given_R,h_P_given_R_t1,h_P_given_R_t2"
    assert len(lines) == 6
    first = [float(v) for v in lines[1].split(",")]
    last = [float(v) for v in lines[-1].split(",")]
    assert first[0] == 0.0
    assert abs(first[1]) < 1e-9
    assert abs(first[2] - 0.22844669683638807) < 1e-9
    assert abs(first[3] - (-1.0)) < 1e-9
    assert first[4] == 0.0
    assert last[0] == 1.0
    assert abs(last[1] - (-1.0)) < 1e-9
    assert abs(last[2]) < 1e-9
    assert abs(last[3]) < 1e-9
    assert last[4] == 0.0


def test_entropy_files(tmp_path, capsys):
    out = tmp_path / "entropy.csv"
    assert main(["entropy", "--steps", "5", "--out", str(out)]) == 0
    capsys.readouterr()
    assert out.exists()
    assert (tmp_path / "entropy.svg").exists()
    assert (tmp_path / "entropy.csv.manifest.json").exists()
    rows = out.read_text().strip().split("\n")
    assert rows[1] == "0,0,0.228446697,-1,0"
    assert rows[-1] == "1,-1,0,0,0"


def test_entropy_needs_two_steps(capsys):
    assert main(["entropy", "--steps", "1"]) == 2
    capsys.readouterr()


def test_discriminate_json(tmp_path, capsys):
    state = _write_state(tmp_path / "phi.json", 2, phi_jl(2, 0, 1).amplitudes)
    assert main(["discriminate", "--state-file", state, "--gamma", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["p_guess"] - 1.0) < 1e-8
    assert payload["d"] == 2
    assert payload["gamma"] == 1.0
    assert abs(sum(payload["outcome_probabilities"]) - 1.0) < 1e-12
    assert payload["manifest"]["command"] == "discriminate"


def test_discriminate_csv(tmp_path, capsys):
    state = _write_state(tmp_path / "e0.json", 2, [1.0, 0.0])
    args = ["discriminate", "--state-file", state, "--gamma", "1",
            "--format", "csv"]
    assert main(args) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "p_guess,dual_value,primal_value,gap,p_0,p_1"
    fields = lines[1].split(",")
    assert fields[0] == "0.933012702"
    assert float(fields[4]) == 0.75
    assert float(fields[5]) == 0.25


def test_discriminate_uniform_input(tmp_path, capsys):
    state = _write_state(tmp_path / "u.json", 4, [0.5] * 4)
    assert main(["discriminate", "--state-file", state, "--gamma", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert 0.25 <= payload["p_guess"] <= 0.75


def test_discriminate_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"d": 2, "amplitudes": [[1, 0], [0, 0]')
    assert main(["discriminate", "--state-file", str(bad), "--gamma", "0.5"]) == 2
    err = capsys.readouterr().err
    assert "invalid JSON" in err and "line 1" in err

    bad.write_text('{"d": 2}')
    assert main(["discriminate", "--state-file", str(bad), "--gamma", "0.5"]) == 2
    assert "required fields" in capsys.readouterr().err

    bad.write_text('{"d": 2, "amplitudes": [[0, 0], [0, 0]]}')
    assert main(["discriminate", "--state-file", str(bad), "--gamma", "0.5"]) == 2
    capsys.readouterr()

    missing = str(tmp_path / "missing.json")
    assert main(["discriminate", "--state-file", missing, "--gamma", "0.5"]) == 2
    capsys.readouterr()

    state = _write_state(tmp_path / "ok.json", 2, [1.0, 0.0])
    assert main(["discriminate", "--state-file", state, "--gamma", "1.5"]) == 2
    capsys.readouterr()


def test_discriminate_warns_on_norm_deviation(tmp_path, capsys):
    state = _write_state(tmp_path / "off.json", 2, [0.8, 0.59])
    assert main(["discriminate", "--state-file", state, "--gamma", "0.5"]) == 0
    captured = capsys.readouterr()
    assert "norm deviates" in captured.err
    assert json.loads(captured.out)["p_guess"] > 0.5


def test_certify_agreement(capsys):
    assert main(["certify", "--d", "2", "--gamma", "0", "--j", "0", "--l", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["agrees"] is True
    assert abs(payload["trace_certificate"] - 0.8535533905932737) < 1e-9
    assert abs(payload["closed_form"] - 0.8535533905932737) < 1e-12
    assert payload["min_slack"] >= -1e-9

    assert main(["certify", "--d", "4", "--gamma", "0.8", "--j", "3", "--l", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["agrees"] is True
    assert abs(payload["closed_form"] - 0.75) < 1e-12

    assert main(["certify", "--d", "6", "--gamma", "0.5", "--j", "0", "--l", "2"]) == 0
    capsys.readouterr()


def test_certify_rejects_equal_outcomes(capsys):
    assert main(["certify", "--d", "3", "--gamma", "0.5", "--j", "1", "--l", "1"]) == 2
    capsys.readouterr()


def test_seed_environment_default(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("UGAME_SEED", "123")
    out = tmp_path / "c.csv"
    args = ["curve", "--d", "2", "--steps", "3", "--mode", "analytic",
            "--out", str(out)]
    assert main(args) == 0
    capsys.readouterr()
    manifest = json.loads((tmp_path / "c.csv.manifest.json").read_text())
    assert manifest["seed"] == 123


def test_seed_environment_must_be_integer(monkeypatch, capsys):
    monkeypatch.setenv("UGAME_SEED", "abc")
    assert main(["curve", "--d", "2", "--steps", "3", "--mode", "analytic"]) == 2
    assert "UGAME_SEED" in capsys.readouterr().err
