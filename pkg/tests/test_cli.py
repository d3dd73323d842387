import json
import math

import pytest

from altes import cli, io


def run(args, capsys):
    rc = cli.main(args)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_synth_cli_defaults_bandwidth_form(tmp_path, capsys):
    rc, out, _ = run(["synth", "--omega0", "0.5236", "--bandwidth", "0.6283", "--lambda", "0.75", "--nfft", "4096",
                      "--out", str(tmp_path)], capsys)
    assert rc == 0
    assert {p.name for p in tmp_path.iterdir()} == {"spectrum.csv", "signal.bin", "signal.csv", "params.json"}
    cfg, header, rows = io.read_csv(tmp_path / "spectrum.csv")
    assert cfg["params"]["bandwidth"] == pytest.approx(0.6283, rel=1e-12)
    assert len(rows) == 2049
    assert len(io.read_signal(tmp_path / "signal.bin")) == 4096


def test_synth_classic_form(tmp_path, capsys):
    rc, out, _ = run(["synth", "--classic", "--nu", "-0.55", "--k", "1.8", "--c", "-0.35", "--out", str(tmp_path)], capsys)
    assert rc == 0
    params = json.loads(out)["params"]
    assert params["lambda"] == pytest.approx(0.1865, abs=5e-4)
    assert params["omega_c"] == pytest.approx(7.4146, abs=1e-3)


def test_synth_pi_units(tmp_path, capsys):
    rc, out, _ = run(["synth", "--pi-units", "--omega0", "0.2", "--omega-c", "1", "--lambda", "0.5",
                      "--out", str(tmp_path)], capsys)
    assert rc == 0
    assert json.loads(out)["params"]["omega0"] == pytest.approx(math.pi / 5)


def test_synth_missing_flag(tmp_path, capsys):
    rc, _, err = run(["synth", "--omega0", "0.5", "--lambda", "0.5", "--out", str(tmp_path / "x")], capsys)
    assert rc == 2 and "omega-c" in err
    assert not (tmp_path / "x").exists()


def test_synth_invalid_params_leave_nothing(tmp_path, capsys):
    rc, _, err = run(["synth", "--omega0", "0.5", "--omega-c", "1.0", "--lambda", "1", "--out", str(tmp_path / "x")],
                     capsys)
    assert rc == 2 and "singular" in err
    assert not (tmp_path / "x").exists()


def test_partial_files_removed(tmp_path, capsys, monkeypatch):
    def boom(*a, **k):
        raise ValueError("disk full")

    monkeypatch.setattr(io, "write_json", boom)
    rc, _, _ = run(["synth", "--omega0", "0.5", "--omega-c", "1.0", "--lambda", "0.5", "--out", str(tmp_path / "x")],
                   capsys)
    assert rc == 2
    assert not (tmp_path / "x").exists()


def test_sweep_default_endpoint(tmp_path, capsys):
    rc, out, _ = run(["sweep", "--out", str(tmp_path)], capsys)
    assert rc == 0
    summary = json.loads(out)
    best = summary["min_delay_spread_params"]
    assert best["omega0"] == pytest.approx(math.pi / 2) and best["omega_c"] == pytest.approx(math.pi)
    cfg, header, rows = io.read_csv(tmp_path / "frontier.csv")
    assert header == ["omega0", "omega_c", "lambda", "bandwidth", "delay_spread", "oscillations", "n_fft", "on_frontier"]
    assert cfg["grid"]["n_omega0"] == 24
    assert any(float(r[0]) == pytest.approx(math.pi / 2) and float(r[1]) == pytest.approx(math.pi) for r in rows)


def test_sweep_wide_lambda_family(tmp_path, capsys):
    rc, out, _ = run(["sweep", "--lambda-max", "0.9", "--omega0-min", "0.3141", "--out", str(tmp_path)], capsys)
    assert rc == 0
    assert json.loads(out)["max_advised_n_fft"] <= 1024


def test_sweep_too_large(tmp_path, capsys):
    rc, _, err = run(["sweep", "--n-omega0", "1000", "--n-ratio", "100", "--out", str(tmp_path / "x")], capsys)
    assert rc == 2 and "reduce" in err


def test_sweep_empty_grid(tmp_path, capsys):
    rc, _, _ = run(["sweep", "--n-lambda", "0", "--out", str(tmp_path / "x")], capsys)
    assert rc == 2


def test_benchmark_default(tmp_path, capsys):
    rc, out, _ = run(["benchmark", "--out", str(tmp_path)], capsys)
    assert rc == 0
    s = json.loads(out)
    assert s["hct"]["hits"] == 3 and s["hct"]["false_alarms"] == 0
    assert s["stft_tone_bin"] == 21 and s["stft_tone_frames"] > s["stft_frames"] // 2
    assert s["morlet_mean_r_squared"] < s["hct_mean_r_squared"]
    names = {p.name for p in tmp_path.iterdir()}
    assert {"stft.csv", "morlet.csv", "hct.csv", "ridges.csv", "report.json", "truth.json", "signal.bin"} <= names
    cfg, header, _ = io.read_csv(tmp_path / "hct.csv")
    assert header == ["scale", "shift", "magnitude"] and cfg["stft"]["window"] == "hamming"


def test_benchmark_high_snr_centres(tmp_path, capsys):
    rc, out, _ = run(["benchmark", "--snr-db", "40", "--out", str(tmp_path)], capsys)
    s = json.loads(out)
    assert rc == 0 and s["hct"]["hits"] == 3
    assert all(m["center_error"] <= 1 for m in s["hct"]["matches"])


def test_benchmark_spec_file(tmp_path, capsys):
    from altes.synth import default_benchmark

    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(default_benchmark(seed=3).to_dict()))
    rc, out, _ = run(["benchmark", "--spec", str(spec), "--out", str(tmp_path / "o")], capsys)
    assert rc == 0 and json.loads((tmp_path / "o" / "report.json").read_text())["config"]["spec"]["seed"] == 3


def test_benchmark_bad_spec_location(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text('{\n  "chirps": [,]\n}')
    rc, _, err = run(["benchmark", "--spec", str(spec), "--out", str(tmp_path / "o")], capsys)
    assert rc == 2 and "spec.json:2:" in err


def test_benchmark_unknown_key(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text('{"chirps": [], "colour": 1}')
    rc, _, err = run(["benchmark", "--spec", str(spec), "--out", str(tmp_path / "o")], capsys)
    assert rc == 2 and "colour" in err


def test_benchmark_detection_failure_exit(tmp_path, capsys):
    rc, _, _ = run(["benchmark", "--snr-db", "-25", "--out", str(tmp_path)], capsys)
    assert rc == 1


def test_verify_default(capsys):
    rc, out, _ = run(["verify"], capsys)
    doc = json.loads(out)
    assert rc == 0 and doc["passed"]
    by_name = {e["name"]: e for e in doc["checks"]}
    assert by_name["scale_law"]["passed"] is None
    assert all(e["passed"] for n, e in by_name.items() if n not in ("scale_law", "design_bounds"))


def test_verify_gate_violation_still_passes(capsys, caplog):
    rc, out, err = run(["verify", "--omega0", "2.0", "--omega-c", "3.1416", "--lambda", "0.5"], capsys)
    doc = json.loads(out)
    assert rc == 0 and doc["passed"]
    gate = next(e for e in doc["checks"] if e["name"] == "design_bounds")
    assert gate["value"]["wideband_chirping"] is False and gate["warnings"]
    assert "omega0" in caplog.text


def test_verify_malformed_flag(capsys):
    rc, _, _ = run(["verify", "--omega0", "abc"], capsys)
    assert rc == 2


def test_no_command(capsys):
    assert run([], capsys)[0] == 2


def test_synth_warns_on_truncated_band(tmp_path, capsys, caplog):
    rc, _, _ = run(["synth", "--classic", "--nu", "-0.55", "--k", "1.8", "--c", "-0.35", "--out", str(tmp_path)], capsys)
    assert rc == 0 and "truncated" in caplog.text
