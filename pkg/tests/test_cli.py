import json
import subprocess
import sys

from distnesterov.cli import main

CONFIG = {
    "scenario": "custom",
    "seed": 1,
    "graph": {"n": 5, "radius": 0.6},
    "objective": {"kind": "quadratic", "p": 2},
    "algorithms": [{"name": "AB", "step": 0.1},
                   {"name": "ABN", "step": 0.1, "momentum": {"kind": "constant", "beta": 0.2}}],
    "iters": 100,
}


def _write(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_run_writes_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--config", _write(tmp_path, CONFIG), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "AB: step=0.1" in text and "outputs written" in text
    assert (out / "AB.csv").exists() and (out / "residual.svg").exists()


def test_run_seed_override(tmp_path):
    cfg = _write(tmp_path, CONFIG)
    main(["run", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["run", "--config", cfg, "--out", str(tmp_path / "b"), "--seed", "9"])
    assert (tmp_path / "a" / "AB.csv").read_bytes() != (tmp_path / "b" / "AB.csv").read_bytes()


def test_bad_config_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, {**CONFIG, "algorithms": []})
    assert main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_missing_config_exit_code(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 4


def test_sweep_command(tmp_path, capsys):
    cfg = _write(tmp_path, {**CONFIG, "algorithms": [{"name": "AB",
                                                      "tune": {"step_exponents": [-3, 0]}}],
                            "target": 1e-6})
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "s")]) == 0
    assert "AB: step=" in capsys.readouterr().out
    assert (tmp_path / "s" / "sweep_AB.csv").exists()


def test_schema_command(capsys):
    assert main(["schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "scenario" in schema["properties"]


def test_check_quick_module_entry():
    proc = subprocess.run([sys.executable, "-m", "distnesterov", "check", "--quick"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    lines = proc.stdout.strip().splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
