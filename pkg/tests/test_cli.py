import json
import math
from fractions import Fraction

import pytest
import yaml
from hypothesis import given, settings, strategies as st

from kickedhall.cli import main
from kickedhall.config import (CONFIGS, EvolveConfig, GOLDEN_HBAR, WebConfig, dump_config,
                               load_config)
from kickedhall.errors import ConfigError
from kickedhall.persist import read_csv


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


@pytest.mark.parametrize("kind", sorted(CONFIGS))
def test_default_config_roundtrip(kind):
    cfg = CONFIGS[kind]()
    again = CONFIGS[kind].from_mapping(yaml.safe_load(dump_config(cfg)))
    assert again == cfg


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 20), st.integers(1, 40), st.floats(0, 6.28), st.integers(0, 2 ** 64 - 1))
def test_evolve_config_roundtrip(k, l, x_c, seed):
    cfg = EvolveConfig(eta=Fraction(k, l), x_c=x_c, hbar_s=Fraction(1, 7), seed=seed)
    assert EvolveConfig.from_mapping(yaml.safe_load(dump_config(cfg))) == cfg


def test_golden_and_unknown_keys(tmp_path):
    cfg = load_config("evolve", _write(tmp_path, "e.yaml", {"hbar_s": "golden"}))
    assert cfg.hbar_s == GOLDEN_HBAR
    with pytest.raises(ConfigError):
        load_config("web", _write(tmp_path, "w.yaml", {"kapa": 0.1}))
    with pytest.raises(ConfigError):
        load_config("web", _write(tmp_path, "w2.yaml", {"eta": "x/y"}))


def test_unknown_key_exit_code(tmp_path, capsys):
    path = _write(tmp_path, "bad.yaml", {"n_step": 3})
    assert main(["web", "--config", str(path), "--out", str(tmp_path)]) == 2
    assert "unknown keys" in capsys.readouterr().err


def test_web_empty_and_deterministic(tmp_path):
    empty = _write(tmp_path, "e.yaml", {"n_steps": 0})
    assert main(["web", "--config", str(empty), "--out", str(tmp_path / "a")]) == 0
    header, rows = read_csv(tmp_path / "a" / "web.csv")
    assert header == ["u", "v"] and rows == []
    cfg = _write(tmp_path, "w.yaml", {"kappa": 0.6, "eta": "0/1", "n_steps": 10000,
                                      "start": [3.14159, 0.01], "unfolded": True})
    for out in ("b", "c"):
        assert main(["web", "--config", str(cfg), "--out", str(tmp_path / out), "--seed", "9"]) == 0
    first = (tmp_path / "b" / "web.csv").read_bytes()
    assert first == (tmp_path / "c" / "web.csv").read_bytes()
    side = json.loads((tmp_path / "b" / "web.csv.json").read_text())
    assert side["config"]["seed"] == 9 and "conventions" in side and len(side["config_hash"]) == 64
    assert (tmp_path / "b" / "web.plot.py").exists()
    assert max(side["cells_spanned"]) >= 2


def test_eta_kept_as_given(tmp_path):
    cfg = _write(tmp_path, "w.yaml", {"kappa": 0.1, "eta": "4/3", "n_steps": 100})
    assert main(["web", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    side = json.loads((tmp_path / "web.csv.json").read_text())
    assert side["config"]["eta"] == "4/3"


def test_widthgap_output(tmp_path, capsys):
    cfg = _write(tmp_path, "g.yaml", {"mu": 0.1, "eta": "0/1", "x_c": math.pi / 2})
    assert main(["widthgap", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "width=0.0398675" in out
    report = json.loads((tmp_path / "widthgap.json").read_text())
    assert abs(report["gap"]) < 1e-10


def test_qar_check_exit_codes(tmp_path, capsys):
    ok = _write(tmp_path, "q.yaml", {"hbar_s": 1, "eta": "2/3", "cycles": 20})
    assert main(["qar-check", "--config", str(ok), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "qar_check.json").read_text())
    assert report["flat_band"] and report["fidelity_one"]
    bad = _write(tmp_path, "b.yaml", {"hbar_s": "1/3", "eta": "2/3", "cycles": 5})
    assert main(["qar-check", "--config", str(bad), "--out", str(tmp_path / "x")]) == 3


def test_butterfly_and_cache_commands(tmp_path):
    cfg = _write(tmp_path, "b.yaml", {"p_max": 4, "grid": [3, 3], "cache_dir": str(tmp_path / "cache")})
    assert main(["butterfly", "--config", str(cfg), "--out", str(tmp_path), "--workers", "2"]) == 0
    header, rows = read_csv(tmp_path / "butterfly.csv")
    assert header == ["hbar_q", "hbar_p", "band", "w1", "w2", "E", "E_scaled"]
    assert all(abs(float(r[6])) <= 4.5 for r in rows)
    assert main(["cache", "clear", "--dir", str(tmp_path / "cache")]) == 0
    assert not list((tmp_path / "cache").glob("*.npz"))


def test_evolve_command(tmp_path):
    cfg = _write(tmp_path, "e.yaml", {"s_max": 120, "n_beta": 8, "classical_samples": 50})
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    header, rows = read_csv(tmp_path / "evolve.csv")
    assert header[:4] == ["s", "tau", "spread", "fidelity"]
    assert len(rows) == 11
    side = json.loads((tmp_path / "evolve.csv.json").read_text())
    assert side["run"]["fixed_point"]["kind"] == "hyperbolic"


def test_scaling_command(tmp_path, capsys):
    assert main(["scaling", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "scaling.json").read_text())["slope"] == pytest.approx(2.0, abs=0.1)


def test_print_config(capsys):
    assert main(["widthgap", "--print-config"]) == 0
    assert "eta: 2/3" in capsys.readouterr().out


CONFIG_DIR = __import__("pathlib").Path(__file__).resolve().parents[1] / "configs"
KIND_BY_PREFIX = {"web": "web", "butterfly": "butterfly", "spread": "evolve", "ballistic": "evolve",
                  "widthgap": "widthgap", "qar": "qar-check", "scaling": "scaling"}


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.yaml")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    load_config(KIND_BY_PREFIX[path.stem.split("_")[0]], path)
