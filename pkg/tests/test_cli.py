import json
import subprocess
import sys

import pytest

from supou.cli import main
from supou.config import ConfigError, load_config, parse_config


def gaussian_cfg(**over):
    d = {"version": 1, "seed": 7,
         "model": {"a": 0.0, "b": 2.0, "mu": {"kind": "zero"}, "pi": {"kind": "gamma", "alpha": 0.5}},
         "simulation": {"horizon": 4.0, "step": 1.0, "m": 8, "n_rep": 5},
         "verification": {"T_ladder": [5, 10, 20]}}
    d.update(over)
    return d


def write(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d) if isinstance(d, dict) else d)
    return str(p)


# ---------------------------------------------------------------- classify


def test_classify_stable(capsys):
    assert main(["classify", "--gamma", "0.8", "--alpha", "0.5", "--beta", "0.3"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["label"] == "StableLevy(0.8)" and d["exponent"] == pytest.approx(1.25)


def test_classify_boundary(capsys):
    assert main(["classify", "--gamma", "1.5", "--alpha", "0.5"]) == 2
    assert json.loads(capsys.readouterr().out)["regime"] == "Boundary"


def test_classify_fbm(capsys):
    assert main(["classify", "--gamma", "1.5", "--alpha", "0.5", "--gaussian"]) == 0
    assert json.loads(capsys.readouterr().out)["label"] == "FBM(H=0.75)"


@pytest.mark.parametrize("argv", [["classify", "--gamma", "2.5", "--alpha", "0.5"],
                                  ["classify", "--gamma", "x", "--alpha", "0.5"],
                                  ["classify", "--alpha", "0.5"],
                                  ["classify", "--gamma", "1.8", "--alpha", "0.5", "--beta", "1", "--bg-index", "1"]])
def test_classify_invalid(argv, capsys):
    assert main(argv) == 1


# ---------------------------------------------------------------- simulate


def test_simulate_zero_rate_gives_zero_paths(tmp_path):
    cfg = gaussian_cfg(model={"a": 0.0, "b": 0.0,
                              "mu": {"kind": "compound_poisson", "rate": 0.0,
                                     "jumps": {"kind": "pareto", "gamma": 0.8}},
                              "pi": {"kind": "gamma", "alpha": 0.5}})
    out = tmp_path / "p.csv"
    assert main(["simulate", write(tmp_path, cfg), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "replication,component,t,x,xstar"
    assert all(float(r.split(",")[3]) == 0 and float(r.split(",")[4]) == 0 for r in lines[1:])
    assert len(lines) - 1 == 5 * 4 * 5


def test_simulate_deterministic_and_thread_invariant(tmp_path):
    c = write(tmp_path, gaussian_cfg())
    outs = []
    for i, threads in enumerate(("1", "1", "3")):
        o = tmp_path / f"o{i}.csv"
        assert main(["simulate", c, "--out", str(o), "--threads", threads]) == 0
        outs.append(o.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_simulate_seed_flag_overrides(tmp_path):
    c = write(tmp_path, gaussian_cfg())
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["simulate", c, "--out", str(a), "--seed", "1"])
    main(["simulate", c, "--out", str(b), "--seed", "2"])
    assert a.read_bytes() != b.read_bytes()


def test_simulate_generated_seed_is_reported(tmp_path, capsys):
    d = gaussian_cfg()
    d.pop("seed")
    assert main(["simulate", write(tmp_path, d), "--out", str(tmp_path / "o.csv")]) == 0
    assert "seed" in capsys.readouterr().err


@pytest.mark.parametrize("bad", [
    "{not json",
    {"version": 2},
    {**gaussian_cfg(), "extra": 1},
    gaussian_cfg(simulation={"horizon": 4.0, "m": 8}),
    gaussian_cfg(model={"a": 0.0, "b": -1.0, "mu": {"kind": "zero"}, "pi": {"kind": "gamma", "alpha": 0.5}}),
    gaussian_cfg(model={"a": 0.0, "b": 1.0, "mu": {"kind": "weird"}, "pi": {"kind": "gamma", "alpha": 0.5}}),
])
def test_malformed_config_writes_nothing(tmp_path, bad):
    out = tmp_path / "never.csv"
    rep = tmp_path / "never.json"
    c = write(tmp_path, bad)
    assert main(["simulate", c, "--out", str(out)]) == 1
    assert main(["verify", c, "--out", str(rep)]) == 1
    assert not out.exists() and not rep.exists()


def test_config_errors_locate_the_problem(tmp_path):
    with pytest.raises(ConfigError) as e:
        load_config(write(tmp_path, '{\n  "version": 1,\n  "seed": }'))
    assert "3:" in str(e.value)
    with pytest.raises(ConfigError) as e:
        parse_config(gaussian_cfg(simulation={"horizon": 4.0, "step": 1.0, "bogus": 1}))
    assert "simulation" in e.value.where


# ---------------------------------------------------------------- verify


def test_verify_pass_and_fail_exit_codes(tmp_path):
    loose = gaussian_cfg(verification={"T_ladder": [5, 10, 20], "thresholds": {
        k: 10.0 for k in ("ecf", "exponent", "hill", "ks", "independence", "correlation")}})
    tight = gaussian_cfg(verification={"T_ladder": [5, 10, 20], "thresholds": {"exponent": 0.0}})
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["verify", write(tmp_path, loose, "l.json"), "--out", str(r1)]) == 0
    assert main(["verify", write(tmp_path, tight, "t.json"), "--out", str(r2)]) == 4
    d = json.loads(r2.read_text())
    assert d["schema"] == "supou.verification/1" and d["pass"] is False
    assert d["regime"]["label"] == "FBM(H=0.75)"
    assert len(d["limit"]["candidates"]) == 4 and "fbm_candidates" in d["info"]


def test_verify_is_byte_identical(tmp_path):
    c = write(tmp_path, gaussian_cfg())
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", c, "--out", str(a), "--threads", "1"])
    main(["verify", c, "--out", str(b), "--threads", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_verify_boundary_exit(tmp_path):
    cfg = gaussian_cfg(model={"a": "natural", "b": 0.0, "mu": {"kind": "stable", "c1": 1, "c2": 1, "gamma": 1.5},
                              "pi": {"kind": "gamma", "alpha": 0.5}})
    out = tmp_path / "r.json"
    assert main(["verify", write(tmp_path, cfg), "--out", str(out)]) == 2
    assert not out.exists()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "supou", "classify", "--gamma", "1.2", "--alpha", "0.5",
                        "--gaussian"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["label"] == "StableLevy(1.2)"


def test_simulate_runtime_budget(tmp_path):
    import time
    cfg = gaussian_cfg(simulation={"horizon": 100.0, "step": 1.0, "m": 64, "n_rep": 100})
    t0 = time.perf_counter()
    assert main(["simulate", write(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 0
    assert time.perf_counter() - t0 < 10.0
