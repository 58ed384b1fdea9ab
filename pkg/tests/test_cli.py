import csv
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from channelfield._validation import InvalidArgumentError
from channelfield.cli import RunConfig, main


def run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([args[0], "--out", str(out), *args[1:]])
    return code, out


def test_sample_is_deterministic(tmp_path):
    _, a = run(tmp_path, "a", "sample", "--seed", "5", "--window", "0,0,6,6")
    _, b = run(tmp_path, "b", "sample", "--seed", "5", "--window", "0,0,6,6")
    text = (a / "configuration.jsonl").read_text()
    assert text == (b / "configuration.jsonl").read_text()
    summary = json.loads((a / "summary.json").read_text())
    assert summary["count"] == len(text.splitlines()) - 1
    assert summary["seed"] == 5 and len(summary["config_hash"]) == 64


def test_sample_replicas_match_expected_count(tmp_path):
    _, out = run(tmp_path, "s", "sample", "--replicas", "200", "--window", "0,0,5,5")
    assert json.loads((out / "summary.json").read_text())["within_3se"]


def test_config_file_with_override(tmp_path):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(RunConfig(seed=7, window=[0, 0, 4, 4]).to_json())
    _, out = run(tmp_path, "o", "sample", "--config", str(cfgfile), "--seed", "8")
    used = RunConfig.from_json((out / "run_config.json").read_text())
    assert used.seed == 8 and used.window == [0, 0, 4, 4]


def test_empty_field_curve_is_diagonal(tmp_path):
    code, out = run(tmp_path, "e", "integrate", "--empty-field", "--start", "1,2", "--t-end", "3", "--step", "0.5")
    assert code == 0
    rows = list(csv.DictReader((out / "curve.csv").open()))
    for r in rows:
        assert float(r["x1"]) - 1 == pytest.approx(float(r["x2"]) - 2)
    stats = json.loads((out / "ratio_stats.json").read_text())
    assert stats["conservation_error"] < 1e-12


def test_resume_continues_bitwise(tmp_path):
    _, src = run(tmp_path, "src", "sample", "--window", "0,0,12,12", "--seed", "3")
    cfgp = str(src / "configuration.jsonl")
    common = ["--input", cfgp, "--start", "2,2", "--step", "0.05"]
    _, full = run(tmp_path, "full", "integrate", *common, "--t-end", "4")
    _, part = run(tmp_path, "part", "integrate", *common, "--t-end", "2")
    _, res = run(tmp_path, "res", "integrate", *common, "--t-end", "4", "--resume", str(part / "curve.csv"))
    assert (res / "curve.csv").read_text() == (full / "curve.csv").read_text()


def test_bad_start_exits_2(tmp_path, capsys):
    _, src = run(tmp_path, "src", "sample", "--window", "0,0,5,5")
    code, _ = run(tmp_path, "bad", "integrate", "--input", str(src / "configuration.jsonl"), "--start", "0.1,0.1")
    assert code == 2
    assert "padding" in capsys.readouterr().err


def test_invalid_alpha_exits_2(tmp_path, capsys):
    code, _ = run(tmp_path, "x", "sample", "--alpha", "2.5")
    assert code == 2
    assert "alpha" in capsys.readouterr().err


def test_field_and_chain(tmp_path):
    _, f = run(tmp_path, "f", "field", "--window=-1,-1,4,4", "--grid", "5")
    rows = list(csv.DictReader((f / "field.csv").open()))
    assert len(rows) == 25
    assert all(float(r["v1"]) + float(r["v2"]) == pytest.approx(1.0) for r in rows)
    code, c = run(tmp_path, "c", "chain", "--y", "0,0", "--seed", "2")
    rec = json.loads((c / "chain.json").read_text())["record"]
    assert code == 0 and rec["y"] == [0.0, 0.0]


def test_rates_table(tmp_path):
    _, out = run(tmp_path, "r", "rates", "--zetas", "1,2,10")
    rows = list(csv.DictReader((out / "rates.csv").open()))
    assert float(rows[1]["lambda3"]) == pytest.approx(2**-1.5)
    assert json.loads((out / "rates.json").read_text())["kernel_exponent"] == 2


def test_verify_subset(tmp_path):
    code, out = run(tmp_path, "v", "verify", "--smoke", "--only", "2,8")
    rep = json.loads((out / "verify.json").read_text())
    assert code == 0
    assert [r["id"] for r in rep["results"]] == [2, 8]


def test_unknown_config_key():
    with pytest.raises(InvalidArgumentError):
        RunConfig.from_json('{"alpah": 1.5}')


@given(
    st.floats(1.01, 1.99),
    st.integers(0, 2**31),
    st.none() | st.tuples(st.floats(-50, 0), st.floats(-50, 0), st.floats(1, 50), st.floats(1, 50)),
    st.sampled_from([None, 1, 2]),
)
def test_run_config_round_trip(alpha, seed, window, k):
    cfg = RunConfig(alpha=alpha, seed=seed, window=None if window is None else list(window), kernel_exponent=k)
    back = RunConfig.from_json(cfg.to_json())
    assert back == cfg and back.hash() == cfg.hash()
    assert RunConfig(**{**json.loads(cfg.to_json()), "out": "elsewhere"}).hash() == cfg.hash()
