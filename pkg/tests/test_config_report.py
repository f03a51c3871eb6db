import dataclasses
import json

import pytest
from hypothesis import given, settings, strategies as st

from gapspec.config import RunConfig, dump_config, parse_config, threads_from_env
from gapspec.errors import ConfigError
from gapspec.report import FREQ, LENGTH, PLAIN, Report, emit, parse_json


def test_parse_comments_and_types():
    cfg = parse_config("# medium\nomega_perp = 2.0  # absolute\nbeta=5e-4\nl = 3\nL = none\n")
    assert cfg.omega_perp == 2.0 and cfg.beta == 5e-4 and cfg.l == 3 and cfg.L is None


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError) as info:
        parse_config("beta = 1e-3\n\nfoo = 1\n")
    assert info.value.key == "foo" and info.value.line == 3
    assert "foo" in str(info.value) and "3" in str(info.value)


@pytest.mark.parametrize("text", ["beta 1e-3", "l = two", "beta = 1\nbeta = 2",
                                  "format = xml", "mode = fancy", "threads = 0"])
def test_malformed(text):
    with pytest.raises(ConfigError):
        parse_config(text)


@settings(max_examples=200, deadline=None)
@given(beta=st.floats(1e-8, 0.09), w12=st.floats(1.0001, 1.1999), l=st.integers(1, 100),
       H=st.floats(-1, 1, allow_nan=False), L=st.none() | st.floats(1.0, 1e6),
       fmt=st.sampled_from(["csv", "json"]), threads=st.integers(1, 16))
def test_config_round_trip(beta, w12, l, H, L, fmt, threads):
    cfg = RunConfig(beta=beta, omega12=w12, l=l, H=H, L=L, format=fmt, threads=threads)
    assert parse_config(dump_config(cfg)) == cfg


def test_threads_env(monkeypatch):
    monkeypatch.delenv("GAPSPEC_THREADS", raising=False)
    assert threads_from_env(3) == 3
    monkeypatch.setenv("GAPSPEC_THREADS", "6")
    assert threads_from_env(1) == 6
    monkeypatch.setenv("GAPSPEC_THREADS", "many")
    with pytest.raises(ConfigError):
        threads_from_env(1)


def _report():
    return Report("demo", [("omega", FREQ), ("size", LENGTH), ("tag", PLAIN)],
                  [[1.1, 2.0, "gap"], [0.123456789012345, None, "x"]],
                  {"total_energy": (2.2000000000001, FREQ), "ok": (True, PLAIN)},
                  {"tool": "gapspec"})


def test_csv_layout():
    lines = emit(_report(), "csv", scale=2.0).decode().splitlines()
    assert lines[0] == "omega,omega_abs,size,size_abs,tag,total_energy,total_energy_abs,ok"
    assert lines[1].split(",")[:4] == ["1.10000000000e+00", "2.20000000000e+00",
                                       "2.00000000000e+00", "1.00000000000e+00"]
    assert lines[2].split(",")[0] == "1.23456789012e-01"
    assert lines[2].split(",")[2:4] == ["", ""]
    assert lines[1].endswith(",true")
    assert len(lines) == 3


def test_json_round_trip_exact_fields():
    data = emit(_report(), "json", scale=2.0)
    raw = json.loads(data)
    assert isinstance(raw["summary"]["total_energy"], str)
    assert isinstance(raw["records"][0]["omega"], float)
    doc = parse_json(data)
    assert doc["summary"]["total_energy"] == 2.2000000000001
    assert doc["summary"]["total_energy_abs"] == 2.2000000000001 * 2.0
    assert doc["records"][1]["size"] is None
    assert doc["meta"] == {"tool": "gapspec"}


def test_emit_is_deterministic():
    assert emit(_report(), "csv") == emit(dataclasses.replace(_report()), "csv")
    with pytest.raises(ValueError):
        emit(_report(), "xml")
