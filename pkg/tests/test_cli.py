import io
import json

import numpy as np
import pytest

from gapspec import cli, spectrum, stringmap
from gapspec.medium import MediumParams
from gapspec.report import parse_json


def run(argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _no_env_threads(monkeypatch):
    monkeypatch.delenv("GAPSPEC_THREADS", raising=False)


def test_pinned_l0_single_line():
    code, out, _ = run(["pinned", "--l", "0"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(row["total_energy"]) == pytest.approx(1.1, rel=1e-11)
    assert float(row["omega"]) == pytest.approx(1.1, rel=1e-11)


def test_soliton_linear_l4_energy():
    code, out, _ = run(["soliton", "--l", "4", "--mode", "linear", "--format", "json"])
    assert code == 0
    doc = parse_json(out.encode())
    a = stringmap.linearize(MediumParams()).a
    assert doc["summary"]["total_energy"] == pytest.approx(2 * 1.1 * 4 - 16e-3 / a, rel=1e-15)
    assert doc["meta"]["mode"] == "linear"
    assert doc["meta"]["l_max"] == 72 and doc["meta"]["l_valid"] == 2
    assert doc["meta"]["valid_radius"] == stringmap.linearize(MediumParams()).valid_radius
    assert len(doc["records"]) == 8


def test_json_round_trip_12_digits():
    code, out, _ = run(["soliton", "--l", "2", "--mode", "exact", "--H", "1e-5",
                        "--format", "json"])
    assert code == 0
    doc = parse_json(out.encode())
    s = spectrum.gap_soliton_exact(MediumParams(), 2, 1e-5)
    assert doc["summary"]["total_energy"] == s.total_energy
    assert doc["summary"]["eps_per_particle"] == s.energy_per_particle
    for rec, w in zip(doc["records"], s.frequencies):
        assert rec["omega_re"] == pytest.approx(w.real, rel=1e-12)
        assert rec["omega_im"] == pytest.approx(w.imag, rel=1e-12)


def test_absolute_units():
    code, out, _ = run(["pair", "--omega-perp", "2", "--omega-par", "2.4", "--omega12", "2.2",
                        "--H", "1e-4", "--format", "json"])
    assert code == 0
    doc = parse_json(out.encode())
    ref = spectrum.gap_pair(MediumParams(), 1e-4)
    rec = doc["records"][0]
    assert rec["omega_re"] == pytest.approx(ref.xi[0], rel=1e-14)
    assert rec["omega_re_abs"] == pytest.approx(2 * ref.xi[0], rel=1e-14)
    assert doc["summary"]["size_abs"] == pytest.approx(ref.size / 2, rel=1e-14)
    assert doc["meta"]["params_input"]["omega_perp"] == 2.0
    assert doc["meta"]["params_normalized"]["omega_perp"] == 1.0


def test_exit_codes(tmp_path):
    assert run(["pair", "--H=-1e-4"])[0] == 2
    assert run(["soliton", "--l", "500"])[0] == 2
    assert run(["ordinary", "--N", "2", "--H", "0.1"])[0] == 2
    code, _, err = run(["soliton", "--l", "3", "--mode", "corrected"])
    assert code == 2 and "radius" in err
    assert run(["nonsense"])[0] == 1
    assert run(["pair", "--bogus", "1"])[0] == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("beta = 1e-3\nnot_a_key = 3\n")
    code, _, err = run(["pair", "--config", str(bad)])
    assert code == 1 and "not_a_key" in err and "line 2" in err
    code, _, err = run(["soliton", "--l", "2", "--mode", "exact", "--newton-tol", "1e-30"])
    assert code == 3 and "residuals" in err


def test_flags_override_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# a pinned run\nl = 3\nformat = json\n")
    code, out, _ = run(["pinned", "--config", str(cfg), "--l", "1"])
    assert code == 0
    assert json.loads(out)["summary"]["n_pairs"] == 1


def test_output_file(tmp_path):
    path = tmp_path / "o.csv"
    assert run(["medium", "--omega-points", "5", "--output", str(path)])[0] == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 6 and lines[0].startswith("omega,omega_abs,branch")


def test_ordinary_and_band():
    code, out, _ = run(["ordinary", "--N", "3", "--H=-0.5"])
    assert code == 0 and len(out.splitlines()) == 4
    code, out, _ = run(["band", "--l", "1", "--h-points", "5", "--h-max", "2e-5"])
    assert code == 0 and len(out.splitlines()) == 6


def test_env_threads_and_flag_precedence(monkeypatch):
    monkeypatch.setenv("GAPSPEC_THREADS", "4")
    args = cli._parser().parse_args(["band"])
    assert cli.resolve_config(args).threads == 4
    args = cli._parser().parse_args(["band", "--threads", "2"])
    assert cli.resolve_config(args).threads == 2


def test_band_bytes_independent_of_threads():
    outs = {t: run(["band", "--h-points", "20", "--h-max", "1e-4", "--threads", str(t)])[1]
            for t in (1, 3)}
    assert outs[1] == outs[3]
