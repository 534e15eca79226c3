import json

import pytest

from qpcavity.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, dumps, run


def test_modes_n50(capsys):
    assert run(["modes", "rb87_paper", "--n", "50"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["outputs"]["modes"][0]["omega_hz"] == pytest.approx(170, rel=0.1)


def test_empty_config_is_usage_error(tmp_path):
    p = tmp_path / "e.json"
    p.write_text("{}")
    assert run(["budget", str(p)]) == EXIT_USAGE
    assert run([]) == EXIT_USAGE
    assert run(["budget", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_byte_stable_reports(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["budget", "rb87_paper", "--out", str(d), "--quiet"]) == EXIT_OK
    assert (a / "budget.json").read_bytes() == (b / "budget.json").read_bytes()


def test_reproduce_exit_codes(tmp_path):
    # the repeated-measurement frequency row is a known mismatch (see the ledger)
    assert run(["reproduce-paper", "rb87_paper.json", "--quiet"]) == EXIT_MISMATCH
    assert run(["reproduce-paper", "rb87_paper.json", "--quiet",
                "--no-fail-on-mismatch"]) == EXIT_OK
    assert run(["reproduce-paper", "rb87_paper", "--quiet", "--out", str(tmp_path)]) == EXIT_MISMATCH
    rows = json.loads((tmp_path / "reproduce-paper.json").read_text())["outputs"]["rows"]
    assert [r["key"] for r in rows if not r["pass"]] == ["force_equivalent_frequency_repeated_hz"]


def test_csv_output(tmp_path):
    assert run(["modes", "rb87_paper", "--out", str(tmp_path), "--format", "csv",
                "--quiet"]) == EXIT_OK
    assert (tmp_path / "modes.csv").read_text().startswith("n,k_n,omega_hz")


@pytest.mark.parametrize("cmd", ["trapezoid", "mzi", "pulsed-readout", "force-gradient",
                                 "damping", "coefficients"])
def test_subcommands_run(cmd, tmp_path):
    assert run([cmd, "rb87_paper", "--quiet", "--out", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / f"{cmd}.json").read_text())
    assert rep["scenario"] == cmd


def test_dumps_format():
    s = dumps({"b": 0.1, "a": [1, 2.5], "c": float("nan"), "z": 1 + 2j})
    assert s.index('"a"') < s.index('"b"')
    assert "0.10000000000000001" in s and '"nan"' in s
