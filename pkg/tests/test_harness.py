"""Experiment configs, reports, convergence fits and the command line."""

import json
import math
import os

import numpy as np
import pytest

from pathint.errors import ConfigError
from pathint.harness.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main
from pathint.harness.config import load_config, parse_complex, parse_config, parse_int_list
from pathint.harness.convergence import InsufficientPoints, convergence_table, self_convergence_errors
from pathint.harness.expr import parse_polynomial, parse_potential, parse_symbol
from pathint.harness.report import load_schema, read_csv, read_json_rows
from pathint.harness.runner import run_experiment
from pathint.harness.schemes import REGISTRY, schema_document

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg_path(name):
    return os.path.join(CONFIGS, f"{name}.ini")


def write(tmp_path, text, name="exp.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# -- config and expressions ---------------------------------------------------


def test_value_parsers():
    assert parse_complex("1, -2") == 1 - 2j
    assert parse_complex("0.5") == 0.5
    with pytest.raises(ValueError):
        parse_complex("1,2,3")
    assert parse_int_list("1, 1e2,4") == [1, 100, 4]
    with pytest.raises(ValueError):
        parse_int_list("1.5")


def test_config_sections_and_errors():
    cfg = parse_config("[experiment]\nname = a\nscheme = ito\n[physics]\nT = 2  # comment\n")
    assert cfg.physics == {"T": "2"}
    assert cfg.echo()["scheme"] == "ito"
    for bad in ("[physics]\nT = 1\n", "[experiment]\nname = ../x\nscheme = ito\n",
                "[experiment]\nname = a\nscheme = ito\n[extra]\n", "[experiment]\nname = a\nscheme = ito\ncolor = 1\n",
                "not an ini file"):
        with pytest.raises(ConfigError):
            parse_config(bad)
    with pytest.raises(ConfigError):
        load_config("/nonexistent/exp.ini")


def test_scheme_validation_collects_every_error():
    cfg = parse_config("[experiment]\nname = a\nscheme = lattice\n[physics]\nm = -1\nbogus = 3\n")
    with pytest.raises(ConfigError) as info:
        run_experiment(cfg, write=False)
    msgs = info.value.messages
    assert any("physics.m" in m for m in msgs)
    assert any("physics.bogus" in m for m in msgs)
    assert any("physics.T" in m and "required" in m for m in msgs)
    with pytest.raises(ConfigError):
        run_experiment(parse_config("[experiment]\nname = a\nscheme = nope\n"), write=False)


def test_stochastic_rows_need_a_seed():
    text = open(cfg_path("fk_oscillator")).read().replace("seed = 20240611", "")
    with pytest.raises(ConfigError) as info:
        run_experiment(parse_config(text), write=False)
    assert any("seed" in m for m in info.value.messages)


def test_unknown_threshold_is_a_config_error():
    text = open(cfg_path("lattice_free")).read() + "typo = 1\n"
    with pytest.raises(ConfigError):
        run_experiment(parse_config(text), write=False)


def test_polynomial_expressions():
    assert parse_polynomial("0.5*p^2 + 0.5*q^2 - 0.3*q", ("p", "q")) == {(2, 0): 0.5, (0, 2): 0.5, (0, 1): -0.3}
    assert parse_polynomial("1e-3*x - x**2 + 2", ("x",)) == {(1,): 1e-3, (2,): -1.0, (0,): 2.0}
    assert parse_polynomial("p*q + q*p", ("p", "q")) == {(1, 1): 2.0}
    with pytest.raises(ValueError):
        parse_polynomial("0.5*z^2", ("p", "q"))
    with pytest.raises(ValueError):
        parse_polynomial("", ("x",))
    H = parse_symbol("0.5*p^2 + 0.5*q^2")
    assert H(1.0, 2.0) == pytest.approx(2.5)
    assert parse_symbol("relativistic(2)")(0.0, 0.0) == pytest.approx(2.0)
    V = parse_potential("0.5*x^2 + 0.1*x")
    assert V(2.0) == pytest.approx(2.2)
    assert parse_potential("0")(3.0) == 0.0
    with pytest.raises(ValueError):
        parse_potential("x^3")


# -- convergence fits -----------------------------------------------------------


def test_convergence_table_recovers_order():
    Ns = np.array([10, 20, 40, 80])
    fit = convergence_table(Ns, 3.0 / Ns**2)
    assert fit.order == pytest.approx(2.0, abs=1e-12)
    assert fit.order_high - fit.order_low < 1e-10 and fit.monotone and not fit.exact
    noisy = convergence_table(Ns, 3.0 / Ns * (1 + 0.05 * np.array([1, -1, 1, -1])))
    assert noisy.order_low < noisy.order < noisy.order_high


def test_convergence_table_exact_and_insufficient():
    fit = convergence_table([1, 2, 3], [1e-16, 0.0, 2e-15])
    assert fit.exact and math.isnan(fit.order) and fit.order_within(5, 6)
    assert fit.as_dict()["order"] is None
    with pytest.raises(InsufficientPoints):
        convergence_table([1, 2], [0.1, 0.05])
    with pytest.raises(InsufficientPoints):
        convergence_table([1, 2, 3], [0.1, np.nan, 0.05])
    assert np.allclose(self_convergence_errors([1, 1.5, 1.75]), [0.5, 0.25])


# -- schema and reports ------------------------------------------------------------


def test_shipped_schema_matches_registry():
    assert load_schema() == schema_document()
    for name, s in REGISTRY.items():
        names = s.column_names
        assert len(names) == len(set(names))
        assert names[-2:] == ["status", "message"]


def test_csv_and_json_round_trip(tmp_path):
    res = run_experiment(load_config(cfg_path("cameron")), out_dir=str(tmp_path))
    assert res.passed
    rows = read_csv(res.csv_path, res.columns)
    columns, jrows, body = read_json_rows(res.json_path)
    assert columns == list(res.columns)
    assert [c for c, _ in res.columns] == list(rows[0])
    for r, j, orig in zip(rows, jrows, res.rows):
        assert r["N"] == j["N"] == orig["N"]
        assert r["value_re"] == j["value_re"] == orig["value_re"]
    assert rows[0]["bruteforce_re"] is not None and rows[-1]["bruteforce_re"] is None
    assert body["passed"] and body["config"]["physics"]["lambda"] == "1,1"
    # factor doubles every four steps: 2^(64/4) at the end
    assert rows[-1]["factor"] == 2.0**16
    assert body["summary"]["factor_monotone"]
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_ito_report_carries_slope(tmp_path):
    res = run_experiment(load_config(cfg_path("ito_limit")), out_dir=str(tmp_path))
    assert res.passed
    assert res.record["summary"]["slope"] == pytest.approx(-0.5, abs=0.05)
    assert [r["nu"] for r in res.rows] == [1e2, 1e3, 1e4, 1e5]


def test_reruns_are_bitwise_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cfg = load_config(cfg_path("fk_oscillator"))
    text = open(cfg_path("fk_oscillator")).read().replace("samples = 100000", "samples = 4000")
    cfg = parse_config(text)
    ra = run_experiment(cfg, out_dir=str(a), threads=1)
    rb = run_experiment(cfg, out_dir=str(b), threads=3)
    for ext in ("csv", "json"):
        assert (a / f"fk_oscillator.{ext}").read_bytes() == (b / f"fk_oscillator.{ext}").read_bytes()
    rc = run_experiment(cfg, seed=99, write=False)
    mc = [r for r in ra.rows if r.get("stderr") is not None]
    assert mc and [r["value_re"] for r in mc] != [r["value_re"] for r in rc.rows if r.get("stderr") is not None]
    assert rb.record["seed"] == 20240611 and rc.record["seed"] == 99


def test_failed_rows_are_recorded_not_raised(tmp_path):
    text = ("[experiment]\nname = bad\nscheme = cs\n[physics]\nT = 1\nH = 0.5*p^2 + 0.25*q^4\n"
            "pins = 0.3, 0.5, -0.2, 0.1\n[numerics]\nN_list = 1, 2\n")
    res = run_experiment(parse_config(text), out_dir=str(tmp_path))
    assert not res.passed
    assert {r["status"] for r in res.rows} - {"ok"}
    assert all(r["message"] for r in res.rows if r["status"] != "ok")


# -- command line -------------------------------------------------------------------


def test_cli_run_exit_codes(tmp_path, capsys):
    assert main(["run", "--config", cfg_path("lattice_free"), "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "lattice_free.csv").exists()
    strict = write(tmp_path, open(cfg_path("lattice_harmonic")).read().replace("order_min = 0.8", "order_min = 1.5"))
    assert main(["run", "--config", strict, "--out", str(tmp_path)]) == EXIT_NUMERIC
    broken = write(tmp_path, "[experiment]\nname = x\nscheme = lattice\n[physics]\nT = -1\n", "broken.ini")
    assert main(["run", "--config", broken]) == EXIT_CONFIG
    assert "physics.T" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "missing.ini")]) == EXIT_CONFIG


def test_cli_timing_column(tmp_path):
    assert main(["run", "--config", cfg_path("lattice_free"), "--out", str(tmp_path), "--timing"]) == EXIT_OK
    header = (tmp_path / "lattice_free.csv").read_text().splitlines()[0]
    assert header.endswith("runtime_s")


def test_cli_argument_errors():
    with pytest.raises(SystemExit) as info:
        main(["run", "--config", "x.ini", "--seed", "-1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["run", "--config", "x.ini", "--threads", "0"])


def test_cli_schema_and_schemes(capsys):
    assert main(["schema"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == schema_document()
    assert main(["schemes"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in REGISTRY:
        assert f"{name}:" in out


def test_cli_check_single_criterion(capsys):
    assert main(["check", "--only", "1"]) == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 and out[0].split()[:2] == ["[PASS]", "1"]


@pytest.mark.slow
@pytest.mark.parametrize("name", ["lattice_free", "lattice_harmonic", "cameron", "ito_limit", "ps_relativistic",
                                  "cs_oscillator"])
def test_shipped_configs_pass(name, tmp_path):
    assert main(["run", "--config", cfg_path(name), "--out", str(tmp_path)]) == EXIT_OK
