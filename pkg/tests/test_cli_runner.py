import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from decolab.cli_runner import (
    Scenario,
    load_scenario_file,
    main,
    parse_flat,
    run_scenario,
    validate_scenario,
)
from decolab.errors import ConfigError
from decolab.scenarios import BUILTINS, list_scenarios

FAST_CAT = {
    "name": "t",
    "model": "gravity",
    "alpha1": 3.0,
    "alpha2": -3.0,
    "coupling_over_pi": 0.001,
    "beta": 1.0,
    "cutoff": 1000.0,
    "observables": ["visibility"],
    "times": [0.5 * math.pi, 1.5 * math.pi],
}


def data_section(path):
    with open(path) as fh:
        return [line for line in fh if not line.startswith("#")]


def test_parse_flat_values():
    raw = parse_flat(
        "# comment\n"
        "model = gravity\n"
        "alpha1 = 3\n"
        "times = 0.5pi, 1.5pi, inf\n"
        "observables = visibility\n"
        "include_kerr_phase = true\n"
    )
    assert raw["model"] == "gravity"
    assert raw["alpha1"] == 3
    assert raw["times"] == [0.5 * math.pi, 1.5 * math.pi, math.inf]
    assert raw["include_kerr_phase"] is True


def test_parse_flat_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_flat("just a line without equals\n")
    with pytest.raises(ConfigError):
        parse_flat("a = 1\na = 2\n")


def test_unknown_key_named_in_error():
    raw = dict(FAST_CAT)
    raw["gamm"] = 0.1
    with pytest.raises(ConfigError, match="gamm"):
        validate_scenario(raw)


def test_unknown_model_and_observable():
    raw = dict(FAST_CAT, model="gravityy")
    with pytest.raises(ConfigError, match="gravityy"):
        validate_scenario(raw)
    raw = dict(FAST_CAT, observables=["wignerr"])
    with pytest.raises(ConfigError, match="wignerr"):
        validate_scenario(raw)


def test_model_specific_keys_rejected():
    raw = dict(FAST_CAT)
    raw["gamma"] = 0.01  # a qed key on the gravity model
    with pytest.raises(ConfigError, match="gamma"):
        validate_scenario(raw)


def test_time_spec_validation():
    raw = dict(FAST_CAT)
    del raw["times"]
    with pytest.raises(ConfigError, match="time"):
        validate_scenario(raw)
    raw = dict(FAST_CAT, t_max=10.0)
    with pytest.raises(ConfigError):
        validate_scenario(raw)


def test_amplitude_spec_validation():
    raw = dict(FAST_CAT)
    del raw["alpha2"]
    with pytest.raises(ConfigError):
        validate_scenario(raw)
    raw = dict(FAST_CAT, alpha=2.0)
    with pytest.raises(ConfigError):
        validate_scenario(raw)


def test_json_and_flat_equivalent(tmp_path):
    flat = tmp_path / "s.ini"
    flat.write_text(
        "name = same\nmodel = gravity\nalpha1 = 3\nalpha2 = -3\n"
        "observables = visibility\ntimes = 0.5pi\n"
    )
    as_json = tmp_path / "s.json"
    as_json.write_text(
        json.dumps(
            {
                "name": "same",
                "model": "gravity",
                "alpha1": 3,
                "alpha2": -3,
                "observables": ["visibility"],
                "times": [0.5 * math.pi],
            }
        )
    )
    s1 = validate_scenario(load_scenario_file(str(flat)))
    s2 = validate_scenario(load_scenario_file(str(as_json)))
    assert s1.digest() == s2.digest()


def test_run_writes_expected_schema(tmp_path):
    sc = validate_scenario(dict(FAST_CAT, out=str(tmp_path)))
    paths = run_scenario(sc)
    assert len(paths) == 1
    lines = data_section(paths[0])
    assert lines[0].strip() == "tau,nu,fringe_spacing,status"
    rows = [line.strip().split(",") for line in lines[1:]]
    assert len(rows) == 2
    assert all(r[3] == "ok" for r in rows)
    nus = [float(r[1]) for r in rows]
    assert all(0.0 <= v <= 1.0 for v in nus)


def test_rerun_is_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        sc = validate_scenario(dict(FAST_CAT, out=str(out)))
        run_scenario(sc)
    d1 = data_section(out1 / "t__visibility.csv")
    d2 = data_section(out2 / "t__visibility.csv")
    assert d1 == d2


def test_wigner_csv_long_form(tmp_path):
    raw = dict(FAST_CAT, observables=["wigner"], times=[0.0],
               grid_points=41, grid_range=8.5, out=str(tmp_path))
    sc = validate_scenario(raw)
    paths = run_scenario(sc)
    lines = data_section(paths[0])
    assert lines[0].strip() == "x,p,w"
    assert len(lines) - 1 == 41 * 41
    first = lines[1].split(",")
    assert float(first[0]) == -8.5 and float(first[1]) == -8.5


def test_moments_schema_sde(tmp_path):
    raw = {
        "name": "sde",
        "model": "qed_sde",
        "alpha": 2.0,
        "gamma": 0.01,
        "nbar": 1.0,
        "n_traj": 32,
        "dt": 1e-3,
        "observables": ["moments"],
        "t_max": 2.0,
        "stride": 0.5,
        "out": str(tmp_path),
    }
    paths = run_scenario(validate_scenario(raw))
    lines = data_section(paths[0])
    assert lines[0].strip() == "tau,re_mean_a,im_mean_a,mean_n,stderr_n"
    assert len(lines) - 1 == 5
    first = [float(v) for v in lines[1].split(",")]
    assert first[1] == pytest.approx(2.0)  # Re<a>(0) = alpha
    assert first[3] == pytest.approx(4.0)  # |a|^2(0) = alpha^2


def test_qed_lindblad_scenario(tmp_path):
    raw = {
        "name": "q",
        "model": "qed_lindblad",
        "alpha1": 1.5,
        "alpha2": -1.5,
        "gamma": 0.01,
        "nbar": 0.5,
        "observables": ["moments"],
        "t_max": 2.0,
        "stride": 0.5,
        "out": str(tmp_path),
    }
    paths = run_scenario(validate_scenario(raw))
    lines = data_section(paths[0])
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    # even cat: <n>(0) = a^2 tanh(a^2)
    assert rows[0][3] == pytest.approx(2.25 * math.tanh(2.25), abs=1e-9)


def test_main_exit_codes(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("model = gravity\nalpha1 = 3\nalpha2 = -3\ngamm = 0.1\n"
                   "observables = visibility\ntimes = 1\n")
    assert main(["run", str(bad)]) == 2
    assert main(["run", "no_such_builtin"]) == 2
    # runtime (model) error: cat too large for the requested cutoff
    trunc = tmp_path / "trunc.ini"
    trunc.write_text("model = gravity\nalpha1 = 6\nalpha2 = -6\ndim = 10\n"
                     "observables = visibility\ntimes = 0.5pi\n"
                     f"out = {tmp_path}\n")
    assert main(["run", str(trunc)]) == 3
    good = tmp_path / "good.ini"
    good.write_text("name = ok\nmodel = gravity\nalpha1 = 2\nalpha2 = -2\n"
                    "observables = visibility\ntimes = 0.5pi\n"
                    f"out = {tmp_path}\n")
    assert main(["run", str(good)]) == 0
    assert (tmp_path / "ok__visibility.csv").exists()


def test_main_list_and_version(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("fig1", "fig2", "fig3a", "fig3b", "fig3c", "fig4", "fig5a", "fig6", "fig7", "fig8"):
        assert name in out
    assert main(["version"]) == 0
    assert capsys.readouterr().out.strip() == "0.1.0"


def test_list_carries_figure_parameters():
    text = list_scenarios()
    assert "beta=1" in text and "cutoff=1000" in text and "C/pi=0.001" in text
    assert "n=3 and n=5" in text and "Qinv=0.001" in text
    assert "Qinv=0.0005" in text and "alpha=5" in text


def test_override_changes_hash(tmp_path):
    sc1 = validate_scenario(dict(FAST_CAT))
    sc2 = validate_scenario(dict(FAST_CAT, seed=7))
    assert sc1.digest() != sc2.digest()


def test_cli_entry_point_subprocess(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "decolab.cli_runner", "list"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "fig5a" in proc.stdout


def test_builtin_definitions_all_validate():
    for name, raws in BUILTINS.items():
        for raw in raws:
            sc = validate_scenario(dict(raw))
            assert isinstance(sc, Scenario)
            assert sc.model in ("gravity", "qed_lindblad", "qed_sde", "qed_single_photon")
