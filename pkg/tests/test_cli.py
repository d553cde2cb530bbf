"""Command-line interface, exercised in process through main()."""

import json
from dataclasses import replace

import numpy as np
import pytest

from ermkit.cli import EXIT_DATA_ERROR, EXIT_OK, main
from ermkit.extraction import extract_erm
from ermkit.lineshapes import ResonatorParams, rlc_reflection
from ermkit.network import FrequencySweep
from ermkit.perturbation import PerturbationGenerator
from ermkit.reports import write_trace_csv
from ermkit.synth import default_cpw_scenario, generate, scenario_to_ini
from ermkit.touchstone import read_touchstone, write_touchstone

F0 = 4.7076e9


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    kv = {}
    for line in captured.out.strip().splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            kv.setdefault(key, []).append(value)
    return code, kv, captured.err


def noiseless_ini(tmp_path, **overrides):
    fields = dict(
        generator=PerturbationGenerator.zero(),
        noise_sigma=0.0,
        global_phase=0.0,
        delays=(0.0, 0.0),
    )
    fields.update(overrides)
    sc = replace(default_cpw_scenario(), **fields)
    path = tmp_path / "scenario.ini"
    path.write_text(scenario_to_ini(sc))
    return path, sc


def test_synth_writes_matching_touchstone(tmp_path, capsys):
    ini, sc = noiseless_ini(tmp_path)
    out = tmp_path / "sweep.s2p"
    code, kv, _ = run_cli(
        capsys, "synth", "--scenario", str(ini), str(out)
    )
    assert code == EXIT_OK
    assert kv["output"] == [str(out)]
    assert float(kv["f0_hz"][0]) == F0
    back = read_touchstone(out)
    np.testing.assert_array_equal(back.s, generate(sc).s)


def test_synth_seed_flag_overrides_scenario(tmp_path, capsys):
    out = tmp_path / "sweep.s2p"
    code, kv, _ = run_cli(capsys, "synth", "--seed", "7", str(out))
    assert code == EXIT_OK
    assert kv["seed"] == ["7"]
    ref = generate(replace(default_cpw_scenario(), seed=7))
    np.testing.assert_array_equal(read_touchstone(out).s, ref.s)


def test_synth_dump_scenario_round_trips(tmp_path, capsys):
    out = tmp_path / "sweep.s2p"
    dump = tmp_path / "dump.ini"
    code, kv, _ = run_cli(
        capsys, "synth", "--dump-scenario", str(dump), str(out)
    )
    assert code == EXIT_OK
    from ermkit.synth import scenario_from_ini

    sc = scenario_from_ini(dump.read_text())
    np.testing.assert_array_equal(read_touchstone(out).s, generate(sc).s)


def test_delay_match_reports_and_is_idempotent(tmp_path, capsys):
    ini, _ = noiseless_ini(tmp_path, delays=(0.0, 37e-12))
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", "--scenario", str(ini), str(raw))
    matched = tmp_path / "matched.s2p"
    code, kv, _ = run_cli(capsys, "delay-match", str(raw), str(matched))
    assert code == EXIT_OK
    assert float(kv["tau2_s"][0]) == pytest.approx(37e-12, rel=1e-2)
    assert float(kv["dm_flatness"][0]) < 1e-6
    again = tmp_path / "again.s2p"
    code, kv2, _ = run_cli(capsys, "delay-match", str(matched), str(again))
    assert code == EXIT_OK
    # the matched file has no residual mismatch left to find
    assert abs(float(kv2["tau2_s"][0])) < 2e-15


def test_extract_erm_writes_artifacts(tmp_path, capsys):
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", str(raw))
    out_dir = tmp_path / "erm"
    code, kv, _ = run_cli(capsys, "extract-erm", str(raw), str(out_dir))
    assert code == EXIT_OK
    for name in ("s_cm.csv", "s_dm.csv", "mu.csv", "smith.svg"):
        assert (out_dir / name).exists()
    assert -28.0 < float(kv["mu_band_average_db"][0]) < -22.0


def test_fit_noiseless_recovers_scenario_parameters(tmp_path, capsys):
    ini, sc = noiseless_ini(tmp_path)
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", "--scenario", str(ini), str(raw))
    code, kv, _ = run_cli(capsys, "fit", "--model", "erm", str(raw))
    assert code == EXIT_OK
    assert float(kv["f0"][0]) == pytest.approx(sc.resonator.f0, rel=1e-9)
    assert float(kv["Qi"][0]) == pytest.approx(sc.resonator.Qi, rel=1e-6)
    assert float(kv["Qc"][0]) == pytest.approx(sc.resonator.Qc, rel=1e-6)
    assert kv["converged"] == ["true"]
    # noiseless data pins Qi to many digits
    assert float(kv["ci95_Qi"][0]) / float(kv["Qi"][0]) < 1e-4


def test_fit_reads_trace_csv(tmp_path, capsys):
    sweep = generate(
        replace(
            default_cpw_scenario(),
            generator=PerturbationGenerator.zero(),
            noise_sigma=0.0,
            global_phase=0.0,
        )
    )
    ext = extract_erm(sweep)
    path = tmp_path / "s_cm.csv"
    write_trace_csv(path, ext.frequencies, ext.s_cm_sweep)
    code, kv, _ = run_cli(capsys, "fit", "--model", "erm", str(path))
    assert code == EXIT_OK
    assert float(kv["Qi"][0]) == pytest.approx(5e5, rel=1e-6)


def test_fit_hanger_model_on_raw_sweep(tmp_path, capsys):
    ini, _ = noiseless_ini(tmp_path)
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", "--scenario", str(ini), str(raw))
    code, kv, _ = run_cli(capsys, "fit", "--model", "hanger", str(raw))
    assert code == EXIT_OK
    assert float(kv["Qi"][0]) == pytest.approx(5e5, rel=1e-4)
    assert "phi0" in kv


def test_fit_reflection_model_on_one_port(tmp_path, capsys):
    p = ResonatorParams(5e9, 3e5, 1e5)
    f = np.linspace(5e9 - 1.5e6, 5e9 + 1.5e6, 256)
    z = 0.98 * np.exp(0.1j) * rlc_reflection(p, f)
    path = tmp_path / "refl.s1p"
    write_touchstone(path, FrequencySweep(f, z.reshape(-1, 1, 1)))
    code, kv, _ = run_cli(capsys, "fit", "--model", "reflection", str(path))
    assert code == EXIT_OK
    assert float(kv["Qi"][0]) == pytest.approx(3e5, rel=1e-6)


def test_fit_multiple_inputs_with_reports(tmp_path, capsys):
    ini, _ = noiseless_ini(tmp_path)
    raw1, raw2 = tmp_path / "a.s2p", tmp_path / "b.s2p"
    run_cli(capsys, "synth", "--scenario", str(ini), str(raw1))
    run_cli(capsys, "synth", "--seed", "3", str(raw2))
    report_dir = tmp_path / "reports"
    code, kv, _ = run_cli(
        capsys,
        "fit",
        "--model",
        "erm",
        "--report",
        str(report_dir),
        "--fixed-timestamp",
        "2026-08-15T00:00:00+00:00",
        str(raw1),
        str(raw2),
    )
    assert code == EXIT_OK
    assert kv["input"] == [str(raw1), str(raw2)]
    for stem in ("a", "b"):
        doc = json.loads((report_dir / f"{stem}.json").read_text())
        assert doc["fit"]["converged"] is True
        assert doc["input"]["sha256"]


def test_fit_report_with_fixed_timestamp_is_reproducible(tmp_path, capsys):
    ini, _ = noiseless_ini(tmp_path)
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", "--scenario", str(ini), str(raw))
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for r in (r1, r2):
        code, _, _ = run_cli(
            capsys,
            "fit",
            "--report",
            str(r),
            "--fixed-timestamp",
            "2026-08-15T00:00:00+00:00",
            str(raw),
        )
        assert code == EXIT_OK
    assert r1.read_bytes() == r2.read_bytes()


def test_fit_band_selection_flags(tmp_path, capsys):
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", str(raw))
    code, kv, _ = run_cli(
        capsys,
        "fit",
        "--model",
        "erm",
        "--f-center",
        str(F0),
        "--f-span",
        "1.6e6",
        str(raw),
    )
    assert code == EXIT_OK
    assert int(kv["n_points"][0]) < 401
    assert float(kv["Qi"][0]) == pytest.approx(5e5, rel=0.05)


def test_compare_agrees_on_the_default_scenario(tmp_path, capsys):
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", str(raw))
    code, kv, _ = run_cli(capsys, "compare", str(raw))
    assert code == EXIT_OK
    assert kv["agree_within_ci95"] == ["true"]
    assert float(kv["ci95_ratio_erm_over_hanger"][0]) < 1.0


def test_config_file_supplies_defaults_and_flags_win(tmp_path, capsys):
    ini, _ = noiseless_ini(tmp_path)
    raw = tmp_path / "raw.s2p"
    run_cli(capsys, "synth", "--scenario", str(ini), str(raw))
    cfg = tmp_path / "ermkit.ini"
    cfg.write_text("[fit]\nmodel = hanger\n")
    # config alone selects the hanger model
    code, kv, _ = run_cli(capsys, "fit", "--config", str(cfg), str(raw))
    assert code == EXIT_OK
    assert "phi0" in kv
    # an explicit flag beats the config value
    code, kv, _ = run_cli(
        capsys, "fit", "--config", str(cfg), "--model", "erm", str(raw)
    )
    assert code == EXIT_OK
    assert "phi0" not in kv


def test_missing_input_is_a_data_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "fit", str(tmp_path / "nope.s2p"))
    assert code == EXIT_DATA_ERROR
    assert "error" in err


def test_malformed_touchstone_is_a_data_error(tmp_path, capsys):
    bad = tmp_path / "bad.s2p"
    bad.write_text("# GHz S RI R 50\n1 0 0\n")
    code, _, err = run_cli(capsys, "delay-match", str(bad), str(tmp_path / "o.s2p"))
    assert code == EXIT_DATA_ERROR
    assert "error" in err


def test_log_env_smoke(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ERMKIT_LOG", "DEBUG")
    raw = tmp_path / "raw.s2p"
    code, _, _ = run_cli(capsys, "synth", str(raw))
    assert code == EXIT_OK
