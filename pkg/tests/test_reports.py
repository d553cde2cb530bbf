"""Reports, trace CSVs, and plot artifacts."""

import hashlib
import json
import xml.etree.ElementTree as ET
from dataclasses import replace

import numpy as np
import pytest

from ermkit.extraction import extract_erm
from ermkit.fitting import fit_lineshape
from ermkit.lineshapes import ResonatorParams, erm_response
from ermkit.reports import (
    emit_plot_data,
    fit_report,
    fit_result_to_dict,
    read_trace_csv,
    render_overview_svg,
    sha256_file,
    to_db,
    write_fit_report,
    write_trace_csv,
)
from ermkit.synth import default_cpw_scenario, generate

PARAMS = ResonatorParams(5e9, 3e5, 1e5)
FREQS = np.linspace(5e9 - 1.5e6, 5e9 + 1.5e6, 201)


def make_result():
    return fit_lineshape(FREQS, erm_response(PARAMS, FREQS))


def test_to_db_literal():
    assert to_db(0.5) == pytest.approx(-6.0206, abs=1e-4)
    vals = to_db(np.array([1.0, 0.0]))
    assert vals[0] == 0.0
    assert vals[1] == -np.inf


def test_sha256_file_matches_hashlib(tmp_path):
    path = tmp_path / "blob.bin"
    path.write_bytes(b"ermkit test payload")
    expected = hashlib.sha256(b"ermkit test payload").hexdigest()
    assert sha256_file(path) == expected


def test_trace_csv_round_trip(tmp_path):
    rng = np.random.default_rng(9)
    z = rng.standard_normal(33) + 1j * rng.standard_normal(33)
    path = tmp_path / "trace.csv"
    write_trace_csv(path, FREQS[:33], z)
    f, back = read_trace_csv(path)
    np.testing.assert_array_equal(f, FREQS[:33])
    np.testing.assert_array_equal(back, z)
    assert path.read_text().splitlines()[0] == "frequency_hz,re,im"


def test_trace_csv_reads_headerless_files(tmp_path):
    path = tmp_path / "raw.csv"
    path.write_text("1e9,0.5,0.25\n2e9,0.5,0.25\n")
    f, z = read_trace_csv(path)
    np.testing.assert_array_equal(f, [1e9, 2e9])
    np.testing.assert_array_equal(z, [0.5 + 0.25j, 0.5 + 0.25j])


def test_trace_csv_error_reports_line_number(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("frequency_hz,re,im\n1e9,0.5,0.25\n2e9,0.5\n")
    with pytest.raises(ValueError, match="line 3"):
        read_trace_csv(path)


def test_trace_csv_needs_two_rows(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("1e9,0.5,0.25\n")
    with pytest.raises(ValueError):
        read_trace_csv(path)


def test_fit_result_to_dict_shape():
    doc = fit_result_to_dict(make_result())
    assert doc["model"] == "erm"
    assert doc["converged"] is True
    assert set(doc["params"]) == {"f0", "Qi", "Qc", "amplitude", "phase_offset"}
    assert set(doc["ci95"]) == set(doc["params"])
    json.dumps(doc)


def test_fit_report_deterministic_with_fixed_timestamp(tmp_path):
    result = make_result()
    a = fit_report(result, timestamp="2026-08-15T00:00:00+00:00")
    b = fit_report(result, timestamp="2026-08-15T00:00:00+00:00")
    assert a == b
    doc = json.loads(a)
    assert doc["timestamp"] == "2026-08-15T00:00:00+00:00"
    assert doc["tool"]["name"] == "ermkit"
    assert a.endswith("\n")


def test_fit_report_includes_input_provenance(tmp_path):
    path = tmp_path / "input.s2p"
    path.write_bytes(b"fake")
    text = fit_report(
        make_result(),
        input_path=str(path),
        input_digest=sha256_file(path),
        extra={"band": "full"},
    )
    doc = json.loads(text)
    assert doc["input"]["path"] == str(path)
    assert doc["input"]["sha256"] == hashlib.sha256(b"fake").hexdigest()
    assert doc["band"] == "full"


def test_write_fit_report(tmp_path):
    path = tmp_path / "report.json"
    write_fit_report(path, make_result(), timestamp="2026-08-15T00:00:00+00:00")
    doc = json.loads(path.read_text())
    assert doc["fit"]["model"] == "erm"


def test_render_overview_svg_is_wellformed():
    sweep = generate(replace(default_cpw_scenario(), noise_sigma=0.0))
    svg = render_overview_svg(sweep, extract_erm(sweep))
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    ids = {el.get("id") for el in root.iter() if el.get("id")}
    assert {"s_cm", "s_dm"} <= ids
    assert "<script" not in svg


def test_emit_plot_data_writes_the_artifact_set(tmp_path):
    sweep = generate(replace(default_cpw_scenario(), noise_sigma=0.0))
    paths = emit_plot_data(sweep, extract_erm(sweep), tmp_path)
    names = sorted(p.rsplit("/", 1)[-1] for p in map(str, paths))
    assert names == ["mu.csv", "s_cm.csv", "s_dm.csv", "smith.svg"]
    f, z = read_trace_csv(tmp_path / "s_cm.csv")
    assert f.size == sweep.n_points
