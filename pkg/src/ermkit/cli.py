"""Command-line front end.

Subcommands: synth, delay-match, extract-erm, fit, compare. Machine
readable key=value pairs go to standard output and generated artifacts to
files; diagnostics and summaries go to standard error (verbosity via the
ERMKIT_LOG environment variable). Exit codes: 0 success, 2 data or input
errors, 3 fit did not converge.

Option precedence is flags > config file > built-in defaults. The config
file (--config) is an INI whose section names match the subcommands, with
keys equal to the long flag names with underscores:

    [fit]
    model = hanger
    bracket_ps = 100

Commands never modify their input files. fit and compare work on one
resonance per invocation; --f-span crops the band around --f-center, or
around the most prominent dip when no center is given. Note that fit and
extract-erm do not remove a common (cable) delay: a common delay estimate
from a narrow band around a resonance is biased by the resonance's own
phase winding, so run delay-match once on a wide sweep first.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from .exceptions import ErmkitError
from .extraction import (
    extract_erm,
    find_resonance_dips,
    match_port_delay,
    remove_common_delay,
)
from .fitting import FitConfig, fit_lineshape
from .network import FrequencySweep, ReferencePlaneShift, shift_reference_planes
from .reports import (
    emit_plot_data,
    fit_report,
    fit_result_to_dict,
    read_trace_csv,
    sha256_file,
)
from .synth import default_cpw_scenario, generate, scenario_from_ini, scenario_to_ini
from .touchstone import read_touchstone, write_touchstone

EXIT_OK = 0
EXIT_DATA_ERROR = 2
EXIT_NOT_CONVERGED = 3

log = logging.getLogger("ermkit")

_MODEL_FLAGS = ("erm", "hanger", "reflection", "lossy-erm")


def _emit(key: str, value) -> None:
    if isinstance(value, bool):
        value = "true" if value else "false"
    elif isinstance(value, float):
        value = f"{value:.17g}"
    print(f"{key}={value}")


def _load_config_section(path: str | None, command: str) -> dict:
    if path is None:
        return {}
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise OSError(f"cannot read config file {path}")
    if not cp.has_section(command):
        return {}
    return dict(cp[command])


def _resolve(args, cfg: dict, name: str, default=None, cast=None):
    """flags > config file > default."""
    value = getattr(args, name)
    if value is None:
        value = cfg.get(name)
    if value is None:
        return default
    return cast(value) if cast is not None and isinstance(value, str) else value


def _require_two_port(sweep: FrequencySweep, path: str) -> None:
    if sweep.n_ports != 2:
        raise ValueError(f"{path}: expected a 2-port sweep, got {sweep.n_ports}-port")


def _select_band(
    sweep: FrequencySweep, f_center: float | None, f_span: float | None
) -> FrequencySweep:
    """Crop to f_center +- f_span/2; the dip finder supplies a missing
    center and no --f-span means no crop."""
    if f_span is None:
        return sweep
    if f_center is None:
        dips = find_resonance_dips(sweep)
        if dips:
            f_center = dips[0].frequency
            log.info("band center from dip finder: %.6g Hz", f_center)
        else:
            f_center = 0.5 * (sweep.frequencies[0] + sweep.frequencies[-1])
            log.warning("no dip found; centering band on mid-sweep")
    cropped = sweep.crop(f_center - f_span / 2.0, f_center + f_span / 2.0)
    if cropped.n_points < 16:
        raise ValueError(
            f"band selection left {cropped.n_points} points; widen --f-span"
        )
    return cropped


def _crop_trace(f, z, f_center, f_span):
    if f_span is None:
        return f, z
    center = f_center if f_center is not None else 0.5 * (f[0] + f[-1])
    mask = (f >= center - f_span / 2.0) & (f <= center + f_span / 2.0)
    if np.count_nonzero(mask) < 16:
        raise ValueError("band selection left fewer than 16 points; widen --f-span")
    return f[mask], z[mask]


def _bracket(args, cfg) -> tuple[float, float]:
    ps = _resolve(args, cfg, "bracket_ps", default=1000.0, cast=float)
    if ps <= 0:
        raise ValueError(f"--bracket-ps must be positive, got {ps:g}")
    return (-ps * 1e-12, ps * 1e-12)


def _timestamp(args, cfg) -> str:
    fixed = _resolve(args, cfg, "fixed_timestamp")
    if fixed is not None:
        return fixed
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_synth(args) -> int:
    cfg = _load_config_section(args.config, "synth")
    scenario_path = _resolve(args, cfg, "scenario")
    if scenario_path is not None:
        with open(scenario_path, encoding="utf-8") as fh:
            scenario = scenario_from_ini(fh.read())
    else:
        scenario = default_cpw_scenario()
    seed = _resolve(args, cfg, "seed", cast=int)
    if seed is not None:
        scenario = replace(scenario, seed=seed)

    sweep = generate(scenario)
    write_touchstone(
        args.output, sweep, comments=("synthetic hanger-resonator sweep",)
    )
    dump = _resolve(args, cfg, "dump_scenario")
    if dump is not None:
        with open(dump, "w", encoding="utf-8") as fh:
            fh.write(scenario_to_ini(scenario))
        _emit("scenario", dump)
    log.info("synthesized %d points to %s", sweep.n_points, args.output)
    _emit("output", args.output)
    _emit("f0_hz", scenario.resonator.f0)
    _emit("qi", scenario.resonator.Qi)
    _emit("qc", scenario.resonator.Qc)
    _emit("n_points", scenario.n_points)
    _emit("noise_sigma", scenario.noise_sigma)
    _emit("seed", scenario.seed)
    return EXIT_OK


def cmd_delay_match(args) -> int:
    cfg = _load_config_section(args.config, "delay-match")
    f_center = _resolve(args, cfg, "f_center", cast=float)
    f_span = _resolve(args, cfg, "f_span", cast=float)
    bracket = _bracket(args, cfg)

    sweep = read_touchstone(args.input)
    _require_two_port(sweep, args.input)

    # estimate on the selected band, apply to the full sweep
    band = _select_band(sweep, f_center, f_span)
    _, common = remove_common_delay(band)
    full = shift_reference_planes(
        sweep, ReferencePlaneShift(np.array([-common / 2.0, -common / 2.0]))
    )
    band = _select_band(full, f_center, f_span)
    _, tau2, flatness = match_port_delay(band, bracket=bracket)
    full = shift_reference_planes(full, ReferencePlaneShift(np.array([0.0, -tau2])))

    write_touchstone(args.output, full, comments=("delay-matched sweep",))
    log.info("common delay %.4g s, port-2 excess %.4g s", common, tau2)
    _emit("output", args.output)
    _emit("common_delay_s", common)
    _emit("tau2_s", tau2)
    _emit("dm_flatness", flatness)
    return EXIT_OK


def cmd_extract_erm(args) -> int:
    cfg = _load_config_section(args.config, "extract-erm")
    f_center = _resolve(args, cfg, "f_center", cast=float)
    f_span = _resolve(args, cfg, "f_span", cast=float)
    bracket = _bracket(args, cfg)

    sweep = read_touchstone(args.input)
    _require_two_port(sweep, args.input)
    band = _select_band(sweep, f_center, f_span)
    corrected, tau2, flatness = match_port_delay(band, bracket=bracket)
    extraction = extract_erm(corrected, tau2=tau2)
    written = emit_plot_data(corrected, extraction, args.out_dir)

    mu_db = 20.0 * np.log10(max(float(np.mean(np.abs(extraction.mu_sweep))), 1e-300))
    _emit("tau2_s", tau2)
    _emit("dm_flatness", flatness)
    _emit("normalization_phase_rad", extraction.normalization_phase)
    _emit("mu_band_average_db", mu_db)
    for path in written:
        _emit("wrote", path)
    return EXIT_OK


def _fit_trace_for_model(path, model, band_args, bracket):
    """Load one input and produce the (f, z, meta) the model fits.

    .s2p with erm/lossy_erm runs the port match and ERM extraction and
    fits the normalized common mode; hanger fits the measured S21 and
    reflection the measured S11. .s1p fits its single reflection trace;
    .csv fits the trace as-is (e.g. s_cm.csv from extract-erm).
    """
    f_center, f_span = band_args
    ext = os.path.splitext(path)[1].lower()
    meta: dict = {}
    if ext == ".csv":
        f, z = read_trace_csv(path)
        f, z = _crop_trace(f, z, f_center, f_span)
        return f, z, meta
    sweep = read_touchstone(path)
    if sweep.n_ports == 1:
        band = _select_band(sweep, f_center, f_span)
        return band.frequencies, band.s_param(1, 1), meta
    _require_two_port(sweep, path)
    band = _select_band(sweep, f_center, f_span)
    if model in ("erm", "lossy_erm"):
        corrected, tau2, flatness = match_port_delay(band, bracket=bracket)
        extraction = extract_erm(corrected, tau2=tau2)
        meta = {"tau2_s": tau2, "dm_flatness": flatness}
        return extraction.frequencies, extraction.s_cm_sweep, meta
    if model == "hanger":
        return band.frequencies, band.s_param(2, 1), meta
    return band.frequencies, band.s_param(1, 1), meta


def cmd_fit(args) -> int:
    cfg = _load_config_section(args.config, "fit")
    model = _resolve(args, cfg, "model", default="erm").replace("-", "_")
    f_center = _resolve(args, cfg, "f_center", cast=float)
    f_span = _resolve(args, cfg, "f_span", cast=float)
    bracket = _bracket(args, cfg)
    report_target = _resolve(args, cfg, "report")
    timestamp = _timestamp(args, cfg)

    fit_config = FitConfig(model=model)
    multiple = len(args.inputs) > 1
    if multiple and report_target is not None:
        os.makedirs(report_target, exist_ok=True)

    all_converged = True
    for path in args.inputs:
        f, z, meta = _fit_trace_for_model(path, model, (f_center, f_span), bracket)
        result = fit_lineshape(f, z, fit_config)
        all_converged &= result.converged
        if not result.converged:
            log.error("%s: fit did not converge after %d iterations",
                      path, result.n_iterations)

        if multiple:
            _emit("input", path)
        for name in result.param_names:
            _emit(name, result.params[name])
        for name in result.param_names:
            _emit(f"ci95_{name}", result.ci95[name])
        for key, value in meta.items():
            _emit(key, value)
        _emit("rms_residual", result.rms_residual)
        _emit("n_points", result.n_points)
        _emit("n_iterations", result.n_iterations)
        _emit("converged", result.converged)

        if report_target is not None:
            if multiple:
                stem = os.path.splitext(os.path.basename(path))[0]
                report_path = os.path.join(report_target, stem + ".json")
            else:
                report_path = report_target
            text = fit_report(
                result,
                input_path=path,
                input_digest=sha256_file(path),
                timestamp=timestamp,
                extra={"pipeline": meta} if meta else None,
            )
            with open(report_path, "w", encoding="utf-8") as fh:
                fh.write(text)
            log.info("report written to %s", report_path)
    return EXIT_OK if all_converged else EXIT_NOT_CONVERGED


def cmd_compare(args) -> int:
    cfg = _load_config_section(args.config, "compare")
    f_center = _resolve(args, cfg, "f_center", cast=float)
    f_span = _resolve(args, cfg, "f_span", cast=float)
    bracket = _bracket(args, cfg)
    report_target = _resolve(args, cfg, "report")
    timestamp = _timestamp(args, cfg)

    sweep = read_touchstone(args.input)
    _require_two_port(sweep, args.input)
    band = _select_band(sweep, f_center, f_span)
    corrected, tau2, flatness = match_port_delay(band, bracket=bracket)
    extraction = extract_erm(corrected, tau2=tau2)

    erm_result = fit_lineshape(
        extraction.frequencies, extraction.s_cm_sweep, FitConfig(model="erm")
    )
    hanger_result = fit_lineshape(
        corrected.frequencies, corrected.s_param(2, 1), FitConfig(model="hanger")
    )

    qi_erm = erm_result.params["Qi"]
    qi_hanger = hanger_result.params["Qi"]
    ci_erm = erm_result.ci95["Qi"]
    ci_hanger = hanger_result.ci95["Qi"]
    rss = float(np.hypot(ci_erm, ci_hanger))
    diff = abs(qi_erm - qi_hanger)
    comparison = {
        "qi_erm": qi_erm,
        "qi_hanger": qi_hanger,
        "qi_abs_diff": diff,
        "ci95_qi_erm": ci_erm,
        "ci95_qi_hanger": ci_hanger,
        "rss_ci95": rss,
        "agree_within_ci95": bool(diff <= rss),
        "ci95_ratio_erm_over_hanger": ci_erm / ci_hanger if ci_hanger > 0 else None,
        "tau2_s": tau2,
        "dm_flatness": flatness,
    }
    for key, value in comparison.items():
        _emit(key, value)

    if report_target is not None:
        from . import __version__

        doc = {
            "tool": {"name": "ermkit", "version": __version__},
            "timestamp": timestamp,
            "input": {"path": args.input, "sha256": sha256_file(args.input)},
            "erm_fit": fit_result_to_dict(erm_result),
            "hanger_fit": fit_result_to_dict(hanger_result),
            "comparison": comparison,
        }
        with open(report_target, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n")
        log.info("report written to %s", report_target)

    if not (erm_result.converged and hanger_result.converged):
        log.error("at least one fit did not converge")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and entry point.


def build_parser() -> argparse.ArgumentParser:
    from . import __version__

    parser = argparse.ArgumentParser(
        prog="ermkit",
        description="Reflection-mode analysis of hanger-coupled resonators.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", metavar="INI", help="config file with per-command sections"
    )
    band = argparse.ArgumentParser(add_help=False)
    band.add_argument("--f-center", type=float, dest="f_center", metavar="HZ")
    band.add_argument("--f-span", type=float, dest="f_span", metavar="HZ")
    bracket = argparse.ArgumentParser(add_help=False)
    bracket.add_argument(
        "--bracket-ps",
        type=float,
        dest="bracket_ps",
        metavar="PS",
        help="half-width of the port-delay search bracket (default 1000)",
    )
    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--report", metavar="JSON")
    report.add_argument(
        "--fixed-timestamp",
        dest="fixed_timestamp",
        metavar="ISO8601",
        help="timestamp to embed in reports (for reproducible output)",
    )

    p = sub.add_parser(
        "synth", parents=[common], help="generate a synthetic two-port sweep"
    )
    p.add_argument("output", help="output .s2p path")
    p.add_argument("--scenario", metavar="INI", help="scenario description")
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--dump-scenario",
        dest="dump_scenario",
        metavar="INI",
        help="also write the scenario that was used",
    )
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser(
        "delay-match",
        parents=[common, band, bracket],
        help="remove the common delay, match the port delays",
    )
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(handler=cmd_delay_match)

    p = sub.add_parser(
        "extract-erm",
        parents=[common, band, bracket],
        help="recover the reflection mode; write trace CSVs and an SVG",
    )
    p.add_argument("input")
    p.add_argument("out_dir")
    p.set_defaults(handler=cmd_extract_erm)

    p = sub.add_parser(
        "fit", parents=[common, band, bracket, report], help="fit a lineshape"
    )
    p.add_argument("inputs", nargs="+", help=".s2p, .s1p, or trace .csv")
    p.add_argument("--model", choices=_MODEL_FLAGS)
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser(
        "compare",
        parents=[common, band, bracket, report],
        help="fit the reflection-mode and hanger paths on the same band",
    )
    p.add_argument("input")
    p.set_defaults(handler=cmd_compare)

    return parser


def main(argv=None) -> int:
    level_name = os.environ.get("ERMKIT_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ErmkitError, ValueError, OSError) as exc:
        print(f"ermkit: error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
