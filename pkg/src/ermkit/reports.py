"""Report and plot-data emission.

Everything written here is deterministic given the same inputs: fixed key
order, fixed float formatting, no wall-clock timestamps unless the caller
passes one (or none, in which case the JSON report records the current
UTC time; pass a fixed string for reproducible output).
"""

from __future__ import annotations

import hashlib
import json
import os
from datetime import datetime, timezone

import numpy as np

from .extraction import ErmExtraction
from .fitting import FitResult
from .network import FrequencySweep

_TOOL_NAME = "ermkit"


def to_db(values) -> np.ndarray:
    """Magnitude in dB: 20*log10|x| (-inf for zeros)."""
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(np.abs(np.asarray(values)))


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def fit_result_to_dict(result: FitResult) -> dict:
    return {
        "model": result.model,
        "converged": result.converged,
        "n_points": result.n_points,
        "n_iterations": result.n_iterations,
        "rms_residual": result.rms_residual,
        "params": dict(result.params),
        "ci95": dict(result.ci95),
    }


def fit_report(
    result: FitResult,
    *,
    input_path: str | None = None,
    input_digest: str | None = None,
    timestamp: str | None = None,
    extra: dict | None = None,
) -> str:
    """Render one fit as a JSON report string (sorted keys, indent 2)."""
    from . import __version__

    doc: dict = {
        "tool": {"name": _TOOL_NAME, "version": __version__},
        "timestamp": timestamp
        if timestamp is not None
        else datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "fit": fit_result_to_dict(result),
    }
    if input_path is not None:
        doc["input"] = {"path": input_path}
        if input_digest is not None:
            doc["input"]["sha256"] = input_digest
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n"


def write_fit_report(path: str, result: FitResult, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(fit_report(result, **kwargs))


# ---------------------------------------------------------------------------
# Complex trace CSV (the format emit_plot_data writes and cmd_fit reads).

_TRACE_HEADER = "frequency_hz,re,im"


def write_trace_csv(path: str, frequencies, values) -> None:
    f = np.asarray(frequencies, dtype=float)
    z = np.asarray(values, dtype=complex)
    lines = [_TRACE_HEADER]
    for fi, zi in zip(f, z):
        lines.append(f"{fi:.17g},{zi.real:.17g},{zi.imag:.17g}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Read a frequency_hz,re,im CSV (header optional) into (f, z)."""
    freqs: list[float] = []
    vals: list[complex] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if line_no == 1 and not _is_number(parts[0]):
                continue
            if len(parts) != 3:
                raise ValueError(
                    f"{path} line {line_no}: expected frequency_hz,re,im"
                )
            try:
                freqs.append(float(parts[0]))
                vals.append(complex(float(parts[1]), float(parts[2])))
            except ValueError:
                raise ValueError(
                    f"{path} line {line_no}: not numeric: {line!r}"
                ) from None
    if len(freqs) < 2:
        raise ValueError(f"{path}: need at least 2 rows")
    return np.array(freqs), np.array(vals)


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# Plot data: per-trace CSVs plus a three-panel SVG overview.

_SVG_COLORS = {
    "s11": "#1f77b4",
    "s21": "#d62728",
    "s_cm": "#2ca02c",
    "s_dm": "#9467bd",
}


def _polyline(xs, ys, color: str, trace_id: str | None = None) -> str:
    pts = " ".join(f"{x:.6g},{y:.6g}" for x, y in zip(xs, ys))
    ident = f' id="{trace_id}"' if trace_id else ""
    return (
        f'<polyline{ident} points="{pts}" fill="none" '
        f'stroke="{color}" stroke-width="1"/>'
    )


def _panel_map(values, lo, hi, y0, height):
    span = hi - lo if hi > lo else 1.0
    return y0 + height * (hi - np.asarray(values)) / span


def render_overview_svg(sweep: FrequencySweep, extraction: ErmExtraction) -> str:
    """Three panels: complex-plane traces, |S| in dB, phase in radians.

    The complex-plane polylines carry ids s11, s21, s_cm, s_dm so the file
    is scriptable. Coordinates use %.6g so output is deterministic.
    """
    f = sweep.frequencies
    traces = {
        "s11": sweep.s_param(1, 1),
        "s21": sweep.s_param(2, 1),
        "s_cm": extraction.s_cm_sweep,
        "s_dm": extraction.s_dm_sweep,
    }
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="960" height="340" viewBox="0 0 960 340">',
        '<rect width="960" height="340" fill="white"/>',
    ]

    # panel 1: complex plane with the unit circle
    cx, cy, r = 160.0, 170.0, 140.0
    parts.append(
        f'<circle cx="{cx:g}" cy="{cy:g}" r="{r:g}" fill="none" '
        'stroke="#cccccc" stroke-width="1"/>'
    )
    for name, z in traces.items():
        parts.append(
            _polyline(cx + r * z.real, cy - r * z.imag, _SVG_COLORS[name], name)
        )

    # shared x mapping for the two frequency panels
    fspan = f[-1] - f[0] if f[-1] > f[0] else 1.0

    def xmap(x0, width):
        return x0 + width * (f - f[0]) / fspan

    # panel 2: magnitude in dB
    db = {k: np.maximum(to_db(z), -120.0) for k, z in traces.items()}
    lo = min(float(np.min(v)) for v in db.values())
    hi = max(float(np.max(v)) for v in db.values())
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    lo, hi = lo - pad, hi + pad
    xs = xmap(340.0, 280.0)
    parts.append(
        '<rect x="340" y="30" width="280" height="280" fill="none" '
        'stroke="#cccccc" stroke-width="1"/>'
    )
    for name, v in db.items():
        parts.append(_polyline(xs, _panel_map(v, lo, hi, 30.0, 280.0), _SVG_COLORS[name]))

    # panel 3: phase in radians
    xs = xmap(660.0, 280.0)
    parts.append(
        '<rect x="660" y="30" width="280" height="280" fill="none" '
        'stroke="#cccccc" stroke-width="1"/>'
    )
    for name, z in traces.items():
        parts.append(
            _polyline(
                xs,
                _panel_map(np.angle(z), -np.pi, np.pi, 30.0, 280.0),
                _SVG_COLORS[name],
            )
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot_data(
    sweep: FrequencySweep, extraction: ErmExtraction, out_dir: str
) -> list[str]:
    """Write s_cm.csv, s_dm.csv, mu.csv, and smith.svg into out_dir.

    Returns the written paths. CSV columns are frequency_hz,re,im at full
    precision; the SVG is a static three-panel overview.
    """
    os.makedirs(out_dir, exist_ok=True)
    f = extraction.frequencies
    written = []
    for name, z in (
        ("s_cm", extraction.s_cm_sweep),
        ("s_dm", extraction.s_dm_sweep),
        ("mu", extraction.mu_sweep),
    ):
        path = os.path.join(out_dir, f"{name}.csv")
        write_trace_csv(path, f, z)
        written.append(path)
    svg_path = os.path.join(out_dir, "smith.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(render_overview_svg(sweep, extraction))
    written.append(svg_path)
    return written
