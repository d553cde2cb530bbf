"""Touchstone v1.1 reading and writing for 1-, 2-, and 3-port sweeps.

Reading is lenient where the format is (option tokens in any order,
default option line "# GHz S MA R 50", '!' comments anywhere) and strict
where data integrity matters: one option line only, strictly increasing
frequencies, exact column counts, at least two frequency points. Any '['
keyword means a Touchstone 2.0 file, which is rejected outright. All
errors carry the 1-based line number.

Writing always emits Hz / real-imaginary at full double precision, so a
write/read round trip is exact to 1e-15 relative.

The 2-port column order follows the v1 quirk: S11 S21 S12 S22.
"""

from __future__ import annotations

import os

import numpy as np

from .exceptions import (
    ColumnCountMismatchError,
    MalformedOptionLineError,
    NonMonotonicFrequencyError,
    TouchstoneError,
)
from .network import FrequencySweep

_UNIT_SCALE = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_FORMATS = ("ma", "db", "ri")

# columns of the first line at each frequency, per port count
_FIRST_LINE_COLUMNS = {1: 3, 2: 9, 3: 7}


def _ports_from_extension(path: str) -> int | None:
    ext = os.path.splitext(path)[1].lower()
    if len(ext) == 4 and ext.startswith(".s") and ext.endswith("p"):
        if ext[2] in "123":
            return int(ext[2])
    return None


def _parse_option_line(tokens: list[str], line_no: int) -> tuple[float, str, float]:
    """Return (frequency scale, number format, reference impedance)."""
    unit, fmt, z0 = 1e9, "ma", 50.0
    i = 0
    while i < len(tokens):
        t = tokens[i].lower()
        if t in _UNIT_SCALE:
            unit = _UNIT_SCALE[t]
        elif t in _FORMATS:
            fmt = t
        elif t == "s":
            pass
        elif t in ("y", "z", "g", "h"):
            raise MalformedOptionLineError(
                f"only S-parameters are supported, got {tokens[i]!r}", line_no
            )
        elif t == "r":
            if i + 1 >= len(tokens):
                raise MalformedOptionLineError("'R' without a resistance", line_no)
            try:
                z0 = float(tokens[i + 1])
            except ValueError:
                raise MalformedOptionLineError(
                    f"bad reference resistance {tokens[i + 1]!r}", line_no
                ) from None
            i += 1
        else:
            raise MalformedOptionLineError(f"unknown option token {tokens[i]!r}", line_no)
        i += 1
    return unit, fmt, z0


def _to_complex(values: np.ndarray, fmt: str) -> np.ndarray:
    """Pairs (values[..., 0], values[..., 1]) to complex, per format."""
    a, b = values[..., 0], values[..., 1]
    if fmt == "ri":
        return a + 1j * b
    if fmt == "ma":
        return a * np.exp(1j * np.deg2rad(b))
    return 10.0 ** (a / 20.0) * np.exp(1j * np.deg2rad(b))


def _parse_floats(tokens: list[str], line_no: int) -> list[float]:
    out = []
    for t in tokens:
        try:
            out.append(float(t))
        except ValueError:
            raise TouchstoneError(f"not a number: {t!r}", line_no) from None
    return out


def parse_touchstone(text: str, n_ports: int | None = None) -> FrequencySweep:
    """Parse Touchstone v1.1 text into a FrequencySweep.

    When n_ports is None it is inferred from the column count of the
    first data line (3 -> 1-port, 9 -> 2-port, 7 -> 3-port first line).
    """
    unit, fmt = 1e9, "ma"
    saw_options = False
    rows: list[tuple[int, list[float]]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if "[" in line:
            raise TouchstoneError(
                "keyword blocks are Touchstone 2.0; only v1.1 is supported", line_no
            )
        if line.startswith("#"):
            if saw_options:
                raise MalformedOptionLineError("second option line", line_no)
            saw_options = True
            unit, fmt, _ = _parse_option_line(line[1:].split(), line_no)
            continue
        rows.append((line_no, _parse_floats(line.split(), line_no)))

    if not rows:
        raise TouchstoneError("no data lines", None)

    if n_ports is None:
        first_cols = len(rows[0][1])
        for ports, cols in _FIRST_LINE_COLUMNS.items():
            if first_cols == cols:
                n_ports = ports
                break
        else:
            raise ColumnCountMismatchError(
                f"cannot infer port count from {first_cols} columns", rows[0][0]
            )

    lines_per_point = 3 if n_ports == 3 else 1
    if len(rows) % lines_per_point:
        raise ColumnCountMismatchError(
            f"{len(rows)} data lines is not a multiple of {lines_per_point}",
            rows[-1][0],
        )

    freqs: list[float] = []
    mats: list[np.ndarray] = []
    for start in range(0, len(rows), lines_per_point):
        line_no, values = rows[start]
        if len(values) != _FIRST_LINE_COLUMNS[n_ports]:
            raise ColumnCountMismatchError(
                f"expected {_FIRST_LINE_COLUMNS[n_ports]} columns for a "
                f"{n_ports}-port file, got {len(values)}",
                line_no,
            )
        freqs.append(values[0] * unit)
        pairs = list(values[1:])
        for extra in range(1, lines_per_point):
            extra_no, extra_values = rows[start + extra]
            if len(extra_values) != 6:
                raise ColumnCountMismatchError(
                    f"expected 6 columns on a continuation line, got "
                    f"{len(extra_values)}",
                    extra_no,
                )
            pairs.extend(extra_values)
        c = _to_complex(np.array(pairs).reshape(-1, 2), fmt)
        if n_ports == 1:
            mats.append(c.reshape(1, 1))
        elif n_ports == 2:
            # v1 order S11 S21 S12 S22 is column-major
            mats.append(c.reshape(2, 2).T)
        else:
            mats.append(c.reshape(3, 3))

    if len(freqs) < 2:
        raise TouchstoneError(
            f"need at least 2 frequency points, got {len(freqs)}", None
        )
    f = np.array(freqs)
    if np.any(np.diff(f) <= 0):
        bad = int(np.argmax(np.diff(f) <= 0)) + 1
        raise NonMonotonicFrequencyError(
            "frequencies must be strictly increasing",
            rows[bad * lines_per_point][0],
        )
    return FrequencySweep(f, np.array(mats))


def read_touchstone(path: str) -> FrequencySweep:
    """Read a .s1p/.s2p/.s3p file (port count from the extension when
    recognizable, otherwise from the column count)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_touchstone(text, _ports_from_extension(path))
    except TouchstoneError as exc:
        raise type(exc)(f"{path}: {exc.args[0]}", None) from None


def write_touchstone(path: str, sweep: FrequencySweep, comments: tuple[str, ...] = ()) -> None:
    """Write a sweep as Touchstone v1.1, Hz / RI, full double precision.

    Output is deterministic: no timestamps, fixed column layout. Comments
    are emitted as leading '!' lines.
    """
    n = sweep.n_ports
    if n not in (1, 2, 3):
        raise ValueError(f"can only write 1-, 2-, or 3-port files, got {n}-port")
    lines = [f"! {c}" for c in comments]
    lines.append("# Hz S RI R 50")
    fmt = "%.17g"
    for f, s in zip(sweep.frequencies, sweep.s):
        if n == 1:
            entries = [s[0, 0]]
            lines.append(" ".join([fmt % f] + [fmt % c.real + " " + fmt % c.imag for c in entries]))
        elif n == 2:
            entries = [s[0, 0], s[1, 0], s[0, 1], s[1, 1]]
            lines.append(" ".join([fmt % f] + [fmt % c.real + " " + fmt % c.imag for c in entries]))
        else:
            for i in range(3):
                row = [fmt % c.real + " " + fmt % c.imag for c in s[i]]
                prefix = [fmt % f] if i == 0 else []
                lines.append(" ".join(prefix + row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
