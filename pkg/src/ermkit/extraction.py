"""Reflection-mode recovery from calibrated two-port sweeps.

The measurement chain adds electrical delay on both feed lines. A common
component is estimated from the transmission phase slope; a differential
component (port-2 mismatch) is found by making the differential mode
collapse to a point in the complex plane, the signature of complete
destructive interference. After matching, the common/differential
eigenmodes and the feed asymmetry are separated per frequency and the
common mode is rotated so its off-resonant point sits at +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks, peak_widths
from sklearn.base import BaseEstimator

from .circlefit import fit_circle_taubin
from .exceptions import (
    NoBracketError,
    PhaseUnwrapAmbiguityError,
    ResidualTooLargeError,
)
from .network import (
    FrequencySweep,
    ReferencePlaneShift,
    eigenmodes_symmetric2,
    shift_reference_planes,
)
from .perturbation import extract_mu

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_GOLDEN2 = 1.0 - _GOLDEN


@dataclass(frozen=True)
class ErmExtraction:
    """Result of reflection-mode extraction on one resonance band.

    tau2 and common_delay record the delays detected upstream (excess on
    the line; the correction applied to the data is their negation).
    s_cm_sweep is rotated by -normalization_phase so the off-resonant
    level is real positive; s_dm_sweep and mu_sweep are unrotated.
    dm_flatness is the diameter of the best-fit circle to the
    phase-detrended differential mode: near zero when the interference is
    completely destructive.
    """

    tau2: float
    common_delay: float
    frequencies: np.ndarray
    s_cm_sweep: np.ndarray
    s_dm_sweep: np.ndarray
    mu_sweep: np.ndarray
    normalization_phase: float
    dm_flatness: float

    def __post_init__(self):
        for name in ("frequencies", "s_cm_sweep", "s_dm_sweep", "mu_sweep"):
            a = np.asarray(getattr(self, name)).copy()
            a.setflags(write=False)
            object.__setattr__(self, name, a)


def _detrend_linear_phase(w: np.ndarray) -> np.ndarray:
    """Remove the mean per-sample rotation (a linear phase ramp) without
    unwrapping; robust to many-cycle winding."""
    r = np.sum(w[1:] * np.conj(w[:-1]))
    if r == 0:
        return w
    step = np.angle(r)
    return w * np.exp(-1j * step * np.arange(w.size))


def _flatness(w: np.ndarray) -> float:
    """Diameter of the best-fit circle to the detrended trace."""
    if w.size < 3:
        return 0.0
    _, radius = fit_circle_taubin(_detrend_linear_phase(w))
    return 2.0 * radius


def remove_common_delay(sweep: FrequencySweep) -> tuple[FrequencySweep, float]:
    """Estimate and remove the delay common to both ports.

    Fits a single slope to the unwrapped transmission phase (least squares
    of arg S21 against frequency) and interprets it as a round-trip delay
    tau; the sweep is corrected with per-port delays [-tau/2, -tau/2].
    Returns (corrected sweep, tau), tau being the detected excess
    (positive when S21 carries exp(+2*pi*i*f*tau)).

    The estimate is unbiased only when the band is dominated by
    off-resonant points; on a narrow single-resonance band the resonance's
    own phase winding leaks into tau. Run this on wide scans, before band
    selection.
    """
    if sweep.n_points < 16:
        raise ValueError(
            f"common-delay fit needs at least 16 points, got {sweep.n_points}"
        )
    s21 = sweep.s_param(2, 1) if sweep.n_ports >= 2 else sweep.s_param(1, 1)
    phase = np.unwrap(np.angle(s21))
    steps = np.abs(np.diff(phase))
    if np.any(steps > 0.9 * np.pi):
        raise PhaseUnwrapAmbiguityError(
            f"largest per-step transmission phase jump {steps.max():.3f} rad "
            "is too close to pi; the frequency grid undersamples the delay"
        )
    f_centered = sweep.frequencies - sweep.frequencies.mean()
    slope = np.dot(f_centered, phase - phase.mean()) / np.dot(f_centered, f_centered)
    tau = float(slope / (2.0 * np.pi))
    corrected = shift_reference_planes(
        sweep, ReferencePlaneShift([-tau / 2.0, -tau / 2.0])
    )
    return corrected, tau


def _dm_trace(sweep: FrequencySweep, t: float) -> np.ndarray:
    """Differential mode after applying an extra delay t to port 2."""
    p = np.exp(2j * np.pi * sweep.frequencies * t)
    s = sweep.s
    return 0.5 * (s[:, 0, 0] + p * p * s[:, 1, 1]) - p * s[:, 1, 0]


def _golden_section(fun, lo: float, hi: float, xatol: float) -> tuple[float, float]:
    h = hi - lo
    x1 = lo + _GOLDEN2 * h
    x2 = lo + _GOLDEN * h
    f1 = fun(x1)
    f2 = fun(x2)
    while h > xatol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            h = hi - lo
            x1 = lo + _GOLDEN2 * h
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            h = hi - lo
            x2 = lo + _GOLDEN * h
            f2 = fun(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def match_port_delay(
    sweep: FrequencySweep,
    bracket: tuple[float, float] = (-1e-9, 1e-9),
    residual_factor: float = 0.05,
) -> tuple[FrequencySweep, float, float]:
    """Find the port-2 delay mismatch by differential-mode interference.

    The objective J(t) is the diameter of the best-fit circle (Taubin) to
    the phase-detrended differential mode with trial delay t applied to
    port 2. For a lossless symmetric junction the matched differential
    mode is a single point, so J has a deep minimum at the true
    correction. The detrending makes J insensitive to any leftover common
    delay ramp, which would otherwise smear the point around the unit
    circle.

    J is periodic-comb shaped, repeating every 1/f_carrier (~200 ps at
    5 GHz): every comb tooth flattens the trace, but only the true one is
    exact. The search samples a grid fine enough to see each tooth,
    refines every local minimum by golden section plus a parabolic step,
    and keeps the global best. Under noise the teeth tie; pass a bracket
    narrower than the comb period when the mismatch is known to be small.

    Returns (corrected sweep, tau2, dm_flatness): tau2 is the detected
    excess delay on port 2 (the applied correction is [0, -tau2]) and
    dm_flatness is J at the minimum.

    Raises NoBracketError when the best grid point hugs a bracket edge
    (widen the bracket), and ResidualTooLargeError when the minimized J
    stays above residual_factor * |mean s_dm| (junction symmetry too
    broken for reflection-mode recovery).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ValueError(f"empty bracket {bracket!r}")
    if sweep.n_ports != 2:
        raise ValueError(f"expected a 2-port sweep, got {sweep.n_ports} ports")

    def objective(t: float) -> float:
        return _flatness(_dm_trace(sweep, t))

    f_center = 0.5 * (sweep.frequencies[0] + sweep.frequencies[-1])
    spacing = 1.0 / (8.0 * f_center)
    n_grid = max(int(np.ceil((hi - lo) / spacing)) + 1, 25)
    grid = np.linspace(lo, hi, n_grid)
    j_grid = np.array([objective(t) for t in grid])

    if np.argmin(j_grid) in (0, n_grid - 1):
        raise NoBracketError(
            "differential-mode objective is smallest at a bracket edge; "
            f"widen the bracket beyond [{lo:.3e}, {hi:.3e}] s"
        )
    interior = np.flatnonzero(
        (j_grid[1:-1] <= j_grid[:-2]) & (j_grid[1:-1] <= j_grid[2:])
    )
    if interior.size == 0:
        raise NoBracketError("no interior minimum of the matching objective")

    xatol = 1e-16
    best_t, best_j = None, np.inf
    for i in interior + 1:
        t_i, j_i = _golden_section(objective, grid[i - 1], grid[i + 1], xatol)
        if j_i < best_j:
            best_t, best_j = t_i, j_i

    h = 64.0 * xatol
    j_left, j_right = objective(best_t - h), objective(best_t + h)
    curvature = j_left - 2.0 * best_j + j_right
    if curvature > 0:
        vertex = best_t - 0.5 * h * (j_right - j_left) / curvature
        j_vertex = objective(vertex)
        if j_vertex < best_j:
            best_t, best_j = vertex, j_vertex

    scale = abs(np.mean(_dm_trace(sweep, 0.0)))
    if best_j > residual_factor * scale:
        raise ResidualTooLargeError(
            f"matched differential-mode flatness {best_j:.3e} exceeds "
            f"{residual_factor:g} * |mean s_dm| = {residual_factor * scale:.3e}; "
            "junction symmetry too broken for reflection-mode recovery"
        )

    corrected = shift_reference_planes(sweep, ReferencePlaneShift([0.0, best_t]))
    return corrected, -best_t, float(best_j)


def extract_erm(
    sweep: FrequencySweep,
    edge_fraction: float = 0.05,
    *,
    tau2: float = 0.0,
    common_delay: float = 0.0,
) -> ErmExtraction:
    """Separate eigenmodes of a delay-matched sweep and normalize.

    Computes per frequency the common mode s_cm = S21 + (S11 + S22)/2,
    the differential mode s_dm = (S11 + S22)/2 - S21, and the asymmetry
    mu = (S11 - S22)/2. The off-resonant phase is estimated from the mean
    of the first and last edge_fraction of s_cm points and divided out,
    so the common mode lands on the +1 off-resonant convention of the
    model functions.

    tau2 and common_delay are bookkeeping for delays already removed
    upstream; they are recorded in the result untouched.
    """
    if sweep.n_ports != 2:
        raise ValueError(f"expected a 2-port sweep, got {sweep.n_ports} ports")
    if not 0.0 < edge_fraction < 0.5:
        raise ValueError(f"edge_fraction must be in (0, 0.5), got {edge_fraction}")
    s_cm, s_dm = eigenmodes_symmetric2(sweep.s)
    mu = extract_mu(sweep).mu
    k = max(1, int(round(edge_fraction * sweep.n_points)))
    edge_mean = np.mean(np.concatenate([s_cm[:k], s_cm[-k:]]))
    theta = float(np.angle(edge_mean))
    return ErmExtraction(
        tau2=tau2,
        common_delay=common_delay,
        frequencies=sweep.frequencies,
        s_cm_sweep=s_cm * np.exp(-1j * theta),
        s_dm_sweep=s_dm,
        mu_sweep=mu,
        normalization_phase=theta,
        dm_flatness=_flatness(s_dm),
    )


@dataclass(frozen=True)
class ResonanceDip:
    """One detected |S21| dip."""

    frequency: float
    width_hz: float
    prominence_db: float


def find_resonance_dips(
    sweep: FrequencySweep, prominence_db: float = 1.0
) -> list[ResonanceDip]:
    """Locate dips in |S21| (|S11| for 1-ports) for band selection.

    Returns one entry per dip with at least prominence_db of prominence,
    sorted by descending prominence. width_hz is the full width at half
    prominence, a rough linewidth for sizing the fit band.
    """
    trace = sweep.s_param(2, 1) if sweep.n_ports >= 2 else sweep.s_param(1, 1)
    mag_db = 20.0 * np.log10(np.maximum(np.abs(trace), 1e-300))
    peaks, props = find_peaks(-mag_db, prominence=prominence_db)
    if peaks.size == 0:
        return []
    widths = peak_widths(-mag_db, peaks, rel_height=0.5)[0]
    df = float(np.median(np.diff(sweep.frequencies)))
    dips = [
        ResonanceDip(
            frequency=float(sweep.frequencies[p]),
            width_hz=float(w * df),
            prominence_db=float(pr),
        )
        for p, w, pr in zip(peaks, widths, props["prominences"])
    ]
    dips.sort(key=lambda d: -d.prominence_db)
    return dips


class ErmExtractor(BaseEstimator):
    """Estimator wrapper around delay matching plus mode extraction.

    Parameters mirror the functional API: the matching bracket in
    picoseconds, the off-resonant edge fraction, the residual threshold
    factor, and whether to run the differential matching at all. fit()
    learns the port-2 correction from a FrequencySweep; transform()
    applies the learned correction to a sweep and extracts its modes.
    """

    def __init__(
        self,
        bracket_ps: float = 1000.0,
        edge_fraction: float = 0.05,
        residual_factor: float = 0.05,
        match_delay: bool = True,
    ):
        self.bracket_ps = bracket_ps
        self.edge_fraction = edge_fraction
        self.residual_factor = residual_factor
        self.match_delay = match_delay

    def fit(self, X: FrequencySweep, y=None) -> "ErmExtractor":
        if self.match_delay:
            half = abs(self.bracket_ps) * 1e-12
            _, tau2, flatness = match_port_delay(
                X, bracket=(-half, half), residual_factor=self.residual_factor
            )
            self.tau2_ = tau2
        else:
            self.tau2_ = 0.0
        self.extraction_ = self._extract(X)
        self.dm_flatness_ = self.extraction_.dm_flatness
        return self

    def _extract(self, X: FrequencySweep) -> ErmExtraction:
        matched = shift_reference_planes(X, ReferencePlaneShift([0.0, -self.tau2_]))
        return extract_erm(
            matched, edge_fraction=self.edge_fraction, tau2=self.tau2_
        )

    def transform(self, X: FrequencySweep) -> ErmExtraction:
        if not hasattr(self, "tau2_"):
            raise RuntimeError("ErmExtractor.transform called before fit")
        return self._extract(X)

    def fit_transform(self, X: FrequencySweep, y=None) -> ErmExtraction:
        return self.fit(X).extraction_
