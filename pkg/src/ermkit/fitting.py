"""Nonlinear least-squares fitting of resonator lineshapes.

Complex sweeps are fit by a damped Gauss-Newton (Levenberg-Marquardt)
loop with Nielsen's damping update, treating real and imaginary parts as
separate residuals. Fitting runs in internal coordinates: frequency
offset from a reference in units of the half-span, log of the positive
quantities (Qi, Qc, amplitude), raw angles, and phase slope scaled by the
half-span. Logs enforce positivity and even out parameter scales;
results, covariance, and confidence intervals are mapped back to natural
units by the delta method.

Registered models:

  erm         A*exp(i*psi) * (1 - (2Q/Qc)/D)          off-resonant +A
  reflection  A*exp(i*psi) * (-1 + (2Q/Qc)/D)         off-resonant -A
  hanger      A*exp(i*psi) * (exp(-2i*phi(f)) + Gamma_ERM)/2
  lossy_erm   erm fit, amplitude re-expressed as coupling loss g_ext
  dcm         A*exp(i*psi) * (1 - (Q/qc)*exp(i*phi(f))/D), the standard
              asymmetric notch form with 1/Q = 1/qi + cos(phi0)/qc baked
              in; its qc absorbs a cos(phi0) factor relative to the
              hanger parameterization and its qi matches the physical Qi.

with D = 1 - 2iQ(f-f0)/f0 and phi(f) = phi0 + phi_slope*(f-f0).

Non-convergence is reported, not raised: the best-so-far parameters come
back with converged=False. A singular normal matrix (an unidentifiable
parameter) raises SingularJacobianError.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator

from .circlefit import fit_circle_taubin
from .exceptions import InsufficientSpanError, SingularJacobianError
from .validation import as_complex_array, as_float_array, check_same_length

MODEL_NAMES = ("erm", "reflection", "hanger", "lossy_erm", "dcm")

_EDGE_FRACTION = 0.05


@dataclass(frozen=True)
class FitConfig:
    """Model choice plus iteration controls for fit_lineshape."""

    model: str = "erm"
    max_iterations: int = 200
    gradient_tolerance: float = 1e-10
    step_tolerance: float = 1e-12
    damping_init: float = 1e-3

    def __post_init__(self):
        if self.model not in MODEL_NAMES:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODEL_NAMES}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        for name in ("gradient_tolerance", "step_tolerance", "damping_init"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters in natural units with linearized uncertainties.

    covariance is ordered like param_names; ci95 holds 1.96-sigma
    half-widths per parameter (delta method through the internal
    coordinate transforms). rms_residual is per complex point:
    sqrt(mean |data - model|^2).
    """

    model: str
    params: dict[str, float]
    param_names: tuple[str, ...]
    covariance: np.ndarray
    ci95: dict[str, float]
    rms_residual: float
    n_points: int
    converged: bool
    n_iterations: int


# ---------------------------------------------------------------------------
# Model functions: m(x, f) and the analytic Jacobian dm/dx, complex (N, p).
# Internal coordinate kinds: "freq" (offset/half-span), "log", "lin",
# "slope" (natural = x / f_scale).


def _eval_erm_family(x, f, f_ref, f_scale, sign):
    fr, lqi, lqc, la, psi = x
    f0 = f_ref + fr * f_scale
    qi, qc, amp = np.exp(lqi), np.exp(lqc), np.exp(la)
    q = 1.0 / (1.0 / qi + 1.0 / qc)
    nu = (f - f0) / f0
    d = 1.0 - 2j * q * nu
    u = (2.0 * q / qc) / d
    gamma = sign * (u - 1.0)
    pref = amp * np.exp(1j * psi)
    m = pref * gamma

    du_dlqi = u * q / (qi * d)
    du_dlqc = u * (q / (qc * d) - 1.0)
    du_df0 = -u * (2j * q * f) / (f0**2 * d)

    jac = np.empty((f.size, 5), dtype=complex)
    jac[:, 0] = pref * sign * du_df0 * f_scale
    jac[:, 1] = pref * sign * du_dlqi
    jac[:, 2] = pref * sign * du_dlqc
    jac[:, 3] = m
    jac[:, 4] = 1j * m
    return m, jac


def _eval_erm(x, f, f_ref, f_scale):
    return _eval_erm_family(x, f, f_ref, f_scale, -1.0)


def _eval_reflection(x, f, f_ref, f_scale):
    return _eval_erm_family(x, f, f_ref, f_scale, +1.0)


def _eval_hanger(x, f, f_ref, f_scale):
    fr, lqi, lqc, phi0, phis, la, psi = x
    f0 = f_ref + fr * f_scale
    qi, qc, amp = np.exp(lqi), np.exp(lqc), np.exp(la)
    slope = phis / f_scale
    q = 1.0 / (1.0 / qi + 1.0 / qc)
    nu = (f - f0) / f0
    d = 1.0 - 2j * q * nu
    u = (2.0 * q / qc) / d
    phi = phi0 + slope * (f - f0)
    b = np.exp(-2j * phi)
    pref = amp * np.exp(1j * psi)
    m = pref * 0.5 * (b + 1.0 - u)

    du_dlqi = u * q / (qi * d)
    du_dlqc = u * (q / (qc * d) - 1.0)
    du_df0 = -u * (2j * q * f) / (f0**2 * d)
    db_df0 = 2j * b * slope

    jac = np.empty((f.size, 7), dtype=complex)
    jac[:, 0] = pref * 0.5 * (db_df0 - du_df0) * f_scale
    jac[:, 1] = pref * 0.5 * (-du_dlqi)
    jac[:, 2] = pref * 0.5 * (-du_dlqc)
    jac[:, 3] = pref * 0.5 * (-2j * b)
    jac[:, 4] = pref * 0.5 * (-2j * b) * (f - f0) / f_scale
    jac[:, 5] = m
    jac[:, 6] = 1j * m
    return m, jac


def _eval_dcm(x, f, f_ref, f_scale):
    fr, lqi, lqc, phi0, phis, la, psi = x
    f0 = f_ref + fr * f_scale
    qi, qc, amp = np.exp(lqi), np.exp(lqc), np.exp(la)
    slope = phis / f_scale
    cos0, sin0 = np.cos(phi0), np.sin(phi0)
    inv_qt = 1.0 / qi + cos0 / qc
    with np.errstate(divide="ignore", invalid="ignore"):
        qt = 1.0 / inv_qt
    nu = (f - f0) / f0
    d = 1.0 - 2j * qt * nu
    phi = phi0 + slope * (f - f0)
    u = (qt / qc) * np.exp(1j * phi) / d
    pref = amp * np.exp(1j * psi)
    m = pref * (1.0 - u)

    du_dlqi = u * qt / (qi * d)
    du_dlqc = u * (qt * cos0 / (qc * d) - 1.0)
    du_dphi0 = u * qt * sin0 / (qc * d) + 1j * u
    du_dphis = 1j * u * (f - f0) / f_scale
    du_df0 = -u * (2j * qt * f) / (f0**2 * d) - 1j * u * slope

    jac = np.empty((f.size, 7), dtype=complex)
    jac[:, 0] = pref * (-du_df0) * f_scale
    jac[:, 1] = pref * (-du_dlqi)
    jac[:, 2] = pref * (-du_dlqc)
    jac[:, 3] = pref * (-du_dphi0)
    jac[:, 4] = pref * (-du_dphis)
    jac[:, 5] = m
    jac[:, 6] = 1j * m
    return m, jac


@dataclass(frozen=True)
class _ModelSpec:
    names: tuple[str, ...]
    kinds: tuple[str, ...]
    evaluate: Callable


_ERM_NAMES = ("f0", "Qi", "Qc", "amplitude", "phase_offset")
_ERM_KINDS = ("freq", "log", "log", "log", "lin")
_HANGER_NAMES = ("f0", "Qi", "Qc", "phi0", "phi_slope", "amplitude", "phase_offset")
_HANGER_KINDS = ("freq", "log", "log", "lin", "slope", "log", "lin")

_MODELS: dict[str, _ModelSpec] = {
    "erm": _ModelSpec(_ERM_NAMES, _ERM_KINDS, _eval_erm),
    "reflection": _ModelSpec(_ERM_NAMES, _ERM_KINDS, _eval_reflection),
    "lossy_erm": _ModelSpec(_ERM_NAMES, _ERM_KINDS, _eval_erm),
    "hanger": _ModelSpec(_HANGER_NAMES, _HANGER_KINDS, _eval_hanger),
    "dcm": _ModelSpec(_HANGER_NAMES, _HANGER_KINDS, _eval_dcm),
}


def _pack(spec: _ModelSpec, natural: dict, f_ref: float, f_scale: float) -> np.ndarray:
    x = np.empty(len(spec.names))
    for i, (name, kind) in enumerate(zip(spec.names, spec.kinds)):
        value = float(natural[name])
        if kind == "freq":
            x[i] = (value - f_ref) / f_scale
        elif kind == "log":
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
            x[i] = np.log(value)
        elif kind == "slope":
            x[i] = value * f_scale
        else:
            x[i] = value
    return x


def _unpack(spec: _ModelSpec, x: np.ndarray, f_ref: float, f_scale: float) -> dict:
    out = {}
    for name, kind, value in zip(spec.names, spec.kinds, x):
        if kind == "freq":
            out[name] = f_ref + value * f_scale
        elif kind == "log":
            out[name] = float(np.exp(value))
        elif kind == "slope":
            out[name] = value / f_scale
        else:
            out[name] = float(value)
    return out


def _natural_jacobian_diag(
    spec: _ModelSpec, x: np.ndarray, f_scale: float
) -> np.ndarray:
    """d(natural)/d(internal), diagonal because transforms are per-axis."""
    d = np.empty(len(spec.names))
    for i, kind in enumerate(spec.kinds):
        if kind == "freq":
            d[i] = f_scale
        elif kind == "log":
            d[i] = np.exp(x[i])
        elif kind == "slope":
            d[i] = 1.0 / f_scale
        else:
            d[i] = 1.0
    return d


# ---------------------------------------------------------------------------
# Initialization.


def _edge_mean(z: np.ndarray) -> complex:
    k = max(1, int(round(_EDGE_FRACTION * z.size)))
    return complex(np.mean(np.concatenate([z[:k], z[-k:]])))


def _wrap_pm_pi(a: float) -> float:
    return float((a + np.pi) % (2.0 * np.pi) - np.pi)


def _half_max_crossing(f, w, i0, half, direction):
    """Frequency where w crosses `half` walking from the peak, or None."""
    i = i0
    while 0 <= i + direction < w.size:
        j = i + direction
        if w[j] < half:
            # linear interpolation between i and j
            t = (w[i] - half) / (w[i] - w[j])
            return float(f[i] + t * (f[j] - f[i]))
        i = j
    return None


def initial_guess(frequencies, values, model: str = "erm") -> dict:
    """Starting parameters from lineshape geometry.

    f0 comes from the extremum of |z - z_off| (parabolically refined),
    the total Q from its full width at sqrt(1/4+3/4)/2... half maximum
    (|1/D| falls to 1/2 at detuning sqrt(3)/2Q, so Q =
    sqrt(3)*f0/FWHM), and the coupling from the Taubin circle diameter.
    For asymmetric models the Fano angle is read from the geometry of the
    off-resonant point and the circle center.

    Raises InsufficientSpanError for fewer than 16 points, an unbracketed
    resonance, or a span under 3 linewidths.
    """
    f = as_float_array(frequencies, "frequencies")
    z = as_complex_array(values, "values")
    check_same_length(f, z, "frequencies", "values")
    if model not in _MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {MODEL_NAMES}")
    n = f.size
    if n < 16:
        raise InsufficientSpanError(f"need at least 16 points, got {n}")

    z_off = _edge_mean(z)
    w = np.abs(z - z_off)
    i0 = int(np.argmax(w))
    f0 = float(f[i0])
    if 0 < i0 < n - 1:
        denom = w[i0 - 1] - 2.0 * w[i0] + w[i0 + 1]
        if denom < 0:
            shift = 0.5 * (w[i0 - 1] - w[i0 + 1]) / denom
            f0 = float(f[i0] + shift * np.median(np.diff(f)))

    half = 0.5 * w[i0]
    f_lo = _half_max_crossing(f, w, i0, half, -1)
    f_hi = _half_max_crossing(f, w, i0, half, +1)
    if f_lo is None or f_hi is None:
        raise InsufficientSpanError(
            "resonance half-maximum not bracketed on both sides of the band"
        )
    fwhm = f_hi - f_lo
    span = float(f[-1] - f[0])
    if span < 3.0 * fwhm:
        raise InsufficientSpanError(
            f"span {span:.3g} Hz is under 3 linewidths (FWHM {fwhm:.3g} Hz)"
        )
    q = np.sqrt(3.0) * f0 / fwhm

    core = w >= 0.25 * w[i0]
    pts = z[core] if np.count_nonzero(core) >= 8 else z
    center, radius = fit_circle_taubin(pts)
    dia = 2.0 * radius

    if model in ("erm", "reflection", "lossy_erm"):
        amp = abs(z_off)
        if amp == 0.0:
            amp = float(np.max(np.abs(z)))
        ratio = np.clip(dia / (2.0 * amp), 1e-9, 1.0 - 1e-9)
        qc = q / ratio
        qi = 1.0 / (1.0 / q - 1.0 / qc)
        psi = np.angle(-z_off) if model == "reflection" else np.angle(z_off)
        return {
            "f0": f0,
            "Qi": float(qi),
            "Qc": float(qc),
            "amplitude": float(amp),
            "phase_offset": float(psi),
        }

    phi0 = _wrap_pm_pi(np.angle(center - z_off) - np.angle(z_off) - np.pi)
    if model == "hanger":
        cos0 = np.cos(phi0)
        amp = abs(z_off) / max(abs(cos0), 0.05)
        psi = np.angle(z_off) + phi0 - (0.0 if cos0 >= 0 else np.pi)
        ratio = np.clip(dia / amp, 1e-9, 1.0 - 1e-9)
        qc = q / ratio
        qi = 1.0 / (1.0 / q - 1.0 / qc)
    else:  # dcm
        amp = abs(z_off)
        psi = np.angle(z_off)
        qc = amp * q / max(dia, 1e-12 * amp)
        inv_qi = 1.0 / q - np.cos(phi0) / qc
        qi = 1.0 / inv_qi if inv_qi > 0 else 100.0 * q
    return {
        "f0": f0,
        "Qi": float(qi),
        "Qc": float(qc),
        "phi0": float(phi0),
        "phi_slope": 0.0,
        "amplitude": float(amp),
        "phase_offset": float(_wrap_pm_pi(psi)),
    }


# ---------------------------------------------------------------------------
# Levenberg-Marquardt engine (Nielsen damping schedule).


def _real_stack(r: np.ndarray, weights) -> np.ndarray:
    if weights is not None:
        r = r * weights
    return np.concatenate([r.real, r.imag])


def _real_jacobian(jc: np.ndarray, weights) -> np.ndarray:
    if weights is not None:
        jc = jc * weights[:, None]
    return np.vstack([jc.real, jc.imag])


def _lm_minimize(evaluate, x0, f, z, weights, cfg, f_ref, f_scale):
    x = np.asarray(x0, dtype=float).copy()
    p = x.size

    def full_eval(xv):
        m, jc = evaluate(xv, f, f_ref, f_scale)
        r = _real_stack(m - z, weights)
        jr = _real_jacobian(jc, weights)
        return r, jr

    r, jr = full_eval(x)
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(jr))):
        raise SingularJacobianError("model not finite at the initial point")
    a = jr.T @ jr
    g = jr.T @ r
    cost = 0.5 * float(r @ r)
    mu = cfg.damping_init * float(np.max(np.diag(a)))
    if mu <= 0 or not np.isfinite(mu):
        raise SingularJacobianError(
            "normal matrix has an empty diagonal; a parameter has no effect"
        )
    nu = 2.0
    converged = False
    iterations = 0
    eye = np.eye(p)

    for iterations in range(1, cfg.max_iterations + 1):
        if np.max(np.abs(g)) <= cfg.gradient_tolerance:
            converged = True
            break
        try:
            h = np.linalg.solve(a + mu * eye, -g)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobianError(
                f"normal equations singular at damping {mu:.3e}"
            ) from exc
        if not np.all(np.isfinite(h)):
            raise SingularJacobianError("non-finite step from normal equations")
        if np.linalg.norm(h) <= cfg.step_tolerance * (
            np.linalg.norm(x) + cfg.step_tolerance
        ):
            converged = True
            break
        x_new = x + h
        try:
            r_new, jr_new = full_eval(x_new)
        except FloatingPointError:
            r_new = None
        ok = r_new is not None and np.all(np.isfinite(r_new))
        if ok:
            cost_new = 0.5 * float(r_new @ r_new)
            predicted = 0.5 * float(h @ (mu * h - g))
            rho = (cost - cost_new) / predicted if predicted > 0 else -1.0
        else:
            rho = -1.0
        if ok and rho > 0:
            x, r, cost = x_new, r_new, cost_new
            jr = jr_new
            if not np.all(np.isfinite(jr)):
                raise SingularJacobianError("non-finite Jacobian after step")
            a = jr.T @ jr
            g = jr.T @ r
            mu *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
            nu = 2.0
        else:
            mu *= nu
            nu *= 2.0
            if not np.isfinite(mu):
                break

    return x, a, r, converged, iterations


def fit_lineshape(
    frequencies,
    values,
    config: FitConfig | None = None,
    *,
    weights=None,
    p0: dict | None = None,
) -> FitResult:
    """Fit one complex trace with the configured model.

    Residuals are the stacked real and imaginary parts of data - model,
    optionally weighted per point. Starting values come from
    initial_guess unless p0 supplies every parameter; a partial p0
    overrides individual guesses. Non-convergence returns the best point
    found with converged=False rather than raising.

    The hanger model is pi-periodic in phi0, so its phi0 is reported
    wrapped to [0, pi); the dcm phi0 is wrapped to (-pi, pi].
    """
    cfg = config if config is not None else FitConfig()
    spec = _MODELS[cfg.model]
    f = as_float_array(frequencies, "frequencies")
    z = as_complex_array(values, "values")
    check_same_length(f, z, "frequencies", "values")
    if weights is not None:
        weights = as_float_array(weights, "weights")
        check_same_length(f, weights, "frequencies", "weights")
    n = f.size
    dof = 2 * n - len(spec.names)
    if dof < 1:
        raise ValueError(f"{n} points cannot constrain {len(spec.names)} parameters")

    if p0 is not None and all(name in p0 for name in spec.names):
        natural0 = {name: float(p0[name]) for name in spec.names}
    else:
        natural0 = initial_guess(f, z, cfg.model)
        if p0:
            natural0.update(
                {k: float(v) for k, v in p0.items() if k in spec.names}
            )

    f_ref = float(natural0["f0"])
    f_scale = 0.5 * (f[-1] - f[0])
    x0 = _pack(spec, natural0, f_ref, f_scale)

    x, a, r, converged, iterations = _lm_minimize(
        spec.evaluate, x0, f, z, weights, cfg, f_ref, f_scale
    )

    ssr = float(r @ r)
    s2 = ssr / dof
    try:
        cov_internal = s2 * np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise SingularJacobianError(
            "covariance unavailable: normal matrix singular at the optimum"
        ) from exc
    dnat = _natural_jacobian_diag(spec, x, f_scale)
    covariance = cov_internal * np.outer(dnat, dnat)
    sigma = np.sqrt(np.maximum(np.diag(covariance), 0.0))

    params = _unpack(spec, x, f_ref, f_scale)
    params["phase_offset"] = _wrap_pm_pi(params["phase_offset"])
    if cfg.model == "hanger":
        params["phi0"] = float(params["phi0"] % np.pi)
    elif cfg.model == "dcm":
        params["phi0"] = _wrap_pm_pi(params["phi0"])

    names = spec.names
    ci95 = {name: float(1.96 * s) for name, s in zip(names, sigma)}
    if cfg.model == "lossy_erm":
        amp = params["amplitude"]
        params["g_ext"] = (1.0 - amp) / (1.0 + amp)
        ci95["g_ext"] = ci95["amplitude"] * 2.0 / (1.0 + amp) ** 2
        names = names + ("g_ext",)

    rms = float(np.sqrt(np.mean(np.abs(_model_values(spec, x, f, f_ref, f_scale) - z) ** 2)))
    return FitResult(
        model=cfg.model,
        params=params,
        param_names=names,
        covariance=covariance,
        ci95=ci95,
        rms_residual=rms,
        n_points=n,
        converged=converged,
        n_iterations=iterations,
    )


def _model_values(spec, x, f, f_ref, f_scale):
    return spec.evaluate(x, f, f_ref, f_scale)[0]


def predict_model(model: str, params: dict, frequencies) -> np.ndarray:
    """Evaluate a registered model at natural parameters."""
    spec = _MODELS[model]
    f = as_float_array(frequencies, "frequencies")
    f_ref = float(params["f0"])
    f_scale = 1.0
    x = _pack(spec, params, f_ref, f_scale)
    return _model_values(spec, x, f, f_ref, f_scale)


@dataclass(frozen=True)
class PowerFitEntry:
    """One power point of a power sweep: the fit or the failure."""

    power_dbm: float
    result: FitResult | None
    error: str | None
    high_uncertainty: bool


def fit_power_sweep(sweeps, config: FitConfig | None = None) -> list[PowerFitEntry]:
    """Fit a power series, warm-starting each fit from the previous one.

    Entries are (power_dbm, frequencies, values) triples or
    (power_dbm, (frequencies, values)) pairs. Failures are collected per
    entry instead of aborting the series; fits with ci95(Qi)/Qi > 1 are
    flagged as high-uncertainty.
    """
    items = []
    for entry in sweeps:
        if len(entry) == 2:
            power, (f, z) = entry
        else:
            power, f, z = entry
        items.append((float(power), f, z))
    if not items:
        raise ValueError("fit_power_sweep needs at least one sweep")

    out: list[PowerFitEntry] = []
    warm: dict | None = None
    for power, f, z in items:
        try:
            result = fit_lineshape(f, z, config, p0=warm)
        except (InsufficientSpanError, SingularJacobianError, ValueError) as exc:
            out.append(PowerFitEntry(power, None, str(exc), False))
            continue
        if result.converged:
            warm = result.params
        qi = result.params.get("Qi", 0.0)
        high = bool(qi > 0 and result.ci95.get("Qi", 0.0) / qi > 1.0)
        out.append(PowerFitEntry(power, result, None, high))
    return out


class LineshapeFitter(BaseEstimator):
    """Estimator wrapper around fit_lineshape.

    Accepts an ErmExtraction (fits its normalized common mode) or a
    (frequencies, values) pair. After fit(), the natural parameters are
    in params_ and the full FitResult in result_; predict(frequencies)
    evaluates the fitted model.
    """

    def __init__(
        self,
        model: str = "erm",
        max_iterations: int = 200,
        gradient_tolerance: float = 1e-10,
        step_tolerance: float = 1e-12,
        damping_init: float = 1e-3,
    ):
        self.model = model
        self.max_iterations = max_iterations
        self.gradient_tolerance = gradient_tolerance
        self.step_tolerance = step_tolerance
        self.damping_init = damping_init

    def _config(self) -> FitConfig:
        return FitConfig(
            model=self.model,
            max_iterations=self.max_iterations,
            gradient_tolerance=self.gradient_tolerance,
            step_tolerance=self.step_tolerance,
            damping_init=self.damping_init,
        )

    @staticmethod
    def _coerce(X) -> tuple[np.ndarray, np.ndarray]:
        if hasattr(X, "s_cm_sweep"):
            return X.frequencies, X.s_cm_sweep
        f, z = X
        return np.asarray(f, dtype=float), np.asarray(z, dtype=complex)

    def fit(self, X, y=None) -> "LineshapeFitter":
        f, z = self._coerce(X)
        self.result_ = fit_lineshape(f, z, self._config())
        self.params_ = dict(self.result_.params)
        return self

    def predict(self, frequencies) -> np.ndarray:
        if not hasattr(self, "result_"):
            raise RuntimeError("LineshapeFitter.predict called before fit")
        return predict_model(self.model, self.params_, frequencies)
