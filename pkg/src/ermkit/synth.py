"""Synthetic two-port sweeps of a hanger-coupled resonator.

A Scenario describes the physical chain: a three-port tee (by its
eigenphases), an optional small non-ideality generator acting on the tee,
a resonator arm terminating port 3, coupling loss, per-port delays, a
global phase, and additive noise. generate() walks that chain and returns
the two-port FrequencySweep a VNA would record.

The resonator parameters in the scenario are the observed ones: the
values a lineshape fit of the ideal pipeline recovers. generate() inverts
the coupling-induced frequency pull exactly, so the noiseless round trip
is limited only by floating point.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from io import StringIO

import numpy as np

from .lineshapes import ErmEquivalentCircuit, ResonatorParams
from .network import FrequencySweep, ReferencePlaneShift, reduce_network, shift_reference_planes
from .perturbation import PerturbationGenerator, perturb_exact, perturb_first_order
from .tee import TeeEigenphases, tee_from_eigenphases

_DEGENERATE_TOL = 1e-12

# Indices (1-based) of generator components that break reciprocity when
# exponentiated; generate() refuses them because a passive tee cannot
# realize a non-reciprocal scattering matrix.
_NONRECIPROCAL_COMPONENTS = (1, 3, 4, 6, 8)


@dataclass(frozen=True)
class Scenario:
    """Complete description of one synthetic measurement."""

    resonator: ResonatorParams
    tee: TeeEigenphases
    f_start: float
    f_stop: float
    n_points: int = 401
    generator: PerturbationGenerator = field(
        default_factory=PerturbationGenerator.zero
    )
    g_ext: float = 0.0
    delays: tuple[float, float] = (0.0, 0.0)
    global_phase: float = 0.0
    noise_sigma: float = 0.0
    seed: int | None = None
    first_order: bool = False

    def __post_init__(self):
        if not self.f_start < self.resonator.f0 < self.f_stop:
            raise ValueError(
                f"band [{self.f_start:g}, {self.f_stop:g}] must contain "
                f"f0 = {self.resonator.f0:g}"
            )
        if self.n_points < 16:
            raise ValueError(f"n_points must be at least 16, got {self.n_points}")
        if not 0.0 <= self.g_ext < 1.0:
            raise ValueError(f"g_ext must lie in [0, 1), got {self.g_ext!r}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be nonnegative, got {self.noise_sigma!r}")
        if len(self.delays) != 2:
            raise ValueError("delays must be a (tau1, tau2) pair")
        object.__setattr__(
            self, "delays", (float(self.delays[0]), float(self.delays[1]))
        )

    @property
    def frequencies(self) -> np.ndarray:
        return np.linspace(self.f_start, self.f_stop, self.n_points)


def _check_generator(gen: PerturbationGenerator) -> None:
    bad = [n for n in _NONRECIPROCAL_COMPONENTS if gen.g[n - 1] != 0.0]
    if bad:
        raise ValueError(
            "generator components "
            + ", ".join(f"g{n}" for n in bad)
            + " break reciprocity; a physical tee perturbation cannot have them"
        )


def bare_arm_params(observed: ResonatorParams, x_e: float) -> ResonatorParams:
    """Invert the coupling-induced pull: bare arm parameters whose
    admittance-route lineshape reproduces `observed` exactly.

    The observed set is the bare one scaled by s = 1 + x_e/(2*Qc_bare),
    so Qc_bare = Qc_obs - x_e/2 solves the fixed point in closed form.
    """
    qc_bare = observed.Qc - x_e / 2.0
    if qc_bare <= 0:
        raise ValueError(
            f"observed Qc = {observed.Qc:g} too small for reactance {x_e:g}"
        )
    s = observed.Qc / qc_bare
    return ResonatorParams(observed.f0 / s, observed.Qi / s, qc_bare)


def generate(scenario: Scenario) -> FrequencySweep:
    """Synthesize the two-port sweep of a scenario.

    Chain: build the tee, apply the generator (exact conjugation by
    default, first-order commutator if scenario.first_order), terminate
    port 3 with the bare resonator arm, scale the common-mode eigenvalue
    by the coupling loss, shift reference planes by the port delays,
    rotate by the global phase, and add complex Gaussian noise per S
    entry (only when noise_sigma > 0; reproducible via seed).
    """
    tee = tee_from_eigenphases(scenario.tee)
    if abs(tee.gamma) < _DEGENERATE_TOL:
        raise ValueError(
            "tee has no port-3 coupling (gamma = 0); set theta2 != theta3"
        )
    beta = tee.coupling_beta()
    _check_generator(scenario.generator)

    matrix = tee.matrix
    if scenario.generator.norm > 0:
        perturb = perturb_first_order if scenario.first_order else perturb_exact
        matrix = perturb(matrix, scenario.generator)

    bare = bare_arm_params(scenario.resonator, beta.x_e)
    circuit = ErmEquivalentCircuit.from_resonator(bare, beta.x_e)
    f = scenario.frequencies
    y = circuit.g * (1.0 - 2j * bare.Qi * bare.detuning(f))
    gamma_arm = (1.0 - y) / (1.0 + y)

    s = reduce_network(matrix, 3, gamma_arm)

    if scenario.g_ext > 0:
        loss = (1.0 - scenario.g_ext) / (1.0 + scenario.g_ext)
        diag_avg = 0.5 * (s[:, 0, 0] + s[:, 1, 1])
        mu = 0.5 * (s[:, 0, 0] - s[:, 1, 1])
        s_cm = loss * (s[:, 1, 0] + diag_avg)
        s_dm = diag_avg - s[:, 1, 0]
        diag_avg = 0.5 * (s_cm + s_dm)
        off = 0.5 * (s_cm - s_dm)
        s = np.empty_like(s)
        s[:, 0, 0] = diag_avg + mu
        s[:, 1, 1] = diag_avg - mu
        s[:, 0, 1] = off
        s[:, 1, 0] = off

    sweep = FrequencySweep(f, s)
    if any(scenario.delays):
        sweep = shift_reference_planes(
            sweep, ReferencePlaneShift(np.array(scenario.delays))
        )
    s = sweep.s * np.exp(1j * scenario.global_phase)

    if scenario.noise_sigma > 0:
        rng = np.random.default_rng(scenario.seed)
        draws = rng.standard_normal((scenario.n_points, 2, 2, 2))
        s = s + scenario.noise_sigma * (draws[..., 0] + 1j * draws[..., 1])

    return FrequencySweep(f, s)


def default_cpw_scenario(seed: int | None = 20260815) -> Scenario:
    """A representative coplanar-waveguide hanger measurement.

    A 4.7 GHz resonator, ten-to-one undercoupled (Qi = 5e5, Qc = 1e5),
    read through a mildly asymmetric tee, with a small port-swap
    perturbation. The g2 value is tuned numerically so the band-averaged
    junction asymmetry sits at -25 dB.
    """
    f0 = 4.7076e9
    half_span = 1.13e6
    return Scenario(
        resonator=ResonatorParams(f0=f0, Qi=5e5, Qc=1e5),
        tee=TeeEigenphases(theta1=2.83, theta2=2.2, theta3=0.0),
        f_start=f0 - half_span,
        f_stop=f0 + half_span,
        n_points=401,
        generator=PerturbationGenerator.single(2, 0.0477),
        g_ext=0.0,
        delays=(0.0, 0.0),
        global_phase=0.4,
        noise_sigma=1e-3,
        seed=seed,
    )


def scenario_to_ini(scenario: Scenario) -> str:
    """Serialize a scenario to INI text (inverse of scenario_from_ini)."""
    cp = configparser.ConfigParser()
    cp["resonator"] = {
        "f0_hz": repr(scenario.resonator.f0),
        "qi": repr(scenario.resonator.Qi),
        "qc": repr(scenario.resonator.Qc),
    }
    cp["tee"] = {
        "theta1_rad": repr(scenario.tee.theta1),
        "theta2_rad": repr(scenario.tee.theta2),
        "theta3_rad": repr(scenario.tee.theta3),
    }
    cp["generator"] = {
        f"g{n}": repr(float(scenario.generator.g[n - 1])) for n in range(1, 9)
    }
    cp["channel"] = {
        "g_ext": repr(scenario.g_ext),
        "tau1_s": repr(scenario.delays[0]),
        "tau2_s": repr(scenario.delays[1]),
        "global_phase_rad": repr(scenario.global_phase),
    }
    sweep = {
        "f_start_hz": repr(scenario.f_start),
        "f_stop_hz": repr(scenario.f_stop),
        "n_points": str(scenario.n_points),
        "noise_sigma": repr(scenario.noise_sigma),
        "first_order": str(scenario.first_order).lower(),
    }
    if scenario.seed is not None:
        sweep["seed"] = str(scenario.seed)
    cp["sweep"] = sweep
    out = StringIO()
    cp.write(out)
    return out.getvalue()


def scenario_from_ini(text: str) -> Scenario:
    """Parse a scenario from INI text.

    Sections: [resonator] f0_hz/qi/qc, [tee] theta{1,2,3}_rad,
    [generator] g1..g8 (missing components default to zero),
    [channel] g_ext/tau1_s/tau2_s/global_phase_rad,
    [sweep] f_start_hz/f_stop_hz/n_points/noise_sigma/seed/first_order.
    Only [resonator], [tee], and [sweep] are required.
    """
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ValueError(f"bad scenario file: {exc}") from exc

    for section in ("resonator", "tee", "sweep"):
        if not cp.has_section(section):
            raise ValueError(f"scenario file is missing the [{section}] section")

    res = cp["resonator"]
    tee = cp["tee"]
    sweep = cp["sweep"]
    gen = np.zeros(8)
    if cp.has_section("generator"):
        for n in range(1, 9):
            gen[n - 1] = cp["generator"].getfloat(f"g{n}", fallback=0.0)
    channel = cp["channel"] if cp.has_section("channel") else {}

    def chan_float(key: str, default: float) -> float:
        value = channel.get(key) if channel else None
        return float(value) if value is not None else default

    seed = sweep.getint("seed", fallback=None)
    try:
        return Scenario(
            resonator=ResonatorParams(
                f0=res.getfloat("f0_hz"),
                Qi=res.getfloat("qi"),
                Qc=res.getfloat("qc"),
            ),
            tee=TeeEigenphases(
                theta1=tee.getfloat("theta1_rad"),
                theta2=tee.getfloat("theta2_rad"),
                theta3=tee.getfloat("theta3_rad", fallback=0.0),
            ),
            f_start=sweep.getfloat("f_start_hz"),
            f_stop=sweep.getfloat("f_stop_hz"),
            n_points=sweep.getint("n_points", fallback=401),
            generator=PerturbationGenerator(gen),
            g_ext=chan_float("g_ext", 0.0),
            delays=(chan_float("tau1_s", 0.0), chan_float("tau2_s", 0.0)),
            global_phase=chan_float("global_phase_rad", 0.0),
            noise_sigma=sweep.getfloat("noise_sigma", fallback=0.0),
            seed=seed,
            first_order=sweep.getboolean("first_order", fallback=False),
        )
    except (TypeError, configparser.Error) as exc:
        raise ValueError(f"bad scenario file: {exc}") from exc
