"""Closed-form frequency-domain resonator models.

Covers the reflection of a parallel RLC, the reflection-mode (Mobius) map
of a lossless coupling network, the effective-reflection-mode lineshape by
two independent derivation routes, the asymmetric hanger transmission, and
the lossy-coupling variant. All model functions broadcast over frequency
arrays and are pure.

Conventions: the off-resonant reflection-mode point is +1 (plane of the
detuned open); overall amplitude and phase are pipeline concerns, not
model parameters here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SingularLoopError
from .validation import check_nonnegative, check_positive

_BETA_TOL = 1e-9


@dataclass(frozen=True)
class ResonatorParams:
    """Resonant frequency and quality factors of a single resonance.

    The total quality factor combines the internal and coupling losses:
    1/Q = 1/Qi + 1/Qc, so Q < min(Qi, Qc).
    """

    f0: float
    Qi: float
    Qc: float

    def __post_init__(self):
        check_positive(self.f0, "f0")
        check_positive(self.Qi, "Qi")
        check_positive(self.Qc, "Qc")

    @property
    def Q(self) -> float:
        return 1.0 / (1.0 / self.Qi + 1.0 / self.Qc)

    def scaled(self, factor: float) -> "ResonatorParams":
        """All three parameters multiplied by a common factor."""
        return ResonatorParams(self.f0 * factor, self.Qi * factor, self.Qc * factor)

    def detuning(self, f) -> np.ndarray:
        """Fractional detuning nu = (f - f0)/f0."""
        return (np.asarray(f, dtype=float) - self.f0) / self.f0


@dataclass(frozen=True)
class CouplingBeta:
    """Reflection coefficient of the coupling port of a lossless,
    symmetric coupling network.

    Unitarity imposes two simultaneous conditions: beta is orthogonal to
    1 - beta in the complex plane, and |beta|^2 + |1-beta|^2 = 1. Both are
    enforced at construction. Such a beta is parameterized by one real
    number, the normalized external reactance x_e, via
    beta = -i*x_e / (2 - i*x_e).
    """

    beta: complex

    def __post_init__(self):
        b = complex(self.beta)
        object.__setattr__(self, "beta", b)
        c = 1.0 - b
        if abs((b * np.conj(c)).real) > _BETA_TOL * max(abs(b) * abs(c), _BETA_TOL):
            raise ValueError(
                f"beta={b} is not orthogonal to 1-beta; not a lossless coupling"
            )
        if abs(abs(b) ** 2 + abs(c) ** 2 - 1.0) > _BETA_TOL:
            raise ValueError(
                f"beta={b} violates |beta|^2 + |1-beta|^2 = 1; not lossless"
            )

    @classmethod
    def from_reactance(cls, x_e: float) -> "CouplingBeta":
        return cls(-1j * x_e / (2.0 - 1j * x_e))

    @property
    def x_e(self) -> float:
        """Normalized external reactance; real for any valid beta."""
        return float((2j * self.beta / (1.0 - self.beta)).real)

    def detuned_short_image(self) -> complex:
        """M(-1), the image of the detuned resonator (Gamma = -1) under the
        reflection-mode map; always on the unit circle."""
        x = self.x_e
        return (-1j * x - 1.0) / (-1j * x + 1.0)


@dataclass(frozen=True)
class ErmEquivalentCircuit:
    """Normalized equivalent circuit of the reflection mode.

    Fields: external reactance x_e, shunt conductance g = Z0/R of the
    resonator arm, normalized resistance r = (x_e^2 + 1)*g seen from the
    feed, and the coupling-induced fractional frequency shift
    nu_shift = x_e / (2*Q*(r+1)). The reactive divider raises the observed
    coupling Q by (x_e^2 + 1) relative to the bare arm conductance:
    Qc = (x_e^2 + 1)*g*Qi and r = Qc/Qi.
    """

    x_e: float
    g: float
    r: float
    nu_shift: float

    @classmethod
    def from_resonator(cls, p: ResonatorParams, x_e: float) -> "ErmEquivalentCircuit":
        r = p.Qc / p.Qi
        g = r / (x_e**2 + 1.0)
        nu_shift = x_e / (2.0 * p.Qc)
        return cls(x_e=x_e, g=g, r=r, nu_shift=nu_shift)

    def observed_params(self, p: ResonatorParams) -> ResonatorParams:
        """Resonator parameters after absorbing the coupling-induced shift.

        The admittance-route lineshape is exactly the ideal one evaluated
        at f0, Qi, and Qc all scaled by (1 + nu_shift): the scaling keeps
        Q*(f - f0')/f0' identical to Q*(nu - nu_shift) at every frequency.
        """
        return p.scaled(1.0 + self.nu_shift)


@dataclass(frozen=True)
class HangerParams:
    """Hanger (side-coupled, probed in transmission) lineshape parameters.

    phi0 is the Fano asymmetry angle at resonance; phi_slope adds an
    affine frequency dependence phi(f) = phi0 + phi_slope*(f - f0).
    """

    base: ResonatorParams
    phi0: float
    phi_slope: float = 0.0

    def __post_init__(self):
        if not (-np.pi < self.phi0 <= np.pi):
            raise ValueError(f"phi0 must lie in (-pi, pi], got {self.phi0!r}")

    def phi(self, f) -> np.ndarray:
        return self.phi0 + self.phi_slope * (np.asarray(f, dtype=float) - self.base.f0)


@dataclass(frozen=True)
class LossyErmParams:
    """Reflection-mode parameters with a lossy coupling arm.

    g_ext is the normalized external shunt conductance; g_ext = 0 recovers
    the ideal reflection mode, g_ext = 1 absorbs everything.
    """

    base: ResonatorParams
    g_ext: float

    def __post_init__(self):
        check_nonnegative(self.g_ext, "g_ext")

    @property
    def off_resonant_magnitude(self) -> float:
        return (1.0 - self.g_ext) / (1.0 + self.g_ext)


def _lorentzian_denominator(p: ResonatorParams, f) -> np.ndarray:
    return 1.0 - 2j * p.Q * p.detuning(f)


def rlc_reflection(p: ResonatorParams, f) -> np.ndarray:
    """Reflection of a parallel RLC: -1 + (2Q/Qc)/(1 - 2iQ(f-f0)/f0).

    Off resonance this tends to -1 (detuned short); at critical coupling
    (Q/Qc = 1/2) it passes through the origin at f0.
    """
    return -1.0 + (2.0 * p.Q / p.Qc) / _lorentzian_denominator(p, f)


def mobius_map(beta: CouplingBeta, gamma, eps: float = 1e-14) -> np.ndarray:
    """Reflection-mode map M(Gamma) = (beta + (1-2*beta)*Gamma)/(1 - beta*Gamma).

    Broadcasts over gamma. Raises SingularLoopError where the loop
    denominator |1 - beta*Gamma| falls at or below eps.
    """
    b = beta.beta
    gamma = np.asarray(gamma, dtype=complex)
    denom = 1.0 - b * gamma
    if np.any(np.abs(denom) <= eps):
        raise SingularLoopError(
            f"|1 - beta*gamma| <= {eps:g} in the reflection-mode map"
        )
    return (b + (1.0 - 2.0 * b) * gamma) / denom


def erm_response(p: ResonatorParams, f) -> np.ndarray:
    """Effective-reflection-mode lineshape: 1 - (2Q/Qc)/(1 - 2iQ(f-f0)/f0).

    The mirror image of rlc_reflection: off-resonant point +1 (detuned
    open), resonance circle of diameter 2Q/Qc toward the origin.
    """
    return 1.0 - (2.0 * p.Q / p.Qc) / _lorentzian_denominator(p, f)


def erm_via_admittance(c: ErmEquivalentCircuit, p: ResonatorParams, f) -> np.ndarray:
    """Reflection-mode lineshape from the equivalent input impedance.

    Builds z(f) = (x_e^2 + 1)*y(f) + i*x_e with y = g*(1 - 2i*Qi*nu) the
    normalized arm admittance, and returns Gamma = 1 - 2/(z + 1). Equals
    erm_response evaluated at c.observed_params(p) to machine precision:
    the only effect of the reactive divider is the nu_shift rescale.
    """
    nu = p.detuning(f)
    y = c.g * (1.0 - 2j * p.Qi * nu)
    z = (c.x_e**2 + 1.0) * y + 1j * c.x_e
    return 1.0 - 2.0 / (z + 1.0)


def hanger_s21(h: HangerParams, f) -> np.ndarray:
    """Hanger transmission as the mean of the two reduced-network
    eigenvalues: S21 = (exp(-2i*phi(f)) + Gamma_ERM(f))/2.

    This eigenvalue-sum form is numerically stable at phi = pi/2, where
    the equivalent prefactor form (see hanger_s21_prefactor_form) hits the
    tan(phi) singularity. For phi past pi/2 the interference turns the dip
    into a peak: |S21| exceeds the off-resonant level near resonance.
    """
    phi = h.phi(f)
    return 0.5 * (np.exp(-2j * phi) + erm_response(h.base, f))


def hanger_s21_prefactor_form(h: HangerParams, f) -> np.ndarray:
    """Equivalent asymmetric-prefactor form of hanger_s21, valid wherever
    cos(phi) != 0:

        exp(-i*phi)*cos(phi) * (1 - (Q/Qc)*(1 + i*tan(phi)) / D(f))

    Provided for verification only; hanger_s21 is the implementation.
    """
    p = h.base
    phi = h.phi(f)
    d = _lorentzian_denominator(p, f)
    return (
        np.exp(-1j * phi)
        * np.cos(phi)
        * (1.0 - (p.Q / p.Qc) * (1.0 + 1j * np.tan(phi)) / d)
    )


def lossy_erm_response(l: LossyErmParams, f) -> np.ndarray:
    """Reflection mode with a lossy coupling arm:
    s_cm = ((1 - g_ext)/(1 + g_ext)) * Gamma_ERM(f).

    The off-resonant magnitude drops to (1-g_ext)/(1+g_ext) < 1; the
    lineshape is otherwise unchanged.
    """
    return l.off_resonant_magnitude * erm_response(l.base, f)
