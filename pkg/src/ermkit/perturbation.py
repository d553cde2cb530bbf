"""Unitary perturbations of the tee-junction in the Gell-Mann basis.

Small imperfections of a nominally symmetric junction are modeled as
S = exp(-iG) S0 exp(iG) with G a Hermitian combination of the eight
Gell-Mann generators. Conjugation by exp(iG) preserves unitarity for any
G; to first order the perturbation is the commutator [S0, iG].

Generators split by transpose parity: the antisymmetric trio (2, 5, 7)
keeps the network reciprocal, the symmetric five (1, 3, 4, 6, 8) do not.
Within the reciprocal trio, the combination (lambda5 + lambda7)/sqrt(2)
commutes with the port-exchange permutation and so leaves the covering
symmetry intact; only lambda2 and (lambda5 - lambda7)/sqrt(2) produce an
observable feed-port asymmetry after the resonator port is terminated.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateJunctionError
from .network import FrequencySweep, check_reciprocity, reduce_network
from .tee import TeeJunction
from .validation import as_float_array

_SQRT2 = float(np.sqrt(2.0))
_SQRT3 = float(np.sqrt(3.0))


def _gell_mann_stack() -> np.ndarray:
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0] = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    lam[1] = [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]
    lam[2] = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
    lam[3] = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
    lam[4] = [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]
    lam[5] = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
    lam[6] = [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]
    lam[7] = np.diag([1.0, 1.0, -2.0]) / _SQRT3
    lam.setflags(write=False)
    return lam


GELL_MANN = _gell_mann_stack()

# Antisymmetric (reciprocity-preserving) generator indices, 1-based.
RECIPROCAL_INDICES = (2, 5, 7)
NONRECIPROCAL_INDICES = (1, 3, 4, 6, 8)

# Combinations of lambda5 and lambda7 adapted to the port exchange:
# LAMBDA_PLUS commutes with it, LAMBDA_MINUS anticommutes.
LAMBDA_MINUS = (GELL_MANN[4] - GELL_MANN[6]) / _SQRT2
LAMBDA_MINUS.setflags(write=False)
LAMBDA_PLUS = (GELL_MANN[4] + GELL_MANN[6]) / _SQRT2
LAMBDA_PLUS.setflags(write=False)


def gell_mann(n: int) -> np.ndarray:
    """Gell-Mann matrix lambda_n, n = 1..8.

    Hermitian, traceless, and orthonormal under (1/2) Tr(lambda_m lambda_n).
    """
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= 8):
        raise IndexError(f"Gell-Mann index must be in 1..8, got {n!r}")
    return GELL_MANN[n - 1].copy()


@dataclass(frozen=True)
class GellMannBasis:
    """The eight generators as a read-only (8, 3, 3) stack."""

    matrices: np.ndarray = field(default_factory=lambda: GELL_MANN)

    def matrix(self, n: int) -> np.ndarray:
        return gell_mann(n)


@dataclass(frozen=True)
class PerturbationGenerator:
    """Real coefficients g1..g8 over the Gell-Mann basis.

    G = sum_n g_n lambda_n is Hermitian by construction; intended for
    |g_n| << 1 though perturb_exact stays unitary for any size.
    """

    g: np.ndarray

    def __post_init__(self):
        g = as_float_array(self.g, "g")
        if g.shape != (8,):
            raise ValueError(f"need exactly 8 coefficients, got shape {g.shape}")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @classmethod
    def zero(cls) -> "PerturbationGenerator":
        return cls(np.zeros(8))

    @classmethod
    def single(cls, n: int, value: float) -> "PerturbationGenerator":
        g = np.zeros(8)
        g[n - 1] = value
        return cls(g)

    @property
    def matrix(self) -> np.ndarray:
        return np.tensordot(self.g, GELL_MANN, axes=(0, 0))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.g))


def _as_matrix3(s0) -> np.ndarray:
    if isinstance(s0, TeeJunction):
        return s0.matrix
    m = np.asarray(s0, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"expected a TeeJunction or 3x3 matrix, got shape {m.shape}")
    return m


def perturb_exact(s0, gen: PerturbationGenerator) -> np.ndarray:
    """Exact unitary conjugation exp(-iG) S0 exp(iG).

    The exponentials come from the eigendecomposition of the Hermitian G,
    so the result is unitary to machine precision for any coefficient size.
    """
    m = _as_matrix3(s0)
    w, v = np.linalg.eigh(gen.matrix)
    u = (v * np.exp(1j * w)) @ v.conj().T
    u_inv = (v * np.exp(-1j * w)) @ v.conj().T
    return u_inv @ m @ u


def perturb_first_order(s0, gen: PerturbationGenerator) -> np.ndarray:
    """First-order expansion S0 + [S0, iG] of the exact conjugation.

    The gap to perturb_exact shrinks quadratically in the coefficients.
    """
    m = _as_matrix3(s0)
    g = gen.matrix
    return m + 1j * (m @ g - g @ m)


def classify_reciprocity(n: int, s0, tol: float = 1e-12) -> str:
    """Classify generator lambda_n as 'reciprocal' or 'non_reciprocal'.

    Decided numerically: the reciprocity residual of S0 + [S0, i*lambda_n]
    is compared against tol. Antisymmetric generators give a structurally
    symmetric perturbation, so a vanishing residual there is conclusive;
    for a symmetric generator it means S0 commutes with lambda_n (e.g.
    gamma = 0 decouples the feed pair) and the junction cannot
    discriminate, which raises DegenerateJunctionError.
    """
    lam = gell_mann(n)
    perturbed = perturb_first_order(s0, PerturbationGenerator.single(n, 1.0))
    residual = float(check_reciprocity(perturbed))
    if residual > tol:
        return "non_reciprocal"
    if np.array_equal(lam.T, -lam):
        return "reciprocal"
    raise DegenerateJunctionError(
        f"junction commutes with lambda_{n} (reciprocity residual "
        f"{residual:.3e}); too symmetric to classify the generator"
    )


def reduced_splitting(
    s0: TeeJunction, gen: PerturbationGenerator, gamma_res
) -> tuple[np.ndarray, np.ndarray]:
    """Feed-port splitting of the reduced 2-port under a small perturbation.

    Projects the generator onto the observable reciprocal subspace spanned
    by lambda2 and (lambda5 - lambda7)/sqrt(2), zeroing anything else with
    a warning: non-reciprocal components are unphysical here and the
    lambda_plus component commutes with the port exchange, contributing no
    splitting. Port 3 of the first-order perturbed junction is then
    terminated with gamma_res.

    Returns (symmetric_part, mu): the port-symmetric average
    [[m, o], [o, m]] with m = (S11R + S22R)/2 and o = (S12R + S21R)/2,
    and the asymmetry mu = (S11R - S22R)/2. Broadcasts over gamma_res.
    """
    g = gen.g
    g2 = g[1]
    g_minus = (g[4] - g[6]) / _SQRT2
    g_plus = (g[4] + g[6]) / _SQRT2
    dropped = [f"g{i + 1}" for i in (0, 2, 3, 5, 7) if g[i] != 0.0]
    if g_plus != 0.0:
        dropped.append("(g5+g7) symmetric combination")
    if dropped:
        warnings.warn(
            "reduced_splitting keeps only the lambda2 and "
            "(lambda5-lambda7)/sqrt(2) components; zeroing " + ", ".join(dropped),
            stacklevel=2,
        )
    g_matrix = g2 * GELL_MANN[1] + g_minus * LAMBDA_MINUS
    m0 = s0.matrix
    perturbed = m0 + 1j * (m0 @ g_matrix - g_matrix @ m0)

    gamma_res = np.asarray(gamma_res, dtype=complex)
    reduced = reduce_network(perturbed, 3, gamma_res)
    m = 0.5 * (reduced[..., 0, 0] + reduced[..., 1, 1])
    o = 0.5 * (reduced[..., 0, 1] + reduced[..., 1, 0])
    mu = 0.5 * (reduced[..., 0, 0] - reduced[..., 1, 1])
    symmetric = np.stack(
        [np.stack([m, o], axis=-1), np.stack([o, m], axis=-1)], axis=-2
    )
    return symmetric, mu


@dataclass(frozen=True)
class JunctionAsymmetry:
    """Per-frequency feed-port asymmetry mu = (S11 - S22)/2."""

    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=complex).copy()
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    @property
    def db(self) -> np.ndarray:
        """20*log10|mu| per point; -inf where mu vanishes."""
        mag = np.abs(self.mu)
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(mag)

    @property
    def band_average_db(self) -> float:
        """20*log10 of the band-averaged |mu|."""
        return float(20.0 * np.log10(np.mean(np.abs(self.mu))))


def extract_mu(sweep: FrequencySweep) -> JunctionAsymmetry:
    """Asymmetry trace mu(f) = (S11(f) - S22(f))/2 of a 2-port sweep."""
    if sweep.n_ports != 2:
        raise ValueError(f"expected a 2-port sweep, got {sweep.n_ports} ports")
    mu = 0.5 * (sweep.s[:, 0, 0] - sweep.s[:, 1, 1])
    return JunctionAsymmetry(mu)
