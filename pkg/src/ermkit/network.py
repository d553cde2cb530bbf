"""Scattering-network algebra.

Complex S-matrix port reduction, reference-plane shifts, eigenmode
separation of symmetric two-ports, and passivity/reciprocity/unitarity
diagnostics. All operations are pure functions on immutable values and
accept stacked matrices of shape ``(..., n, n)``, broadcasting over the
leading axes, so per-frequency work vectorizes.

Ports are numbered 1..n at the API surface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SingularLoopError
from .validation import (
    as_float_array,
    as_square_matrices,
    check_port_index,
    check_same_length,
    check_strictly_increasing,
)

EPS_SINGULAR = 1e-14


def _readonly(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FrequencySweep:
    """A strictly increasing frequency grid with one n-port S-matrix per point.

    Parameters
    ----------
    frequencies : array of float, shape (n_points,)
        Frequencies in Hz, strictly increasing, at least two points.
    s : array of complex, shape (n_points, n_ports, n_ports)
        Scattering matrices, one per frequency.
    """

    frequencies: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        f = as_float_array(self.frequencies, "frequencies")
        s = as_square_matrices(self.s, "s")
        if s.ndim != 3:
            raise ValueError(f"s must have shape (n_points, n, n), got {s.shape}")
        check_same_length(f, s, "frequencies", "s")
        if len(f) < 2:
            raise ValueError("a sweep needs at least 2 frequency points")
        check_strictly_increasing(f)
        object.__setattr__(self, "frequencies", _readonly(f))
        object.__setattr__(self, "s", _readonly(s))

    @property
    def n_points(self) -> int:
        return self.frequencies.shape[0]

    @property
    def n_ports(self) -> int:
        return self.s.shape[-1]

    def s_param(self, i: int, j: int) -> np.ndarray:
        """The complex trace S_ij over frequency, with 1-based port indices."""
        check_port_index(i, self.n_ports)
        check_port_index(j, self.n_ports)
        return self.s[:, i - 1, j - 1]

    def crop(self, f_min: float, f_max: float) -> "FrequencySweep":
        """Sub-sweep restricted to f_min <= f <= f_max."""
        mask = (self.frequencies >= f_min) & (self.frequencies <= f_max)
        if np.count_nonzero(mask) < 2:
            raise ValueError(
                f"band [{f_min}, {f_max}] Hz keeps fewer than 2 of the "
                f"{self.n_points} sweep points"
            )
        return FrequencySweep(self.frequencies[mask], self.s[mask])


@dataclass(frozen=True)
class ReferencePlaneShift:
    """One-way electrical delays, one per port, in seconds (may be negative).

    Shifting planes multiplies S by the diagonal phase matrix
    P_kk(f) = exp(2*pi*i*f*tau_k) on both sides: S' = P S P. Note P appears
    twice (never its inverse): a delay on port k rotates S_kk twice and
    every S_jk once.
    """

    delays: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "delays", _readonly(as_float_array(self.delays, "delays"))
        )

    def phases(self, frequencies: np.ndarray) -> np.ndarray:
        """P diagonal entries, shape (n_points, n_ports)."""
        return np.exp(2j * np.pi * np.outer(frequencies, self.delays))


def reduce_network(s, k: int, gamma, eps: float = EPS_SINGULAR) -> np.ndarray:
    """Terminate port k with reflection gamma and eliminate it.

    Implements S^R_ij = S_ij + S_ik * gamma * S_kj / (1 - S_kk * gamma),
    returning the (n-1)-port matrix with indices relabeled to skip k.

    Parameters
    ----------
    s : complex array, shape (..., n, n)
        One matrix or a stack; leading axes broadcast against gamma.
    k : int
        Port to terminate, 1-based.
    gamma : complex scalar or array broadcastable to the leading shape
        Termination reflection coefficient.
    eps : float
        Singularity threshold on |1 - S_kk * gamma|.

    Raises
    ------
    SingularLoopError
        If any |1 - S_kk * gamma| <= eps (lossless loop resonance).
    """
    s = as_square_matrices(s)
    n = s.shape[-1]
    if n < 2:
        raise ValueError("cannot reduce a 1-port")
    check_port_index(k, n)
    k0 = k - 1
    gamma = np.asarray(gamma, dtype=complex)

    denom = 1.0 - s[..., k0, k0] * gamma
    if np.any(np.abs(denom) <= eps):
        raise SingularLoopError(
            f"|1 - S_{k}{k}*gamma| <= {eps:g}: termination forms a "
            "singular lossless loop"
        )

    keep = [i for i in range(n) if i != k0]
    core = s[..., keep, :][..., :, keep]
    col = s[..., keep, k0]
    row = s[..., k0, :][..., keep]
    scale = (gamma / denom)[..., None, None]
    return core + scale * (col[..., :, None] * row[..., None, :])


def shift_reference_planes(
    sweep: FrequencySweep, shift: ReferencePlaneShift
) -> FrequencySweep:
    """Apply per-port delays to a sweep: S'(f) = P(f) S(f) P(f)."""
    if len(shift.delays) != sweep.n_ports:
        raise ValueError(
            f"shift has {len(shift.delays)} delays for a "
            f"{sweep.n_ports}-port sweep"
        )
    p = shift.phases(sweep.frequencies)
    s = p[:, :, None] * sweep.s * p[:, None, :]
    return FrequencySweep(sweep.frequencies, s)


def eigenmodes_symmetric2(s) -> tuple[np.ndarray, np.ndarray]:
    """Common/differential eigenvalues of 2x2 matrices.

    For an exactly symmetric S = [[a, d], [d, a]] these are the eigenvalues
    a+d (eigenvector (1,1)/sqrt2) and a-d (eigenvector (1,-1)/sqrt2). For
    S11 != S22 the averaged forms are used:

        s_cm = S21 + (S11 + S22)/2
        s_dm = (S11 + S22)/2 - S21

    so that s_cm + s_dm = S11 + S22 and s_cm - s_dm = 2*S21 always hold.
    Accepts stacks of shape (..., 2, 2); returns arrays of the leading shape.
    """
    s = as_square_matrices(s)
    if s.shape[-1] != 2:
        raise ValueError(f"expected 2x2 matrices, got {s.shape}")
    diag_avg = 0.5 * (s[..., 0, 0] + s[..., 1, 1])
    s21 = s[..., 1, 0]
    return s21 + diag_avg, diag_avg - s21


def check_passivity(s) -> np.ndarray:
    """Largest singular value; <= 1 + tol for a physical (passive) network."""
    s = as_square_matrices(s)
    return np.linalg.svd(s, compute_uv=False)[..., 0]


def check_reciprocity(s) -> np.ndarray:
    """max |S_ij - S_ji|; 0 for a reciprocal network."""
    s = as_square_matrices(s)
    return np.abs(s - np.swapaxes(s, -1, -2)).max(axis=(-1, -2))


def check_unitarity(s) -> np.ndarray:
    """max |(S^H S - I)_ij|; 0 for a lossless network."""
    s = as_square_matrices(s)
    n = s.shape[-1]
    gram = np.swapaxes(s, -1, -2).conj() @ s
    return np.abs(gram - np.eye(n)).max(axis=(-1, -2))
