"""Symmetric lossless tee-junctions and their mode decomposition.

A tee with interchangeable feed ports (1 and 2) commutes with the
port-exchange permutation F, so it is diagonalized by a fixed real basis:
the differential mode (1,-1,0)/sqrt(2) and two symmetric modes
(1,1,-sqrt(2))/2 and (1,1,sqrt(2))/2. Three unimodular eigenvalues
s_n = exp(i*theta_n) then determine the junction completely. Reference
planes at port 3 are conventionally chosen so that s3 = 1; junctions with
free s3 are allowed for diagnostics, and the phase-normalized case is
flagged rather than enforced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NotSymmetricError
from .lineshapes import CouplingBeta, mobius_map
from .network import reduce_network
from .validation import as_square_matrices

_SQRT2 = float(np.sqrt(2.0))

# Columns: differential mode, then the two symmetric modes. Orthonormal,
# real, and independent of the junction parameters.
MODE_BASIS = np.array(
    [
        [_SQRT2 / 2.0, 0.5, 0.5],
        [-_SQRT2 / 2.0, 0.5, 0.5],
        [0.0, -_SQRT2 / 2.0, _SQRT2 / 2.0],
    ]
)
MODE_BASIS.setflags(write=False)

# Port 1 <-> 2 exchange.
PORT_SWAP = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
PORT_SWAP.setflags(write=False)

_UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class TeeEigenphases:
    """Eigenphases of the three covering-symmetry modes, radians."""

    theta1: float
    theta2: float
    theta3: float = 0.0

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.exp(
            1j * np.array([self.theta1, self.theta2, self.theta3], dtype=float)
        )


@dataclass(frozen=True)
class TeeJunction:
    """Scattering parameters of a symmetric three-port.

    The matrix layout is [[alpha, delta, gamma], [delta, alpha, gamma],
    [gamma, gamma, beta]]. alpha + delta = beta holds for every junction in
    this family; beta + sqrt(2)*gamma equals the third eigenvalue s3, and
    the phase-normalized convention pins s3 = 1.
    """

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.alpha + self.delta - self.beta) > _UNITARITY_TOL:
            raise ValueError(
                "alpha + delta must equal beta for a symmetric lossless tee; "
                f"residual {abs(self.alpha + self.delta - self.beta):.3e}"
            )
        m = self.matrix
        residual = np.max(np.abs(m.conj().T @ m - np.eye(3)))
        if residual > _UNITARITY_TOL:
            raise ValueError(f"tee matrix is not unitary; residual {residual:.3e}")

    @property
    def matrix(self) -> np.ndarray:
        a, b, g, d = self.alpha, self.beta, self.gamma, self.delta
        return np.array([[a, d, g], [d, a, g], [g, g, b]])

    @property
    def s3(self) -> complex:
        """Third mode eigenvalue; 1 under the phase-normalized convention."""
        return self.beta + _SQRT2 * self.gamma

    @property
    def is_phase_normalized(self) -> bool:
        return abs(self.s3 - 1.0) <= _UNITARITY_TOL

    def coupling_beta(self) -> CouplingBeta:
        """Reflection of the resonator port as a lossless coupling
        coefficient; requires the s3 = 1 convention."""
        if not self.is_phase_normalized:
            raise ValueError(
                f"coupling beta requires s3 = 1; got s3 = {self.s3:.6g}"
            )
        return CouplingBeta(self.beta)


def tee_from_eigenphases(e: TeeEigenphases) -> TeeJunction:
    """Assemble the junction from its three mode eigenphases.

    S = A diag(s1, s2, s3) A^T over the fixed MODE_BASIS, which reduces to
    alpha = (2 s1 + s2 + s3)/4, beta = (s2 + s3)/2,
    gamma = sqrt(2)(s3 - s2)/4, delta = (-2 s1 + s2 + s3)/4.
    Unitary by construction for any phases.
    """
    s1, s2, s3 = e.eigenvalues
    return TeeJunction(
        alpha=0.25 * (2.0 * s1 + s2 + s3),
        beta=0.5 * (s2 + s3),
        gamma=0.25 * _SQRT2 * (s3 - s2),
        delta=0.25 * (-2.0 * s1 + s2 + s3),
    )


def verify_covering_symmetry(s: np.ndarray) -> float:
    """Max-norm residual of F^-1 S F - S under the port 1 <-> 2 exchange.

    Zero exactly when the feed ports are interchangeable.
    """
    s = as_square_matrices(np.asarray(s, dtype=complex), "s")
    if s.shape != (3, 3):
        raise ValueError(f"expected a single 3x3 matrix, got shape {s.shape}")
    return float(np.max(np.abs(PORT_SWAP @ s @ PORT_SWAP - s)))


def eigenphases_from_tee(t, tol: float = 1e-9) -> TeeEigenphases:
    """Recover the mode eigenphases from a junction.

    Accepts a TeeJunction or a raw 3x3 matrix. Each eigenvalue comes from
    projecting onto its fixed MODE_BASIS column (s1 = alpha - delta,
    s2 = beta - sqrt(2)*gamma, s3 = beta + sqrt(2)*gamma), so there is no
    ordering ambiguity. Raw matrices are first checked for covering
    symmetry; eigenvalues must be unimodular within tol.
    """
    if isinstance(t, TeeJunction):
        alpha, beta, gamma, delta = t.alpha, t.beta, t.gamma, t.delta
    else:
        m = np.asarray(t, dtype=complex)
        residual = verify_covering_symmetry(m)
        if residual > tol:
            raise NotSymmetricError(
                f"covering-symmetry residual {residual:.3e} exceeds tol {tol:g}"
            )
        alpha = 0.5 * (m[0, 0] + m[1, 1])
        delta = 0.5 * (m[0, 1] + m[1, 0])
        gamma = 0.25 * (m[0, 2] + m[1, 2] + m[2, 0] + m[2, 1])
        beta = m[2, 2]
    s = np.array(
        [alpha - delta, beta - _SQRT2 * gamma, beta + _SQRT2 * gamma], dtype=complex
    )
    bad = np.abs(np.abs(s) - 1.0) > tol
    if np.any(bad):
        raise ValueError(
            f"mode eigenvalues not unimodular within {tol:g}: |s| = {np.abs(s)}"
        )
    th = np.angle(s)
    return TeeEigenphases(float(th[0]), float(th[1]), float(th[2]))


def erm_identity_check(t: TeeJunction, gamma_res) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the reflection-mode identity for a terminated tee.

    lhs: common-mode eigenvalue S21R + (S11R + S22R)/2 of the 2-port left
    after terminating port 3 with gamma_res. rhs: the Mobius reflection-mode
    map of the tee's beta applied to gamma_res. The two agree to machine
    precision whenever s3 = 1. Broadcasts over gamma_res.
    """
    gamma_res = np.asarray(gamma_res, dtype=complex)
    reduced = reduce_network(t.matrix, 3, gamma_res)
    lhs = reduced[..., 1, 0] + 0.5 * (reduced[..., 0, 0] + reduced[..., 1, 1])
    rhs = mobius_map(t.coupling_beta(), gamma_res)
    return lhs, rhs
