"""Input validation helpers shared by the public API surface.

These are deliberately small: they normalize array-likes to the dtypes the
numeric kernels expect and raise uniform, descriptive errors. Estimator
classes use them in ``fit``/``transform``; the pure functions use them at
their entry points.
"""

from __future__ import annotations

import numpy as np


def as_float_array(x, name: str = "array") -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting NaN/inf."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_complex_array(x, name: str = "array") -> np.ndarray:
    """Coerce to a 1-D complex128 array, rejecting NaN/inf."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_strictly_increasing(f: np.ndarray, name: str = "frequencies") -> None:
    if f.size >= 2 and not np.all(np.diff(f) > 0):
        raise ValueError(f"{name} must be strictly increasing")


def check_same_length(a, b, name_a: str, name_b: str) -> None:
    if len(a) != len(b):
        raise ValueError(
            f"{name_a} and {name_b} must have the same length "
            f"({len(a)} != {len(b)})"
        )


def as_square_matrices(s, name: str = "S") -> np.ndarray:
    """Coerce to complex matrices of shape (..., n, n), n >= 1."""
    arr = np.asarray(s, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2] or arr.shape[-1] < 1:
        raise ValueError(
            f"{name} must have shape (..., n, n) with n >= 1, got {arr.shape}"
        )
    return arr


def check_port_index(k: int, n_ports: int) -> None:
    """Ports are numbered 1..n at the API surface."""
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= n_ports):
        raise ValueError(f"port index must be in 1..{n_ports}, got {k!r}")


def check_positive(value: float, name: str) -> None:
    if not (value > 0):
        raise ValueError(f"{name} must be positive, got {value!r}")


def check_nonnegative(value: float, name: str) -> None:
    if not (value >= 0):
        raise ValueError(f"{name} must be >= 0, got {value!r}")
