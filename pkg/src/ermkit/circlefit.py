"""Algebraic circle fitting for complex-plane traces.

Taubin's gradient-weighted algebraic fit, computed through the SVD for
numerical stability. Near-degenerate clouds (all points coincident) are
handled explicitly so downstream objectives stay finite.
"""

from __future__ import annotations

import numpy as np


def fit_circle_taubin(points: np.ndarray) -> tuple[complex, float]:
    """Best-fit circle through complex points; returns (center, radius).

    Uses Taubin's method: minimize the algebraic distance normalized by
    the gradient magnitude, solved via the SVD of the centered design
    matrix. Exact for points lying on a circle. A point-like cloud
    (spread below ~1e-13 of its scale) returns the centroid and the rms
    spread as radius; a perfectly straight line yields a huge but finite
    radius.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if z.size < 3:
        raise ValueError(f"circle fit needs at least 3 points, got {z.size}")
    centroid = z.mean()
    w = z - centroid
    spread = np.sqrt(np.mean(np.abs(w) ** 2))
    if spread <= 1e-13 * max(1.0, abs(centroid)):
        return centroid, float(spread)

    u = w.real
    v = w.imag
    q = u * u + v * v
    q_mean = q.mean()
    scale = 2.0 * np.sqrt(q_mean)
    design = np.column_stack([(q - q_mean) / scale, u, v])
    _, _, vt = np.linalg.svd(design / np.sqrt(z.size), full_matrices=False)
    a_scaled, b, c = vt[-1]
    a = a_scaled / scale
    d = -q_mean * a
    # Solution of a(u^2+v^2) + b u + c v + d = 0.
    a_safe = a if abs(a) > 1e-300 else np.copysign(1e-300, a if a != 0 else 1.0)
    center = centroid + complex(-b, -c) / (2.0 * a_safe)
    radius = float(np.sqrt(max(b * b + c * c - 4.0 * a * d, 0.0)) / (2.0 * abs(a_safe)))
    return complex(center), radius
