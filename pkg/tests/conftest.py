"""Shared factories and the acceptance-criteria summary hook."""

import re

import numpy as np

from ermkit.tee import TeeEigenphases, TeeJunction, tee_from_eigenphases


def random_normalized_tee(rng) -> TeeJunction:
    """Random junction from the phase-normalized (s3 = 1) family."""
    theta1 = rng.uniform(-np.pi, np.pi)
    # keep theta2 away from 0 mod 2*pi so gamma stays nonzero
    theta2 = rng.uniform(0.3, 2.0 * np.pi - 0.3)
    return tee_from_eigenphases(TeeEigenphases(theta1, theta2, 0.0))


def random_passive_3port(rng) -> np.ndarray:
    """Random strictly passive 3x3 scattering matrix (singular values < 1)."""
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    u, _, vh = np.linalg.svd(m)
    return (u * rng.uniform(0.1, 0.99, 3)) @ vh


def reduce_oracle(s: np.ndarray, k: int, gamma: complex) -> np.ndarray:
    """Dense reference for port reduction.

    Solves b = S(a + gamma_pad b) column by column instead of using the
    closed form, so it shares no code path with reduce_network.
    """
    n = s.shape[0]
    k0 = k - 1
    keep = [i for i in range(n) if i != k0]
    gpad = np.zeros((n, n), dtype=complex)
    gpad[k0, k0] = gamma
    lhs = np.eye(n) - s @ gpad
    out = np.empty((n - 1, n - 1), dtype=complex)
    for col, j in enumerate(keep):
        a = np.zeros(n, dtype=complex)
        a[j] = 1.0
        b = np.linalg.solve(lhs, s @ a)
        out[:, col] = b[keep]
    return out


_CRITERIA: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if m is None:
        return
    n = int(m.group(1))
    if report.when == "call":
        _CRITERIA.setdefault(n, []).append("PASS" if report.passed else "FAIL")
    elif report.skipped:
        _CRITERIA.setdefault(n, []).append("SKIP")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for n in sorted(_CRITERIA):
        outcomes = _CRITERIA[n]
        if all(o == "PASS" for o in outcomes):
            status = "PASS"
        elif any(o == "FAIL" for o in outcomes):
            status = "FAIL"
        else:
            status = "SKIP"
        terminalreporter.write_line(f"[criterion {n}] {status}")
