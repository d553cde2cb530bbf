"""End-to-end acceptance checks over the public API.

Each test prints its headline numbers; the conftest summary hook echoes
one [criterion N] PASS/FAIL line per criterion at the end of the run.
"""

import time
from dataclasses import replace
from functools import lru_cache

import numpy as np
import pytest

from conftest import random_normalized_tee, random_passive_3port, reduce_oracle
from ermkit.extraction import extract_erm, match_port_delay
from ermkit.fitting import FitConfig, fit_lineshape
from ermkit.lineshapes import (
    HangerParams,
    ResonatorParams,
    erm_response,
    hanger_s21,
    mobius_map,
    rlc_reflection,
)
from ermkit.network import eigenmodes_symmetric2, reduce_network
from ermkit.perturbation import (
    PerturbationGenerator,
    classify_reciprocity,
    extract_mu,
    gell_mann,
    perturb_exact,
    perturb_first_order,
)
from ermkit.synth import default_cpw_scenario, generate
from ermkit.tee import (
    TeeEigenphases,
    eigenphases_from_tee,
    tee_from_eigenphases,
    verify_covering_symmetry,
)
from ermkit.touchstone import parse_touchstone, read_touchstone, write_touchstone

OBSERVED = ResonatorParams(f0=4.7076e9, Qi=5e5, Qc=1e5)


def clean_scenario(**overrides):
    base = default_cpw_scenario()
    defaults = dict(
        generator=PerturbationGenerator.zero(),
        noise_sigma=0.0,
        global_phase=0.0,
        delays=(0.0, 0.0),
    )
    defaults.update(overrides)
    return replace(base, **defaults)


@lru_cache(maxsize=1)
def tee_ensemble():
    """1000 random normalized tees, each terminated across a resonance."""
    rng = np.random.default_rng(20260815)
    tees = [random_normalized_tee(rng) for _ in range(1000)]
    mats = np.stack([t.matrix for t in tees])
    f0 = rng.uniform(4e9, 6e9, 1000)
    qi = 10.0 ** rng.uniform(4.0, 6.0, 1000)
    qc = 10.0 ** rng.uniform(4.0, 6.0, 1000)
    gammas = np.empty((1000, 201), dtype=complex)
    for i in range(1000):
        p = ResonatorParams(f0[i], qi[i], qc[i])
        span = 20.0 * f0[i] / qc[i]
        f = np.linspace(f0[i] - span, f0[i] + span, 201)
        gammas[i] = rlc_reflection(p, f)
    reduced = reduce_network(mats[:, None, :, :], 3, gammas)
    return tees, gammas, reduced


def test_criterion_01_reduced_tee_matches_the_mobius_map():
    """S11R + S21R equals M(Gamma) for 1000 junctions x 201 points, fast."""
    start = time.perf_counter()
    tees, gammas, reduced = tee_ensemble()
    lhs = reduced[..., 0, 0] + reduced[..., 1, 0]
    worst = 0.0
    for i, tee in enumerate(tees):
        rhs = mobius_map(tee.coupling_beta(), gammas[i])
        worst = max(worst, float(np.max(np.abs(lhs[i] - rhs))))
    elapsed = time.perf_counter() - start
    print(f"identity residual {worst:.3e}, elapsed {elapsed:.2f} s")
    assert worst < 1e-12
    assert elapsed < 5.0


def test_criterion_02_differential_mode_is_unimodular():
    _, _, reduced = tee_ensemble()
    _, s_dm = eigenmodes_symmetric2(reduced)
    worst = float(np.max(np.abs(np.abs(s_dm) - 1.0)))
    print(f"|sdm| deviation {worst:.3e}")
    assert worst < 1e-12


def test_criterion_03_reduction_agrees_with_dense_oracle():
    rng = np.random.default_rng(31415)
    worst = 0.0
    for _ in range(1000):
        s = random_passive_3port(rng)
        k = int(rng.integers(1, 4))
        r, phi = rng.uniform(0.0, 0.95), rng.uniform(0.0, 2.0 * np.pi)
        gamma = r * np.exp(1j * phi)
        got = reduce_network(s, k, gamma)
        ref = reduce_oracle(s, k, gamma)
        worst = max(worst, float(np.max(np.abs(got - ref))))
    print(f"oracle residual {worst:.3e}")
    assert worst < 1e-10


def test_criterion_04_eigenphases_round_trip():
    rng = np.random.default_rng(271828)
    worst_phase = 0.0
    worst_cov = 0.0
    for _ in range(1000):
        e = TeeEigenphases(*rng.uniform(-np.pi, np.pi, 3))
        tee = tee_from_eigenphases(e)
        back = eigenphases_from_tee(tee)
        worst_phase = max(
            worst_phase, float(np.max(np.abs(back.eigenvalues - e.eigenvalues)))
        )
        worst_cov = max(worst_cov, verify_covering_symmetry(tee.matrix))
    print(f"round-trip residual {worst_phase:.3e}, covering {worst_cov:.3e}")
    assert worst_phase < 1e-10
    assert worst_cov < 1e-14


def test_criterion_05_generator_basis_is_orthonormal_and_split():
    for a in range(1, 9):
        for b in range(1, 9):
            tr = complex(np.trace(gell_mann(a) @ gell_mann(b)))
            expected = 2.0 if a == b else 0.0
            assert abs(tr - expected) < 1e-14, (a, b)
    tee = tee_from_eigenphases(TeeEigenphases(2.83, 2.2, 0.0))
    reciprocal = {n for n in range(1, 9) if classify_reciprocity(n, tee) == "reciprocal"}
    print(f"reciprocal generators: {sorted(reciprocal)}")
    assert reciprocal == {2, 5, 7}


def test_criterion_06_first_order_gap_and_transmission_bound():
    tee = tee_from_eigenphases(TeeEigenphases(2.83, 2.2, 0.0))
    p = ResonatorParams(5e9, 2e5, 5e4)
    f = np.linspace(5e9 - 2e6, 5e9 + 2e6, 401)
    ring = rlc_reflection(p, f)
    s21_0 = reduce_network(tee.matrix, 3, ring)[..., 1, 0]
    gaps = []
    for g in (0.1, 0.05, 0.025):
        gen = PerturbationGenerator.single(2, g)
        exact = perturb_exact(tee, gen)
        first = perturb_first_order(tee, gen)
        gaps.append(float(np.max(np.abs(exact - first))))
        # transmission drift of the terminated junction stays within 2 g^2
        s21_g = reduce_network(exact, 3, ring)[..., 1, 0]
        drift = float(np.max(np.abs(s21_g - s21_0)))
        print(f"g={g}: drift {drift:.4e} <= {2.0 * g * g:.4e}")
        assert drift <= 2.0 * g * g
    r1, r2 = gaps[0] / gaps[1], gaps[1] / gaps[2]
    print(f"gap ratios {r1:.4f}, {r2:.4f}")
    assert 4.0 / 1.5 < r1 < 4.0 * 1.5
    assert 4.0 / 1.5 < r2 < 4.0 * 1.5


def test_criterion_07_perturbed_common_mode_and_mu_recovery():
    g = 0.05
    plain = generate(clean_scenario())
    pert = generate(clean_scenario(generator=PerturbationGenerator.single(2, g)))
    cm0, _ = eigenmodes_symmetric2(plain.s)
    cm1, _ = eigenmodes_symmetric2(pert.s)
    drift = float(np.max(np.abs(cm1 - cm0)))
    print(f"common-mode drift {drift:.4e}")
    assert drift < 5e-3
    # the asymmetry is -sin(2g) times the unperturbed transmission
    mu = extract_mu(pert).mu
    expected = -np.sin(2.0 * g) * plain.s_param(2, 1)
    residual = float(np.max(np.abs(mu - expected)))
    print(f"mu residual {residual:.3e}")
    assert residual < 1e-12


@pytest.mark.parametrize("tau2", [10e-12, 37e-12, 120e-12])
def test_criterion_08_port_delay_recovery(tau2):
    sw = generate(clean_scenario(delays=(0.0, tau2)))
    _, found, flatness = match_port_delay(sw)
    print(f"target {tau2:.1e}, found {found:.6e}, flatness {flatness:.2e}")
    assert abs(found - tau2) / tau2 < 1e-2
    assert flatness < 1e-6


def test_criterion_09_noiseless_recovery_and_interval_coverage():
    # noiseless synthetic through the full pipeline
    sw = generate(clean_scenario(global_phase=0.4))
    corrected, tau2, _ = match_port_delay(sw)
    ext = extract_erm(corrected, tau2=tau2)
    result = fit_lineshape(ext.frequencies, ext.s_cm_sweep)
    for name, truth in [("f0", OBSERVED.f0), ("Qi", OBSERVED.Qi), ("Qc", OBSERVED.Qc)]:
        rel = abs(result.params[name] - truth) / truth
        print(f"{name} relative error {rel:.3e}")
        assert rel < 1e-6
    # Monte Carlo coverage of the Qi interval at sigma = 1e-3
    start = time.perf_counter()
    rng = np.random.default_rng(990915)
    f = np.linspace(OBSERVED.f0 - 1.13e6, OBSERVED.f0 + 1.13e6, 401)
    ideal = erm_response(OBSERVED, f)
    hits = 0
    trials = 500
    for _ in range(trials):
        z = ideal + 1e-3 * (
            rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size)
        )
        r = fit_lineshape(f, z)
        hits += abs(r.params["Qi"] - OBSERVED.Qi) <= r.ci95["Qi"]
    elapsed = time.perf_counter() - start
    coverage = hits / trials
    print(f"coverage {coverage:.3f} ({hits}/{trials}), elapsed {elapsed:.1f} s")
    assert 0.93 <= coverage <= 0.97
    assert elapsed < 60.0


@pytest.mark.parametrize("phi0", [0.2, 0.5, 1.0])
def test_criterion_10_dcm_and_hanger_parameters_map(phi0):
    p = ResonatorParams(4.7076e9, 5e5, 1e5)
    f = np.linspace(p.f0 - 1.13e6, p.f0 + 1.13e6, 801)
    z = 0.7 * np.exp(0.3j) * hanger_s21(HangerParams(p, phi0), f)
    hanger = fit_lineshape(f, z, FitConfig(model="hanger"))
    dcm = fit_lineshape(f, z, FitConfig(model="dcm"))
    assert hanger.converged and dcm.converged
    qc_h = hanger.params["Qc"]
    qc_equiv = dcm.params["Qc"] / np.cos(dcm.params["phi0"])
    rel_qc = abs(qc_equiv - qc_h) / qc_h
    rel_qi = abs(dcm.params["Qi"] - hanger.params["Qi"]) / hanger.params["Qi"]
    print(f"phi0={phi0}: Qc map {rel_qc:.2e}, Qi {rel_qi:.2e}")
    assert rel_qc < 1e-3
    assert rel_qi < 1e-3


def test_criterion_11_peak_regime_hanger():
    p = ResonatorParams(4.7076e9, 5e5, 1e5)
    f = np.linspace(p.f0 - 1.13e6, p.f0 + 1.13e6, 801)
    z = 0.9 * np.exp(0.2j) * hanger_s21(HangerParams(p, 1.8), f)
    # past pi/2 the resonance shows up as a peak, not a dip
    assert np.max(np.abs(z)) > np.abs(z[0])
    result = fit_lineshape(f, z, FitConfig(model="hanger"))
    assert result.converged
    for name, truth in [("f0", p.f0), ("Qi", p.Qi), ("Qc", p.Qc)]:
        rel = abs(result.params[name] - truth) / truth
        assert rel < 1e-2, name
    phi_wrapped = 1.8 % np.pi
    assert abs(result.params["phi0"] - phi_wrapped) / phi_wrapped < 1e-2
    print(f"peak-regime phi0 {result.params['phi0']:.6f}")


def test_criterion_12_erm_versus_hanger_qi_statistics():
    base = default_cpw_scenario()
    sigmas = [1e-3] * 67 + [2e-3] * 67 + [5e-3] * 66
    agree = 0
    advantage = 0
    lowest = 0
    for k, sigma in enumerate(sigmas):
        sw = generate(replace(base, noise_sigma=sigma, seed=1000 + k))
        corrected, tau2, _ = match_port_delay(sw, bracket=(-100e-12, 100e-12))
        ext = extract_erm(corrected, tau2=tau2)
        erm = fit_lineshape(ext.frequencies, ext.s_cm_sweep)
        hanger = fit_lineshape(
            sw.frequencies, sw.s_param(2, 1), FitConfig(model="hanger")
        )
        qi_gap = abs(erm.params["Qi"] - hanger.params["Qi"])
        agree += qi_gap <= np.hypot(erm.ci95["Qi"], hanger.ci95["Qi"])
        if sigma == 5e-3:
            lowest += 1
            advantage += erm.ci95["Qi"] <= hanger.ci95["Qi"]
    print(f"agreement {agree}/{len(sigmas)}, advantage {advantage}/{lowest}")
    assert agree / len(sigmas) >= 0.90
    assert advantage / lowest >= 0.80


def test_criterion_12_default_scenario_asymmetry_level():
    sw = generate(default_cpw_scenario())
    level = extract_mu(sw).band_average_db
    print(f"band-averaged |mu| {level:.2f} dB")
    assert -28.0 < level < -22.0


def test_criterion_13_touchstone_round_trip(tmp_path):
    rng = np.random.default_rng(20260815)
    from ermkit.network import FrequencySweep

    f = np.linspace(4e9, 6e9, 51)
    s = 0.4 * (rng.standard_normal((51, 2, 2)) + 1j * rng.standard_normal((51, 2, 2)))
    path = tmp_path / "trip.s2p"
    write_touchstone(path, FrequencySweep(f, s))
    back = read_touchstone(path)
    worst = float(np.max(np.abs(back.s - s)))
    print(f"round-trip residual {worst:.3e}")
    assert worst < 1e-12
    np.testing.assert_array_equal(back.frequencies, f)
    # hand-written v1.1 fixture pins the 2-port column order
    text = (
        "! fixture\n"
        "# GHz S RI R 50\n"
        "1.0 0.11 0 0.21 0 0.12 0 0.22 0\n"
        "2.0 0.11 0 0.21 0 0.12 0 0.22 0\n"
    )
    sw = parse_touchstone(text, n_ports=2)
    assert sw.s[0, 0, 0] == pytest.approx(0.11)
    assert sw.s[0, 1, 0] == pytest.approx(0.21)
    assert sw.s[0, 0, 1] == pytest.approx(0.12)
    assert sw.s[0, 1, 1] == pytest.approx(0.22)
