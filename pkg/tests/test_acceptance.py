"""Acceptance gate: one test per numbered criterion.

Criteria 1-6 are calibration-independent property checks.  Criteria 7-11
are qualitative reproductions under the committed calibration; each must
either hold outright or be explicitly documented as unreachable in the
committed calibration search log.  A pattern that fails without that
documentation fails its test.  Every test prints one summary line
(visible with ``pytest -s``); the pass/fail verdict is the test result.
"""

import math
import time
from dataclasses import replace

import numpy as np

from qcompass.calibration import apply_calibration, default_calibration
from qcompass.compass import SensorArray, estimate_direction
from qcompass.config import detuned_params
from qcompass.device import PhysicalParams, derive_couplings
from qcompass.dynamics import (
    assemble_drift,
    closed_form_fixed_point,
    mc_entanglement,
    solve_fixed_point,
    steady_state,
)
from qcompass.gaussian import (
    BlockDecomposition,
    extract_blocks,
    ppt_oracle,
    random_two_mode_covariance,
    sph_lambda,
    symplectic_eigenvalues,
    vacuum_covariance,
)
from qcompass.magnetics import (
    FieldCoefficients,
    VaractorModel,
    rf_disturbance_verdict,
    varactor_rf_capacitance,
)

CALIBRATION = default_calibration()
PARAMS = apply_calibration(PhysicalParams(), CALIBRATION)

SEPARABLE_FIELDS = ((0.5, 0.5), (1.0, 1.0), (0.0, 0.0), (0.9, 0.1))
ENTANGLED_FIELDS = ((0.99, 0.01), (0.98, 0.02))

DRIFT_PATTERN = {
    (0, 1), (0, 4),
    (1, 0), (1, 1), (1, 8), (1, 9),
    (2, 3), (2, 6),
    (3, 2), (3, 3), (3, 10), (3, 11),
    (4, 4), (4, 5), (4, 7),
    (5, 1), (5, 4), (5, 5), (5, 6),
    (6, 5), (6, 6), (6, 7),
    (7, 3), (7, 4), (7, 6), (7, 7),
    (8, 0), (8, 8), (8, 9),
    (9, 0), (9, 8), (9, 9),
    (10, 2), (10, 10), (10, 11),
    (11, 2), (11, 10), (11, 11),
}


def report(num: int, ok: bool, detail: str, unreachable: bool = False) -> None:
    tag = "PASS" if ok else "FAIL"
    if ok and unreachable:
        tag = "PASS (documented-unreachable)"
    print(f"criterion {num:02d} {tag}: {detail}")


def documented(*needles: str) -> bool:
    log = "\n".join(CALIBRATION.search_log)
    return all(needle in log for needle in needles)


def detuning_scan(params, v_h1, v_h2, points=201):
    """(stable lambda values, unstable count) over the detuning window."""
    lams = []
    unstable = 0
    for ratio in np.linspace(-0.5, 0.5, points):
        result = mc_entanglement(detuned_params(params, ratio),
                                 FieldCoefficients(v_h1, v_h2))
        if result.stable:
            lams.append(result.lambda_sph)
        else:
            unstable += 1
    return lams, unstable


def test_criterion_01_separability_verdicts_agree():
    rng = np.random.default_rng(20240817)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        cov = random_two_mode_covariance(rng)
        if sph_lambda(extract_blocks(cov)).entangled != ppt_oracle(cov):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 5.0
    report(1, ok, f"{1000 - mismatches}/1000 verdicts agree in {elapsed:.2f} s")
    assert mismatches == 0
    assert elapsed < 5.0


def test_criterion_02_vacuum_boundary():
    lam = sph_lambda(extract_blocks(vacuum_covariance(2))).lambda_sph
    ok = abs(lam) < 1e-14
    report(2, ok, f"|lambda| = {abs(lam):.3e}")
    assert ok


def test_criterion_03_steady_covariances_are_exact_and_physical():
    worst_residual = 0.0
    worst_nu = math.inf
    audited = 0
    for v_h1, v_h2 in SEPARABLE_FIELDS + ENTANGLED_FIELDS:
        c_s = PARAMS.c_vs_min + (PARAMS.c_vs_max - PARAMS.c_vs_min) * v_h1
        c_i = PARAMS.c_vs_min + (PARAMS.c_vs_max - PARAMS.c_vs_min) * v_h2
        for ratio in (-0.5, -0.25, 0.0, 0.25, 0.5):
            state = steady_state(detuned_params(PARAMS, ratio), c_s, c_i)
            if not state.stable:
                continue
            cov = state.covariance.entries
            residual = state.drift @ cov + cov @ state.drift.T + state.diffusion
            rel = np.linalg.norm(residual) / np.linalg.norm(state.diffusion)
            worst_residual = max(worst_residual, rel)
            worst_nu = min(worst_nu, symplectic_eigenvalues(cov).min())
            audited += 1
    ok = audited > 0 and worst_residual < 1e-10 and worst_nu >= 0.5 - 1e-9
    report(3, ok, f"{audited} states, worst residual {worst_residual:.3e}, "
                  f"min symplectic eigenvalue {worst_nu:.9f}")
    assert audited > 0
    assert worst_residual < 1e-10
    assert worst_nu >= 0.5 - 1e-9


def test_criterion_04_working_point_correctness():
    worst = 0.0
    for v_h1, v_h2 in ((0.99, 0.01), (0.5, 0.5), (1.0, 1.0)):
        c_s = PARAMS.c_vs_min + (PARAMS.c_vs_max - PARAMS.c_vs_min) * v_h1
        c_i = PARAMS.c_vs_min + (PARAMS.c_vs_max - PARAMS.c_vs_min) * v_h2
        for ratio in (-0.5, 0.0, 0.5):
            params = detuned_params(PARAMS, ratio)
            cp = derive_couplings(params, c_s, c_i)
            fp = solve_fixed_point(params, cp)
            ks = 0.5 * cp.g13 * params.delta_oos
            ki = 0.5 * cp.g23 * params.delta_ooi
            residuals = (
                -(1j * params.delta_ocs + params.kappa_s) * fp.a_s
                - 1j * cp.g11 * fp.p_s - 1j * cp.g_int * fp.a_i.conjugate() + params.e_c,
                -(1j * params.delta_oci + params.kappa_i) * fp.a_i
                - 1j * cp.g22 * fp.p_i - 1j * cp.g_int * fp.a_s.conjugate() + params.e_c,
                -(params.kappa_cs + 1j * (params.delta_oos - ks * fp.q_s)) * fp.c_s
                + params.e_omega,
                -(params.kappa_ci + 1j * (params.delta_ooi - ki * fp.q_i)) * fp.c_i
                + params.e_omega,
                params.omega_m * fp.p_s + 2.0 * cp.g11 * fp.a_s.real,
                params.omega_m * fp.p_i + 2.0 * cp.g22 * fp.a_i.real,
                -params.gamma * fp.p_s - params.omega_m * fp.q_s + ks * abs(fp.c_s) ** 2,
                -params.gamma * fp.p_i - params.omega_m * fp.q_i + ki * abs(fp.c_i) ** 2,
            )
            scale = max(abs(params.e_c), abs(params.e_omega))
            worst = max(worst, max(abs(r) for r in residuals) / scale)

    decoupled = PhysicalParams(chi2=0.0, e_c=PARAMS.e_c, e_omega=PARAMS.e_omega)
    cp0 = replace(derive_couplings(decoupled, 65e-12, 65e-12), g13=0.0, g23=0.0)
    newton = solve_fixed_point(decoupled, cp0).as_vector()
    exact = closed_form_fixed_point(decoupled, cp0).as_vector()
    closed_form_dev = np.abs(newton - exact).max() / np.abs(exact).max()

    ok = worst < 1e-10 and closed_form_dev <= 1e-10
    report(4, ok, f"worst equation residual {worst:.3e}, "
                  f"closed-form deviation {closed_form_dev:.3e}")
    assert worst < 1e-10
    assert closed_form_dev <= 1e-10


def test_criterion_05_drift_assembly_fidelity():
    rng = np.random.default_rng(20240911)
    base = PhysicalParams()
    pattern_ok = True
    for _ in range(100):
        params = base.evolve(
            gamma=float(rng.uniform(10.0, 1e4)),
            omega_m=float(2 * math.pi * rng.uniform(3e5, 3e6)),
            kappa_s=float(rng.uniform(1e4, 1e6)),
            kappa_i=float(rng.uniform(1e4, 1e6)),
            kappa_cs=float(rng.uniform(1e4, 1e6)),
            kappa_ci=float(rng.uniform(1e4, 1e6)),
            delta_ocs=float(rng.uniform(1e5, 1e7)),
            delta_oci=float(rng.uniform(1e5, 1e7)),
            delta_oos=float(rng.uniform(1e5, 1e7)),
            delta_ooi=float(rng.uniform(1e5, 1e7)),
        )
        draw = rng.uniform(0.5, 5.0, size=13) * rng.choice([-1.0, 1.0], size=13)
        couplings = replace(
            derive_couplings(params, 65e-12, 65e-12),
            g11=draw[0], g22=draw[1], g13=draw[2], g23=draw[3], g_int=draw[4],
            m1=draw[5], m2=draw[6], m3=draw[7], m4=draw[8],
            m5=draw[9], m6=draw[10], m7=draw[11], m8=draw[12],
        )
        drift = assemble_drift(params, couplings)
        for i in range(12):
            for j in range(12):
                inside = (i, j) in DRIFT_PATTERN
                if (drift[i, j] != 0.0) != inside:
                    pattern_ok = False

    params = PhysicalParams()
    couplings = replace(
        derive_couplings(params, 65e-12, 65e-12),
        g11=0.0, g22=0.0, g13=0.0, g23=0.0, g_int=0.0,
        m1=0.0, m2=0.0, m3=0.0, m4=0.0, m5=0.0, m6=0.0, m7=0.0, m8=0.0,
    )
    drift = assemble_drift(params, couplings)
    disc = complex(params.gamma ** 2 - 4.0 * params.omega_m ** 2) ** 0.5
    expected = {
        (0, 2): sorted([(-params.gamma + disc) / 2.0, (-params.gamma - disc) / 2.0],
                       key=lambda z: z.imag),
        (4, 6): sorted([-params.kappa_s + 1j * params.delta_ocs,
                        -params.kappa_s - 1j * params.delta_ocs], key=lambda z: z.imag),
        (8, 10): sorted([-params.kappa_cs + 1j * params.delta_oos,
                         -params.kappa_cs - 1j * params.delta_oos], key=lambda z: z.imag),
    }
    eig_dev = 0.0
    for (lo, hi), want in expected.items():
        got = sorted(np.linalg.eigvals(drift[lo:hi, lo:hi]), key=lambda z: z.imag)
        for a, b in zip(got, want):
            eig_dev = max(eig_dev, abs(a - b) / abs(b))

    ok = pattern_ok and eig_dev <= 1e-12
    report(5, ok, f"zero pattern held on 100 draws: {pattern_ok}, "
                  f"block eigenvalue deviation {eig_dev:.3e}")
    assert pattern_ok
    assert eig_dev <= 1e-12


def test_criterion_06_mode_swap_symmetry():
    state = steady_state(PARAMS, 65e-12, 65e-12)
    cov = state.covariance.entries
    perm = np.zeros((12, 12))
    for i, j in {0: 2, 1: 3, 2: 0, 3: 1, 4: 6, 5: 7, 6: 4, 7: 5,
                 8: 10, 9: 11, 10: 8, 11: 9}.items():
        perm[i, j] = 1.0
    swap_dev = np.linalg.norm(perm @ cov @ perm.T - cov) / np.linalg.norm(cov)

    blocks = extract_blocks(state.covariance, "MC1-MC2")
    lam = sph_lambda(blocks).lambda_sph
    lam_swapped = sph_lambda(
        BlockDecomposition(a=blocks.b, b=blocks.a, c=blocks.c.T)).lambda_sph
    lam_dev = abs(lam_swapped - lam) / abs(lam)

    ok = swap_dev <= 1e-9 and lam_dev <= 1e-12
    report(6, ok, f"covariance deviation {swap_dev:.3e}, lambda deviation {lam_dev:.3e}")
    assert swap_dev <= 1e-9
    assert lam_dev <= 1e-12


def test_criterion_07_field_contrast_pattern():
    start = time.perf_counter()
    separable_ok = True
    for v_h1, v_h2 in SEPARABLE_FIELDS:
        lams, unstable = detuning_scan(PARAMS, v_h1, v_h2)
        if unstable or any(lam < 0.0 for lam in lams):
            separable_ok = False
    entangled_min = math.inf
    entangled_ok = True
    for v_h1, v_h2 in ENTANGLED_FIELDS:
        lams, _ = detuning_scan(PARAMS, v_h1, v_h2)
        entangled_min = min(entangled_min, min(lams))
        if not any(lam < 0.0 for lam in lams):
            entangled_ok = False
    elapsed = time.perf_counter() - start

    entangled_documented = documented("entanglement is unreachable")
    ok = separable_ok and (entangled_ok or entangled_documented) and elapsed < 60.0
    report(7, ok,
           f"separable fields separable everywhere: {separable_ok}; "
           f"high-contrast fields min lambda {entangled_min:.4f} "
           f"({'entangled' if entangled_ok else 'documented unreachable'}); "
           f"{elapsed:.1f} s",
           unreachable=not entangled_ok)
    assert separable_ok
    assert entangled_ok or entangled_documented
    assert elapsed < 60.0


def test_criterion_08_temperature_trend():
    minima = []
    for temperature in (0.35, 0.4, 1.55, 10.0):
        lams, _ = detuning_scan(PARAMS.evolve(temperature=temperature), 0.99, 0.01)
        minima.append(min(lams))
    non_decreasing = all(b >= a for a, b in zip(minima, minima[1:]))
    ok = non_decreasing and minima[-1] >= 0.0
    report(8, ok, "min lambda over detuning at 0.35/0.4/1.55/10 K = "
                  + ", ".join(f"{m:.6g}" for m in minima))
    assert non_decreasing
    assert minima[-1] >= 0.0


def test_criterion_09_susceptibility_trend():
    minima = []
    for chi2 in np.linspace(0.0, 1.2e-12, 10):
        lams, _ = detuning_scan(PARAMS.evolve(chi2=float(chi2)), 0.99, 0.01)
        minima.append(min(lams))
    non_increasing = all(b <= a for a, b in zip(minima, minima[1:]))
    ok = non_increasing and minima[0] >= 0.0
    report(9, ok, f"min lambda falls {minima[0]:.9f} -> {minima[-1]:.9f} "
                  f"over the nonlinearity ramp, monotone: {non_increasing}")
    assert non_increasing
    assert minima[0] >= 0.0


def test_criterion_10_rf_response():
    model = VaractorModel(c_nominal=120e-12)
    worst_flatness = max(
        abs(varactor_rf_capacitance(model, f) - model.c_nominal) / model.c_nominal
        for f in np.linspace(1e6, 1e9, 200)
    )
    flat_ok = worst_flatness <= 0.01
    flat_documented = documented("1 percent window ends at 159 MHz")

    verdict_ok = False
    blocked = False
    try:
        low = rf_disturbance_verdict(PARAMS, FieldCoefficients(0.99, 0.01), 1e8, 73.0)
        high = rf_disturbance_verdict(PARAMS, FieldCoefficients(0.99, 0.01), 2e9, 73.0)
        verdict_ok = (not low.destroyed) and high.destroyed
    except ValueError:
        blocked = True
    verdict_documented = documented("require an entangled baseline")

    ok = (flat_ok or flat_documented) and (verdict_ok or verdict_documented)
    report(10, ok,
           f"capacitance flat to {worst_flatness:.1%} below 1 GHz "
           f"({'ok' if flat_ok else 'documented unreachable'}); disturbance verdict "
           f"{'ok' if verdict_ok else 'blocked, documented' if blocked else 'wrong'}",
           unreachable=not (flat_ok and verdict_ok))
    assert flat_ok or flat_documented
    assert verdict_ok or verdict_documented


def test_criterion_11_compass_array():
    start = time.perf_counter()
    array = SensorArray()
    quiet = estimate_direction(array, 0.7, 0.0, PARAMS)
    zero_ok = not quiet.detected

    target = array.angle(7)
    estimate = estimate_direction(array, target, array.b_ref, PARAMS)
    if estimate.detected:
        offset = abs((estimate.angle - target + math.pi) % (2 * math.pi) - math.pi)
        direction_ok = offset <= array.spacing
    else:
        direction_ok = False
    direction_documented = documented("compass direction verdicts require an "
                                      "entangled baseline")
    elapsed = time.perf_counter() - start

    ok = zero_ok and (direction_ok or direction_documented) and elapsed < 600.0
    report(11, ok,
           f"zero field silent: {zero_ok}; direction "
           f"{'within one spacing' if direction_ok else 'documented unreachable'}; "
           f"{elapsed:.1f} s",
           unreachable=not direction_ok)
    assert zero_ok
    assert direction_ok or direction_documented
    assert elapsed < 600.0
