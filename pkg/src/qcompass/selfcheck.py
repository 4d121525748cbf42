"""Randomized invariant suite behind ``qcompass check``.

Each check prints one line.  The suite is deliberately small: it is a
smoke test for installed copies, not a replacement for the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .device import PhysicalParams
from .dynamics import steady_state
from .gaussian import (
    extract_blocks,
    ppt_oracle,
    random_two_mode_covariance,
    sph_lambda,
    symplectic_eigenvalues,
    two_mode_squeezed_covariance,
    uncertainty_check,
    vacuum_covariance,
)


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    lines: tuple[str, ...]


def _line(name: str, ok: bool, detail: str) -> str:
    tag = "PASS" if ok else "FAIL"
    return f"{tag} {name}: {detail}"


def run_invariant_suite(seed: int = 1234, n_states: int = 1000) -> CheckReport:
    lines = []
    all_ok = True

    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(n_states):
        cov = random_two_mode_covariance(rng)
        if sph_lambda(extract_blocks(cov)).entangled != ppt_oracle(cov):
            mismatches += 1
    ok = mismatches == 0
    all_ok &= ok
    lines.append(_line("sph-vs-ppt", ok,
                       f"{n_states - mismatches}/{n_states} states agree (seed {seed})"))

    lam = sph_lambda(extract_blocks(vacuum_covariance(2))).lambda_sph
    ok = abs(lam) < 1e-14
    all_ok &= ok
    lines.append(_line("vacuum-lambda", ok, f"|lambda| = {abs(lam):.3e}"))

    result = sph_lambda(extract_blocks(two_mode_squeezed_covariance(1.0)))
    ok = result.entangled and ppt_oracle(two_mode_squeezed_covariance(1.0))
    all_ok &= ok
    lines.append(_line("squeezed-entangled", ok,
                       f"lambda = {result.lambda_sph:.6f}"))

    params = PhysicalParams()
    state = steady_state(params, params.c_vs_max, params.c_vs_min)
    if state.covariance is None:
        ok = False
        detail = "drift unstable at default parameters"
        min_nu = math.nan
    else:
        drift = state.drift
        cov = state.covariance.entries
        residual = drift @ cov + cov @ drift.T + state.diffusion
        rel = np.linalg.norm(residual) / np.linalg.norm(state.diffusion)
        min_nu = symplectic_eigenvalues(state.covariance).min()
        ok = rel < 1e-10 and uncertainty_check(state.covariance)
        detail = f"residual {rel:.3e}, min symplectic eigenvalue {min_nu:.6f}"
    all_ok &= ok
    lines.append(_line("steady-state", ok, detail))

    return CheckReport(passed=bool(all_ok), lines=tuple(lines))
