"""Linearised Langevin dynamics of the twelve quadrature fluctuations.

Pipeline: classical working point (damped Newton) -> drift and diffusion
matrices -> stability gate -> steady covariance from the continuous
Lyapunov equation A V + V A^T + D = 0 -> separability of the microwave
pair.

Quadrature ordering (fixed everywhere):

    [x_ms, p_ms, x_mi, p_mi,          mechanics, sides 1 and 2
     x_os, y_os, x_oi, y_oi,          optical cavities
     x_ws, y_ws, x_wi, y_wi]          microwave cavities
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import solve_continuous_lyapunov

from .device import CouplingSet, PhysicalParams, derive_couplings, thermal_occupation
from .errors import FixedPointError, LyapunovResidualError, StabilityError
from .gaussian import CovarianceMatrix, SphResult, extract_blocks, sph_lambda, uncertainty_check

__all__ = [
    "DIM",
    "FixedPoint",
    "solve_fixed_point",
    "closed_form_fixed_point",
    "assemble_drift",
    "assemble_diffusion",
    "stability_check",
    "steady_covariance",
    "steady_state",
    "entanglement_from_capacitances",
    "mc_entanglement",
]

DIM = 12

STABILITY_MARGIN = -1e-12
FIXED_POINT_TOL = 1e-10
FIXED_POINT_MAX_ITER = 10_000
LYAPUNOV_TOL = 1e-10

# Residual layout of the working-point equations: four complex cavity
# equations followed by four real mechanical ones.
_N_UNKNOWNS = 12


@dataclass(frozen=True)
class FixedPoint:
    """Classical steady amplitudes of the eight-variable working point."""

    a_s: complex
    a_i: complex
    c_s: complex
    c_i: complex
    q_s: float
    q_i: float
    p_s: float
    p_i: float
    residual: float
    iterations: int

    def as_vector(self) -> NDArray[np.float64]:
        return _pack(self.a_s, self.a_i, self.c_s, self.c_i,
                     self.q_s, self.q_i, self.p_s, self.p_i)


def _pack(a_s, a_i, c_s, c_i, q_s, q_i, p_s, p_i) -> NDArray[np.float64]:
    return np.array([
        a_s.real, a_s.imag, a_i.real, a_i.imag,
        c_s.real, c_s.imag, c_i.real, c_i.imag,
        q_s, q_i, p_s, p_i,
    ])


def _unpack(u: NDArray[np.float64]):
    a_s = complex(u[0], u[1])
    a_i = complex(u[2], u[3])
    c_s = complex(u[4], u[5])
    c_i = complex(u[6], u[7])
    return a_s, a_i, c_s, c_i, u[8], u[9], u[10], u[11]


def _residual(u, params: PhysicalParams, cp: CouplingSet) -> NDArray[np.float64]:
    a_s, a_i, c_s, c_i, q_s, q_i, p_s, p_i = _unpack(u)
    ks = 0.5 * cp.g13 * params.delta_oos
    ki = 0.5 * cp.g23 * params.delta_ooi

    f1 = -(1j * params.delta_ocs + params.kappa_s) * a_s \
        - 1j * cp.g11 * p_s - 1j * cp.g_int * a_i.conjugate() + params.e_c
    f2 = -(1j * params.delta_oci + params.kappa_i) * a_i \
        - 1j * cp.g22 * p_i - 1j * cp.g_int * a_s.conjugate() + params.e_c
    f3 = -(params.kappa_cs + 1j * (params.delta_oos - ks * q_s)) * c_s + params.e_omega
    f4 = -(params.kappa_ci + 1j * (params.delta_ooi - ki * q_i)) * c_i + params.e_omega
    f5 = params.omega_m * p_s + 2.0 * cp.g11 * a_s.real
    f6 = params.omega_m * p_i + 2.0 * cp.g22 * a_i.real
    f7 = -params.gamma * p_s - params.omega_m * q_s + ks * abs(c_s) ** 2
    f8 = -params.gamma * p_i - params.omega_m * q_i + ki * abs(c_i) ** 2

    return np.array([
        f1.real, f1.imag, f2.real, f2.imag,
        f3.real, f3.imag, f4.real, f4.imag,
        f5, f6, f7, f8,
    ])


def _jacobian(u, params: PhysicalParams, cp: CouplingSet) -> NDArray[np.float64]:
    _, _, c_s, c_i, q_s, q_i, _, _ = _unpack(u)
    ks = 0.5 * cp.g13 * params.delta_oos
    ki = 0.5 * cp.g23 * params.delta_ooi
    jac = np.zeros((_N_UNKNOWNS, _N_UNKNOWNS))

    # rows 0-1: optical side 1
    jac[0, 0] = -params.kappa_s
    jac[0, 1] = params.delta_ocs
    jac[0, 3] = -cp.g_int
    jac[1, 0] = -params.delta_ocs
    jac[1, 1] = -params.kappa_s
    jac[1, 2] = -cp.g_int
    jac[1, 10] = -cp.g11
    # rows 2-3: optical side 2
    jac[2, 2] = -params.kappa_i
    jac[2, 3] = params.delta_oci
    jac[2, 1] = -cp.g_int
    jac[3, 2] = -params.delta_oci
    jac[3, 3] = -params.kappa_i
    jac[3, 0] = -cp.g_int
    jac[3, 11] = -cp.g22
    # rows 4-5: microwave side 1 (effective detuning depends on q_s)
    deff_s = params.delta_oos - ks * q_s
    jac[4, 4] = -params.kappa_cs
    jac[4, 5] = deff_s
    jac[4, 8] = ks * c_s.imag
    jac[5, 4] = -deff_s
    jac[5, 5] = -params.kappa_cs
    jac[5, 8] = ks * c_s.real
    # rows 6-7: microwave side 2
    deff_i = params.delta_ooi - ki * q_i
    jac[6, 6] = -params.kappa_ci
    jac[6, 7] = deff_i
    jac[6, 9] = ki * c_i.imag
    jac[7, 6] = -deff_i
    jac[7, 7] = -params.kappa_ci
    jac[7, 9] = ki * c_i.real
    # rows 8-9: mechanical position equations
    jac[8, 10] = params.omega_m
    jac[8, 0] = 2.0 * cp.g11
    jac[9, 11] = params.omega_m
    jac[9, 2] = 2.0 * cp.g22
    # rows 10-11: mechanical momentum equations
    jac[10, 10] = -params.gamma
    jac[10, 8] = -params.omega_m
    jac[10, 4] = 2.0 * ks * c_s.real
    jac[10, 5] = 2.0 * ks * c_s.imag
    jac[11, 11] = -params.gamma
    jac[11, 9] = -params.omega_m
    jac[11, 6] = 2.0 * ki * c_i.real
    jac[11, 7] = 2.0 * ki * c_i.imag
    return jac


def _decoupled_guess(params: PhysicalParams, cp: CouplingSet) -> NDArray[np.float64]:
    a_s = params.e_c / (params.kappa_s + 1j * params.delta_ocs)
    a_i = params.e_c / (params.kappa_i + 1j * params.delta_oci)
    c_s = params.e_omega / (params.kappa_cs + 1j * params.delta_oos)
    c_i = params.e_omega / (params.kappa_ci + 1j * params.delta_ooi)
    return _pack(a_s, a_i, c_s, c_i, 0.0, 0.0, 0.0, 0.0)


def solve_fixed_point(params: PhysicalParams, couplings: CouplingSet) -> FixedPoint:
    """Damped Newton solve of the classical working point.

    Convergence is declared when the residual max-norm drops below
    ``FIXED_POINT_TOL`` relative to the drive scale.  Steps that grow the
    residual are re-tried at half length.  Only the root reached from the
    decoupled-cavity initial guess is returned; the equations can in
    principle support further roots (pump bistability), which are not
    searched for.
    """
    scale = max(abs(params.e_c), abs(params.e_omega), 1.0)
    tol = FIXED_POINT_TOL * scale
    u = _decoupled_guess(params, couplings)
    res = _residual(u, params, couplings)
    norm = np.abs(res).max()
    iterations = 0
    while norm > tol:
        if iterations >= FIXED_POINT_MAX_ITER:
            raise FixedPointError(
                f"working point not converged after {iterations} iterations "
                f"(residual {norm:.3e}, tolerance {tol:.3e})",
                residual=float(norm),
                iterations=iterations,
            )
        try:
            step = np.linalg.solve(_jacobian(u, params, couplings), res)
        except np.linalg.LinAlgError as exc:
            raise FixedPointError(
                f"singular Jacobian at iteration {iterations}: {exc}",
                residual=float(norm),
                iterations=iterations,
            ) from exc
        damping = 1.0
        while True:
            trial = u - damping * step
            trial_res = _residual(trial, params, couplings)
            trial_norm = np.abs(trial_res).max()
            if trial_norm < norm or damping < 1e-8:
                break
            damping *= 0.5
        if trial_norm >= norm:
            raise FixedPointError(
                f"damped Newton stalled at iteration {iterations} "
                f"(residual {norm:.3e}, tolerance {tol:.3e})",
                residual=float(norm),
                iterations=iterations,
            )
        u, res, norm = trial, trial_res, trial_norm
        iterations += 1
    a_s, a_i, c_s, c_i, q_s, q_i, p_s, p_i = _unpack(u)
    return FixedPoint(a_s=a_s, a_i=a_i, c_s=c_s, c_i=c_i,
                      q_s=q_s, q_i=q_i, p_s=p_s, p_i=p_i,
                      residual=float(norm / scale), iterations=iterations)


def closed_form_fixed_point(params: PhysicalParams, couplings: CouplingSet) -> FixedPoint:
    """Exact working point for decoupled sides (g_int = g13 = g23 = 0).

    Each optical amplitude then solves a real 2x2 linear system (the
    mechanical momentum feeds back through g11), the microwave amplitudes
    are plain Lorentzian responses, and the mechanical variables follow
    explicitly.  Used as an independent check on the Newton solver.
    """
    if couplings.g_int != 0.0 or couplings.g13 != 0.0 or couplings.g23 != 0.0:
        raise ValueError("closed form requires g_int = g13 = g23 = 0")

    def optical(kappa, delta, g):
        # unknowns (Re A, Im A):  kappa Re - delta Im = e_c  (real part)
        #   delta Re + kappa Im + g * (-2 g / omega_m) Re = 0  (imag part,
        #   with P = -2 g Re A / omega_m substituted)
        mat = np.array([
            [kappa, -delta],
            [delta - 2.0 * g * g / params.omega_m, kappa],
        ])
        rhs = np.array([params.e_c, 0.0])
        re, im = np.linalg.solve(mat, rhs)
        return complex(re, im)

    a_s = optical(params.kappa_s, params.delta_ocs, couplings.g11)
    a_i = optical(params.kappa_i, params.delta_oci, couplings.g22)
    c_s = params.e_omega / (params.kappa_cs + 1j * params.delta_oos)
    c_i = params.e_omega / (params.kappa_ci + 1j * params.delta_ooi)
    p_s = -2.0 * couplings.g11 * a_s.real / params.omega_m
    p_i = -2.0 * couplings.g22 * a_i.real / params.omega_m
    q_s = -params.gamma * p_s / params.omega_m
    q_i = -params.gamma * p_i / params.omega_m
    return FixedPoint(a_s=a_s, a_i=a_i, c_s=c_s, c_i=c_i,
                      q_s=q_s, q_i=q_i, p_s=p_s, p_i=p_i,
                      residual=0.0, iterations=0)


def assemble_drift(params: PhysicalParams, couplings: CouplingSet) -> NDArray[np.float64]:
    """12x12 drift matrix of the quadrature fluctuations.

    Requires the m-coefficients, i.e. a coupling set derived with a
    working point.
    """
    if not couplings.has_m_coefficients:
        raise ValueError("drift assembly needs m-coefficients; derive the "
                         "couplings with a fixed point first")
    cp = couplings
    a = np.zeros((DIM, DIM))

    # mechanics, side 1
    a[0, 1] = params.omega_m
    a[0, 4] = cp.g11
    a[1, 0] = -params.omega_m
    a[1, 1] = -params.gamma
    a[1, 8] = cp.m1
    a[1, 9] = cp.m2
    # mechanics, side 2
    a[2, 3] = params.omega_m
    a[2, 6] = cp.g22
    a[3, 2] = -params.omega_m
    a[3, 3] = -params.gamma
    a[3, 10] = cp.m3
    a[3, 11] = cp.m4
    # optical cavity, side 1
    a[4, 4] = -params.kappa_s
    a[4, 5] = params.delta_ocs
    a[4, 7] = -cp.g_int
    a[5, 1] = -cp.g11
    a[5, 4] = -params.delta_ocs
    a[5, 5] = -params.kappa_s
    a[5, 6] = -cp.g_int
    # optical cavity, side 2
    a[6, 5] = -cp.g_int
    a[6, 6] = -params.kappa_i
    a[6, 7] = params.delta_oci
    a[7, 3] = -cp.g22
    a[7, 4] = -cp.g_int
    a[7, 6] = -params.delta_oci
    a[7, 7] = -params.kappa_i
    # microwave cavity, side 1
    a[8, 0] = -cp.m2
    a[8, 8] = cp.m6 - params.kappa_cs
    a[8, 9] = cp.m5 + params.delta_oos
    a[9, 0] = cp.m1
    a[9, 8] = -cp.m5 - params.delta_oos
    a[9, 9] = cp.m6 - params.kappa_cs
    # microwave cavity, side 2
    a[10, 2] = -cp.m4
    a[10, 10] = cp.m8 - params.kappa_ci
    a[10, 11] = cp.m7 + params.delta_ooi
    a[11, 2] = cp.m3
    a[11, 10] = -cp.m7 - params.delta_ooi
    a[11, 11] = cp.m8 - params.kappa_ci
    return a


def assemble_diffusion(params: PhysicalParams, couplings: CouplingSet) -> NDArray[np.float64]:
    """Diagonal diffusion matrix of the input noise.

    Mechanical position rows carry no noise; momentum rows get the quantum
    Brownian rate gamma (2 N(omega_m) + 1) so a decoupled resonator
    thermalises to n + 1/2 per quadrature.  Cavity rows get
    kappa (2 N(omega) + 1) at their own resonance frequencies; for the
    optical cavities N is zero to machine precision at cryogenic
    temperatures.
    """
    t = params.temperature
    n_m = thermal_occupation(params.omega_m, t)
    n_os = thermal_occupation(couplings.omega_os, t)
    n_oi = thermal_occupation(couplings.omega_oi, t)
    n_ws = thermal_occupation(couplings.omega_mc_s, t)
    n_wi = thermal_occupation(couplings.omega_mc_i, t)
    diag = np.array([
        0.0,
        params.gamma * (2.0 * n_m + 1.0),
        0.0,
        params.gamma * (2.0 * n_m + 1.0),
        params.kappa_s * (2.0 * n_os + 1.0),
        params.kappa_s * (2.0 * n_os + 1.0),
        params.kappa_i * (2.0 * n_oi + 1.0),
        params.kappa_i * (2.0 * n_oi + 1.0),
        params.kappa_cs * (2.0 * n_ws + 1.0),
        params.kappa_cs * (2.0 * n_ws + 1.0),
        params.kappa_ci * (2.0 * n_wi + 1.0),
        params.kappa_ci * (2.0 * n_wi + 1.0),
    ])
    return np.diag(diag)


def stability_check(drift: NDArray[np.float64], margin: float = STABILITY_MARGIN) -> bool:
    """True when every drift eigenvalue has real part below ``margin``."""
    return bool(np.linalg.eigvals(drift).real.max() < margin)


def steady_covariance(
    drift: NDArray[np.float64],
    diffusion: NDArray[np.float64],
) -> CovarianceMatrix:
    """Steady covariance from A V + V A^T + D = 0.

    Solved by the dense Schur method; the residual is re-checked
    explicitly and the result is refused if it exceeds ``LYAPUNOV_TOL``
    relative to ||D||, or if the drift is not strictly stable.
    """
    if not stability_check(drift):
        raise StabilityError("drift matrix is not strictly stable; no steady state")
    v = solve_continuous_lyapunov(drift, -np.asarray(diffusion, dtype=float))
    v = (v + v.T) / 2.0
    residual = drift @ v + v @ drift.T + diffusion
    rel = np.linalg.norm(residual) / max(np.linalg.norm(diffusion), 1e-300)
    if rel > LYAPUNOV_TOL:
        raise LyapunovResidualError(
            f"steady covariance residual {rel:.3e} exceeds {LYAPUNOV_TOL:.1e}"
        )
    return CovarianceMatrix(v)


@dataclass(frozen=True)
class SteadyState:
    """Full output of one pipeline evaluation."""

    fixed_point: FixedPoint
    couplings: CouplingSet
    drift: NDArray[np.float64]
    diffusion: NDArray[np.float64]
    stable: bool
    covariance: CovarianceMatrix | None


def steady_state(params: PhysicalParams, c_vs_s: float, c_vs_i: float) -> SteadyState:
    """Run working point, drift/diffusion and Lyapunov solve for one side pair.

    An unstable drift is reported through ``stable=False`` with no
    covariance rather than as an exception: instability is an expected
    outcome in drive and detuning scans.
    """
    couplings = derive_couplings(params, c_vs_s, c_vs_i)
    fp = solve_fixed_point(params, couplings)
    couplings = derive_couplings(params, c_vs_s, c_vs_i, fixed_point=fp)
    drift = assemble_drift(params, couplings)
    diffusion = assemble_diffusion(params, couplings)
    if not stability_check(drift):
        return SteadyState(fp, couplings, drift, diffusion, False, None)
    cov = steady_covariance(drift, diffusion)
    return SteadyState(fp, couplings, drift, diffusion, True, cov)


def entanglement_from_capacitances(
    params: PhysicalParams,
    c_vs_s: float,
    c_vs_i: float,
    pair: str = "MC1-MC2",
) -> SphResult:
    """Separability of a cavity pair for explicit varactor capacitances."""
    state = steady_state(params, c_vs_s, c_vs_i)
    if not state.stable:
        return SphResult(
            lambda_sph=math.nan, entangled=False,
            det_a=math.nan, det_b=math.nan, det_c=math.nan,
            stable=False,
        )
    assert state.covariance is not None
    if not uncertainty_check(state.covariance):
        raise LyapunovResidualError(
            "steady covariance violates the uncertainty principle"
        )
    return sph_lambda(extract_blocks(state.covariance, pair)).with_stability(True)


def mc_entanglement(params: PhysicalParams, field) -> SphResult:
    """Microwave-pair separability for a projected field reading.

    ``field`` is a ``qcompass.magnetics.FieldCoefficients``; its Hall
    coefficients are mapped to varactor capacitances and the full pipeline
    is evaluated.
    """
    from .magnetics import hall_to_varactor

    c_vs_s = hall_to_varactor(field.v_h1, params)
    c_vs_i = hall_to_varactor(field.v_h2, params)
    return entanglement_from_capacitances(params, c_vs_s, c_vs_i)
