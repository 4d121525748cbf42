"""Physical parameters of the sensor and the coupling rates derived from them.

One sensing side consists of an optical cavity (OC), a mechanical resonator
(MR) and a microwave LC cavity (MC) whose varactor capacitance follows the
local Hall voltage.  Two such sides share a pump through a chi(2) medium
that down-converts into the two optical cavities.

All rates are angular (rad/s).  Couplings:

* g11, g22  optical-mechanical, set by device geometry only,
* g13, g23  electromechanical, inversely proportional to the side's total
  LC capacitance and therefore field-dependent,
* g_int     optical down-conversion, proportional to the pump amplitude,
* m1..m8    mechanical-microwave rates, defined once the classical working
  point is known (they scale with the intracavity microwave amplitude).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from scipy.constants import c as C_LIGHT
from scipy.constants import epsilon_0, hbar, k as K_B

__all__ = [
    "PhysicalParams",
    "CouplingSet",
    "thermal_occupation",
    "optical_frequencies",
    "microwave_frequency",
    "derive_couplings",
]

# Exponent beyond which the Bose factor underflows to zero anyway.
_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class PhysicalParams:
    """Device parameters; defaults follow the reference design.

    Rates left at ``None`` are resolved against ``omega_m``: cavity
    linewidths default to 0.05 omega_m (optical) and 0.02 omega_m
    (microwave), and all four detunings default to +omega_m, the sideband
    at which both transfer couplings are resonant.

    The drive amplitudes ``e_c``, ``e_omega`` and the pump ``e_p0`` default
    to the committed calibration (see ``qcompass.calibration``): the
    smallest drives that keep the working point bright (|A|, |C| > 10) and
    stable across the acceptance sweeps, with the pump and microwave drive
    placed where the susceptibility response is strongest.
    """

    alpha_c: float = 0.012          # electro-optic coupling constant
    lambda_p: float = 405e-9        # pump wavelength, m
    gamma: float = 500.0            # mechanical damping, 1/s
    mass: float = 9e-11             # effective resonator mass, kg
    inductance: float = 5e-12       # LC inductance, H
    omega_m: float = 2.0 * math.pi * 1e6   # mechanical frequency, rad/s
    kappa_s: float | None = None    # optical linewidth, side 1
    kappa_i: float | None = None    # optical linewidth, side 2
    kappa_cs: float | None = None   # microwave linewidth, side 1
    kappa_ci: float | None = None   # microwave linewidth, side 2
    c1_x0: float = 60e-12           # rest capacitance of the moving plate, F
    c_d: float = 0.5e-12            # stray capacitance, F
    c_vs_min: float = 10e-12        # varactor range, F
    c_vs_max: float = 120e-12
    d_cap: float = 1e-6             # moving-plate gap, m
    chi2: float = 1.2e-12           # down-conversion nonlinearity, m^2/V^2
    refractive_index: float = 2.2   # of the chi(2) medium
    e_p0: float = 1.0e4             # pump field amplitude, V/m (calibrated)
    e_c: float = 1.0e8              # optical drive rate, 1/s (calibrated)
    e_omega: float = 1.0e14         # microwave drive rate, 1/s (calibrated)
    v_d: float = 0.0                # MC bias drive, V; informational, the
                                    # rate e_omega already absorbs it
    temperature: float = 0.35       # bath temperature, K
    delta_ocs: float | None = None  # optical detunings, rad/s
    delta_oci: float | None = None
    delta_oos: float | None = None  # microwave detunings, rad/s
    delta_ooi: float | None = None
    g11_sqrt_form: bool = True      # use the square-root form of g11/g22
                                    # (the linear variant is diagnostic only)

    def __post_init__(self):
        resolved = {
            "kappa_s": 0.05 * self.omega_m,
            "kappa_i": 0.05 * self.omega_m,
            "kappa_cs": 0.02 * self.omega_m,
            "kappa_ci": 0.02 * self.omega_m,
            "delta_ocs": self.omega_m,
            "delta_oci": self.omega_m,
            "delta_oos": self.omega_m,
            "delta_ooi": self.omega_m,
        }
        for name, value in resolved.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        for name in ("gamma", "mass", "inductance", "omega_m", "lambda_p",
                     "kappa_s", "kappa_i", "kappa_cs", "kappa_ci",
                     "c1_x0", "c_vs_min", "c_vs_max", "d_cap",
                     "refractive_index"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.c_d < 0.0:
            raise ValueError(f"c_d must be non-negative, got {self.c_d}")
        if self.temperature < 0.0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature}")
        if self.chi2 < 0.0:
            raise ValueError(f"chi2 must be non-negative, got {self.chi2}")
        if self.c_vs_min >= self.c_vs_max:
            raise ValueError("c_vs_min must be below c_vs_max")

    def evolve(self, **changes) -> "PhysicalParams":
        """Copy with the given fields replaced (validation re-runs)."""
        return replace(self, **changes)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class CouplingSet:
    """Derived rates feeding the fluctuation dynamics.

    The mechanical-microwave rates m1..m8 stay ``None`` until a classical
    working point is supplied, because they are proportional to the
    intracavity microwave amplitude.
    """

    g11: float
    g22: float
    g13: float
    g23: float
    g_int: float
    omega_os: float
    omega_oi: float
    omega_mc_s: float
    omega_mc_i: float
    cn0_s: float
    cn0_i: float
    m1: float | None = None
    m2: float | None = None
    m3: float | None = None
    m4: float | None = None
    m5: float | None = None
    m6: float | None = None
    m7: float | None = None
    m8: float | None = None

    @property
    def has_m_coefficients(self) -> bool:
        return self.m1 is not None


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose occupation of a mode at ``omega`` (rad/s) and temperature (K).

    Returns 0 at T = 0 and underflows cleanly for optical frequencies.
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    if temperature < 0.0:
        raise ValueError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = hbar * omega / (K_B * temperature)
    if x > _EXP_CUTOFF:
        return 0.0
    return 1.0 / math.expm1(x)


def optical_frequencies(lambda_p: float) -> tuple[float, float]:
    """Degenerate signal/idler frequencies for a pump at ``lambda_p``.

    Both down-converted cavities sit at half the pump frequency,
    omega = pi c / lambda_p.
    """
    if lambda_p <= 0.0:
        raise ValueError(f"lambda_p must be positive, got {lambda_p}")
    omega = math.pi * C_LIGHT / lambda_p
    return omega, omega


def microwave_frequency(inductance: float, cn0: float) -> float:
    """LC resonance 1/sqrt(L C) of one side's microwave cavity."""
    if inductance <= 0.0 or cn0 <= 0.0:
        raise ValueError("inductance and capacitance must be positive")
    return 1.0 / math.sqrt(inductance * cn0)


def _g_optomechanical(params: PhysicalParams, omega_o: float) -> float:
    base = params.alpha_c**2 * params.omega_m / (2.0 * epsilon_0 * params.mass * omega_o)
    if params.g11_sqrt_form:
        base = math.sqrt(base)
    return math.sqrt(2.0) * base


def derive_couplings(
    params: PhysicalParams,
    c_vs_s: float,
    c_vs_i: float,
    fixed_point=None,
) -> CouplingSet:
    """Coupling rates for the given per-side varactor capacitances.

    ``fixed_point`` (a ``qcompass.dynamics.FixedPoint``) is needed for the
    m-coefficients; without it they are left unset.  The electromechanical
    rates use the parallel-plate slope C1'(x) = -C1(x0)/d of the moving
    capacitor, normalised by the side's total capacitance.
    """
    if c_vs_s <= 0.0 or c_vs_i <= 0.0:
        raise ValueError("varactor capacitances must be positive")
    omega_os, omega_oi = optical_frequencies(params.lambda_p)
    cn0_s = params.c_d + c_vs_s + params.c1_x0
    cn0_i = params.c_d + c_vs_i + params.c1_x0

    zpf = math.sqrt(hbar / (params.mass * params.omega_m))
    c1_slope = -params.c1_x0 / params.d_cap
    g13 = c1_slope / cn0_s * zpf
    g23 = c1_slope / cn0_i * zpf

    g_int = -params.chi2 * params.e_p0 * math.sqrt(omega_os * omega_oi) / (
        2.0 * params.refractive_index**2
    )

    couplings = CouplingSet(
        g11=_g_optomechanical(params, omega_os),
        g22=_g_optomechanical(params, omega_oi),
        g13=g13,
        g23=g23,
        g_int=g_int,
        omega_os=omega_os,
        omega_oi=omega_oi,
        omega_mc_s=microwave_frequency(params.inductance, cn0_s),
        omega_mc_i=microwave_frequency(params.inductance, cn0_i),
        cn0_s=cn0_s,
        cn0_i=cn0_i,
    )
    if fixed_point is None:
        return couplings

    ks = 0.5 * g13 * params.delta_oos
    ki = 0.5 * g23 * params.delta_ooi
    c_s, c_i = complex(fixed_point.c_s), complex(fixed_point.c_i)
    q_s, q_i = complex(fixed_point.q_s), complex(fixed_point.q_i)
    root2 = math.sqrt(2.0)
    return replace(
        couplings,
        m1=root2 * ks * c_s.real,
        m2=root2 * ks * c_s.imag,
        m3=root2 * ki * c_i.real,
        m4=root2 * ki * c_i.imag,
        m5=-ks * q_s.real,
        m6=-ks * q_s.imag,
        m7=-ki * q_i.real,
        m8=-ki * q_i.imag,
    )
