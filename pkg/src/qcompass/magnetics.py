"""Hall readout, varactor response and RF-interference assessment.

The magnetic field reaches the quantum dynamics through one path only:
normalised Hall voltages set the two varactor capacitances, which shift
each side's total LC capacitance and with it the electromechanical rate
and the microwave resonance.

An external RF source couples to the varactor through its parasitic series
inductance.  Below the self-resonance the effective capacitance is barely
changed; past it the varactor turns inductive and the sensor working point
is lost.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .device import PhysicalParams
from .errors import ResonanceError

__all__ = [
    "FieldCoefficients",
    "VaractorModel",
    "RfVerdict",
    "hall_to_varactor",
    "varactor_rf_capacitance",
    "rf_modified_coefficient",
    "rf_disturbance_verdict",
]

# Series parasitic inductance placing the self-resonance of a fully biased
# varactor (120 pF) near 1.6 GHz.
DEFAULT_L_E = 82.5e-12

_RESONANCE_TOL = 1e-9
_PHASE_SAMPLES = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


@dataclass(frozen=True)
class FieldCoefficients:
    """Normalised Hall readings of the two sensor faces, each in [0, 1].

    Projection from a physical field keeps v_h1 + v_h2 equal to the
    normalised magnitude; directly constructed instances may break that
    for diagnostic runs (for example both faces saturated).
    """

    v_h1: float
    v_h2: float

    def __post_init__(self):
        for name, value in (("v_h1", self.v_h1), ("v_h2", self.v_h2)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class VaractorModel:
    """RF-facing small-signal model of one varactor.

    ``series_resistance`` is carried for completeness of the equivalent
    circuit but does not enter the effective-capacitance magnitude; the
    lossless formula already reproduces the observed response shape.
    """

    c_nominal: float              # bias-point capacitance, F
    parasitic_inductance: float = DEFAULT_L_E
    series_resistance: float = 0.0   # ohm, unused by c_eff

    def __post_init__(self):
        if self.c_nominal <= 0.0:
            raise ValueError(f"c_nominal must be positive, got {self.c_nominal}")
        if self.parasitic_inductance <= 0.0:
            raise ValueError(
                f"parasitic_inductance must be positive, got {self.parasitic_inductance}"
            )
        if self.series_resistance < 0.0:
            raise ValueError(
                f"series_resistance must be non-negative, got {self.series_resistance}"
            )

    @property
    def self_resonance(self) -> float:
        """Series self-resonance frequency, Hz."""
        return 1.0 / (2.0 * math.pi * math.sqrt(self.parasitic_inductance * self.c_nominal))


def hall_to_varactor(v_h: float, params: PhysicalParams) -> float:
    """Map a normalised Hall reading to the varactor bias capacitance.

    Linear interpolation between the varactor range endpoints.  Readings
    outside [0, 1] are clamped with a warning so downstream stages always
    see a physical capacitance.
    """
    if not 0.0 <= v_h <= 1.0:
        warnings.warn(
            f"Hall coefficient {v_h} outside [0, 1]; clamping", stacklevel=2
        )
        v_h = min(max(v_h, 0.0), 1.0)
    return params.c_vs_min + (params.c_vs_max - params.c_vs_min) * v_h


def varactor_rf_capacitance(model: VaractorModel, f_ext: float) -> float:
    """Effective capacitance seen by an RF tone at ``f_ext`` (Hz).

        C_eff = C / (1 - (2 pi f)^2 L_E C)

    Negative values signal the inductive regime above self-resonance.
    Exactly on the pole the value is undefined and a ResonanceError is
    raised.
    """
    if f_ext < 0.0:
        raise ValueError(f"f_ext must be non-negative, got {f_ext}")
    denom = 1.0 - (2.0 * math.pi * f_ext) ** 2 * model.parasitic_inductance * model.c_nominal
    if abs(denom) < _RESONANCE_TOL:
        raise ResonanceError(
            f"RF tone at {f_ext:.6g} Hz sits on the varactor self-resonance"
        )
    return model.c_nominal / denom


def rf_modified_coefficient(v_h1: float, f_ext: float, theta_ext_deg: float,
                            phase: float) -> float:
    """Hall coefficient under an RF field at angle ``theta_ext_deg``.

        v_h1m = v_h1 (1 + cos(phase) cos(theta_ext))

    ``phase`` stands for 2 pi f_ext t of the interfering tone, sampled
    quasi-statically; ``f_ext`` documents which tone that is and must be
    non-negative.  The result is clamped to the physical range [0, 1].
    """
    if not 0.0 <= v_h1 <= 1.0:
        raise ValueError(f"v_h1 must lie in [0, 1], got {v_h1}")
    if f_ext < 0.0:
        raise ValueError(f"f_ext must be non-negative, got {f_ext}")
    v = v_h1 * (1.0 + math.cos(phase) * math.cos(math.radians(theta_ext_deg)))
    return min(max(v, 0.0), 1.0)


@dataclass(frozen=True)
class RfVerdict:
    """Outcome of an RF-disturbance assessment.

    ``destroyed`` is True when any phase sample loses entanglement or a
    varactor is driven inductive.  ``samples`` records, per phase, the
    modulated coefficient of face 1 and whether the pair stayed entangled
    (None when the point never ran because a varactor went inductive).
    """

    destroyed: bool
    inductive: bool
    samples: tuple[tuple[float, bool | None], ...]


def rf_disturbance_verdict(
    params: PhysicalParams,
    field: FieldCoefficients,
    f_ext: float,
    theta_ext_deg: float,
    parasitic_inductance: float = DEFAULT_L_E,
    modulate_bias: bool = False,
) -> RfVerdict:
    """Does an RF tone at ``f_ext`` destroy the baseline entanglement?

    The baseline configuration (no RF) must be entangled; this is checked
    and a ValueError raised otherwise.  With RF on, the bias capacitances
    are replaced by the effective values seen through the parasitic
    inductance and the pipeline is evaluated at four quadrature phases of
    the tone.

    ``modulate_bias`` additionally feeds the phase-sampled coefficient
    modulation into the bias capacitances.  It is off by default: the Hall
    readout is a quasi-DC chain with kHz-scale bandwidth, so an RF-rate
    field ripples average out of the bias voltage and reach the varactor
    only through the direct electromagnetic path modelled by the effective
    capacitance.  The flag exists to quantify how conservative that
    assumption is.
    """
    from .dynamics import entanglement_from_capacitances, mc_entanglement

    baseline = mc_entanglement(params, field)
    if not baseline.entangled:
        raise ValueError("baseline configuration is not entangled; "
                         "RF disturbance is undefined")
    if f_ext == 0.0:
        samples = tuple((field.v_h1, True) for _ in _PHASE_SAMPLES)
        return RfVerdict(destroyed=False, inductive=False, samples=samples)

    destroyed = False
    inductive = False
    samples: list[tuple[float, bool | None]] = []
    for phase in _PHASE_SAMPLES:
        v1m = rf_modified_coefficient(field.v_h1, f_ext, theta_ext_deg, phase)
        v1_bias = v1m if modulate_bias else field.v_h1
        v2_bias = min(max(1.0 - v1_bias, 0.0), 1.0)
        c_s = hall_to_varactor(v1_bias, params)
        c_i = hall_to_varactor(v2_bias, params)
        c_s_eff = varactor_rf_capacitance(VaractorModel(c_s, parasitic_inductance), f_ext)
        c_i_eff = varactor_rf_capacitance(VaractorModel(c_i, parasitic_inductance), f_ext)
        if c_s_eff <= 0.0 or c_i_eff <= 0.0:
            destroyed = True
            inductive = True
            samples.append((v1m, None))
            continue
        result = entanglement_from_capacitances(params, c_s_eff, c_i_eff)
        entangled = bool(result.entangled and result.stable)
        destroyed = destroyed or not entangled
        samples.append((v1m, entangled))
    return RfVerdict(destroyed=destroyed, inductive=inductive, samples=tuple(samples))
