"""Direction finding with a ring of paired Hall faces.

Each array element is a pair of opposed sensor faces at a known
orientation.  A static field projects onto the pair as two normalised
Hall readings; only elements aligned closely enough with the field reach
the contrast needed for microwave entanglement, so the set of entangled
elements points at the field direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .device import PhysicalParams
from .dynamics import mc_entanglement
from .errors import ArrayInconsistencyError
from .magnetics import FieldCoefficients

__all__ = [
    "SensorArray",
    "DirectionEstimate",
    "project_field",
    "estimate_direction",
]

DEFAULT_PAIR_COUNT = 36
DEFAULT_B_REF = 0.01   # full-scale field magnitude, T


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


@dataclass(frozen=True)
class SensorArray:
    """Evenly spaced ring of sensor pairs.

    ``pair_count`` elements sit at angles k * 2 pi / pair_count;
    ``b_ref`` is the field magnitude that saturates a perfectly aligned
    face.
    """

    pair_count: int = DEFAULT_PAIR_COUNT
    b_ref: float = DEFAULT_B_REF

    def __post_init__(self):
        if self.pair_count < 2:
            raise ValueError(f"pair_count must be at least 2, got {self.pair_count}")
        if self.b_ref <= 0.0:
            raise ValueError(f"b_ref must be positive, got {self.b_ref}")

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.pair_count

    @property
    def pair_angles(self) -> tuple[float, ...]:
        return tuple(k * self.spacing for k in range(self.pair_count))

    def angle(self, index: int) -> float:
        return (index % self.pair_count) * self.spacing


@dataclass(frozen=True)
class DirectionEstimate:
    """Direction readout of one array evaluation.

    ``angle`` is the circular mean of the entangled elements' orientations
    (radians, NaN when nothing triggered); ``effective_width`` is the
    angular extent of the triggered arc.
    """

    detected: bool
    angle: float
    entangled_pairs: tuple[int, ...]
    effective_width: float


def project_field(theta_b: float, magnitude: float, pair_angle: float,
                  b_ref: float = DEFAULT_B_REF) -> FieldCoefficients:
    """Hall readings of one pair for a field at angle ``theta_b``.

    The two faces of a pair look along +/- the pair orientation, so

        v_h1 = (|B|/b_ref) (1 + cos(pair_angle - theta_b)) / 2
        v_h2 = (|B|/b_ref) (1 - cos(pair_angle - theta_b)) / 2

    each clamped to [0, 1].  An aligned full-scale field gives (1, 0); a
    perpendicular one splits evenly.
    """
    if magnitude < 0.0:
        raise ValueError(f"magnitude must be non-negative, got {magnitude}")
    if b_ref <= 0.0:
        raise ValueError(f"b_ref must be positive, got {b_ref}")
    ratio = magnitude / b_ref
    cos_d = math.cos(pair_angle - theta_b)
    return FieldCoefficients(
        v_h1=_clamp01(0.5 * ratio * (1.0 + cos_d)),
        v_h2=_clamp01(0.5 * ratio * (1.0 - cos_d)),
    )


def _contiguous_arc(indices: list[int], pair_count: int) -> bool:
    """True when the index set forms one contiguous run modulo pair_count."""
    members = set(indices)
    if len(members) in (0, pair_count):
        return True
    breaks = sum(1 for k in members if (k + 1) % pair_count not in members)
    return breaks == 1


def estimate_direction(
    array: SensorArray,
    theta_b: float,
    magnitude: float,
    params: PhysicalParams,
) -> DirectionEstimate:
    """Evaluate every pair of the array and point at the field.

    A zero-magnitude field trivially reports no detection.  When the
    triggered elements do not form a contiguous arc the readout is
    ambiguous and an ArrayInconsistencyError is raised.
    """
    if magnitude == 0.0:
        return DirectionEstimate(detected=False, angle=math.nan,
                                 entangled_pairs=(), effective_width=0.0)
    entangled: list[int] = []
    for k in range(array.pair_count):
        field = project_field(theta_b, magnitude, array.angle(k), array.b_ref)
        result = mc_entanglement(params, field)
        if result.stable and result.entangled:
            entangled.append(k)
    if not entangled:
        return DirectionEstimate(detected=False, angle=math.nan,
                                 entangled_pairs=(), effective_width=0.0)
    if not _contiguous_arc(entangled, array.pair_count):
        raise ArrayInconsistencyError(
            f"entangled pairs {entangled} do not form a contiguous arc"
        )
    sin_sum = sum(math.sin(array.angle(k)) for k in entangled)
    cos_sum = sum(math.cos(array.angle(k)) for k in entangled)
    angle = math.atan2(sin_sum, cos_sum) % (2.0 * math.pi)
    width = (len(entangled) - 1) * array.spacing
    return DirectionEstimate(
        detected=True,
        angle=angle,
        entangled_pairs=tuple(sorted(entangled)),
        effective_width=width,
    )
