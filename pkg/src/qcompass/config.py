"""Run configuration: JSON schema, validation and round-trip serialization.

A run document is a JSON object with these optional sections:

    {
      "params":   { any PhysicalParams field: value, ... },
      "field":    { "v_h1": 0.99, "v_h2": 0.01 },
      "sweep":    { "variable": "detuning_ratio", "lo": -2.0, "hi": 2.0,
                    "points": 201 },
      "compass":  { "pair_count": 36, "b_ref": 0.01,
                    "theta_b": 0.7, "magnitude": 0.01 },
      "rf":       { "f_ext": 1e8, "theta_ext_deg": 73.0, "phase": 0.0,
                    "parasitic_inductance": 8.25e-11 },
      "detuning_ratio": 0.0,
      "normalization": "mechanical",
      "seed": 0,
      "calibration": null
    }

Unknown keys anywhere are rejected with their dotted location.  Drive
amplitudes not set in "params" come from the calibration file
("calibration": path, null selects the committed one).

The detuning model: sweeping or setting ``detuning_ratio`` r offsets all
four detunings by r times the normalization frequency from their
configured base values (default base: the mechanical sideband).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

from .calibration import Calibration, apply_calibration, default_calibration, load_calibration
from .device import PhysicalParams
from .errors import ConfigError
from .magnetics import DEFAULT_L_E, FieldCoefficients

__all__ = [
    "SweepSpec",
    "CompassSpec",
    "RfSpec",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "resolved_params",
    "detuned_params",
]

SWEEP_VARIABLES = ("detuning_ratio", "temperature", "chi2", "f_ext", "field_angle", "v_h1")
NORMALIZATIONS = ("mechanical", "microwave")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"unknown sweep variable {self.variable!r}; expected one of {SWEEP_VARIABLES}",
                location="sweep.variable",
            )
        if not self.lo < self.hi:
            raise ConfigError(f"need lo < hi, got [{self.lo}, {self.hi}]", location="sweep.lo")
        if self.points < 2:
            raise ConfigError(f"need at least 2 points, got {self.points}", location="sweep.points")

    def values(self) -> list[float]:
        step = (self.hi - self.lo) / (self.points - 1)
        return [self.lo + k * step for k in range(self.points)]


@dataclass(frozen=True)
class CompassSpec:
    pair_count: int = 36
    b_ref: float = 0.01
    theta_b: float = 0.0
    magnitude: float = 0.01


@dataclass(frozen=True)
class RfSpec:
    f_ext: float = 0.0
    theta_ext_deg: float = 73.0
    phase: float = 0.0
    parasitic_inductance: float = DEFAULT_L_E

    def __post_init__(self):
        if self.f_ext < 0.0:
            raise ConfigError(f"f_ext must be non-negative, got {self.f_ext}",
                              location="rf.f_ext")
        if self.parasitic_inductance <= 0.0:
            raise ConfigError("parasitic_inductance must be positive",
                              location="rf.parasitic_inductance")


@dataclass(frozen=True)
class RunConfig:
    params_overrides: dict = dataclass_field(default_factory=dict)
    field: FieldCoefficients = FieldCoefficients(0.99, 0.01)
    sweep: SweepSpec | None = None
    compass: CompassSpec | None = None
    rf: RfSpec = RfSpec()
    detuning_ratio: float = 0.0
    normalization: str = "mechanical"
    seed: int = 0
    calibration_path: str | None = None

    def calibration(self) -> Calibration:
        if self.calibration_path is None:
            return default_calibration()
        return load_calibration(self.calibration_path)


def _require_mapping(obj, location: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"expected an object, got {type(obj).__name__}", location)
    return obj


def _check_keys(obj: dict, allowed, location: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        where = f"{location}.{unknown[0]}" if location else unknown[0]
        raise ConfigError("unknown key", location=where)


def _number(obj, location: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(f"expected a number, got {type(obj).__name__}", location)
    value = float(obj)
    if not math.isfinite(value):
        raise ConfigError("expected a finite number", location)
    return value


def _parse_params(obj, location: str) -> dict:
    obj = _require_mapping(obj, location)
    allowed = PhysicalParams.field_names()
    _check_keys(obj, allowed, location)
    overrides = {}
    for key, value in obj.items():
        if key == "g11_sqrt_form":
            if not isinstance(value, bool):
                raise ConfigError("expected a boolean", f"{location}.{key}")
            overrides[key] = value
        else:
            overrides[key] = _number(value, f"{location}.{key}")
    try:
        PhysicalParams(**overrides)
    except ValueError as exc:
        raise ConfigError(str(exc), location) from None
    return overrides


def parse_config(source: str | dict | Path) -> RunConfig:
    """Validate a run document (JSON text, path, or already-parsed dict)."""
    if isinstance(source, Path):
        source = source.read_text("utf-8")
    if isinstance(source, str):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON: {exc}") from None
    else:
        doc = source
    doc = _require_mapping(doc, "")
    _check_keys(doc, ("params", "field", "sweep", "compass", "rf", "detuning_ratio",
                      "normalization", "seed", "calibration"), "")

    overrides = _parse_params(doc.get("params", {}), "params")

    field_doc = _require_mapping(doc.get("field", {"v_h1": 0.99, "v_h2": 0.01}), "field")
    _check_keys(field_doc, ("v_h1", "v_h2"), "field")
    try:
        field = FieldCoefficients(
            v_h1=_number(field_doc.get("v_h1", 0.99), "field.v_h1"),
            v_h2=_number(field_doc.get("v_h2", 0.01), "field.v_h2"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "field") from None

    sweep = None
    if "sweep" in doc:
        sweep_doc = _require_mapping(doc["sweep"], "sweep")
        _check_keys(sweep_doc, ("variable", "lo", "hi", "points"), "sweep")
        for key in ("variable", "lo", "hi", "points"):
            if key not in sweep_doc:
                raise ConfigError("missing required key", f"sweep.{key}")
        points = sweep_doc["points"]
        if isinstance(points, bool) or not isinstance(points, int):
            raise ConfigError("expected an integer", "sweep.points")
        if not isinstance(sweep_doc["variable"], str):
            raise ConfigError("expected a string", "sweep.variable")
        sweep = SweepSpec(
            variable=sweep_doc["variable"],
            lo=_number(sweep_doc["lo"], "sweep.lo"),
            hi=_number(sweep_doc["hi"], "sweep.hi"),
            points=points,
        )

    compass = None
    if "compass" in doc:
        compass_doc = _require_mapping(doc["compass"], "compass")
        _check_keys(compass_doc, ("pair_count", "b_ref", "theta_b", "magnitude"), "compass")
        pair_count = compass_doc.get("pair_count", 36)
        if isinstance(pair_count, bool) or not isinstance(pair_count, int):
            raise ConfigError("expected an integer", "compass.pair_count")
        if pair_count < 2:
            raise ConfigError(f"pair_count must be at least 2, got {pair_count}",
                              "compass.pair_count")
        magnitude = _number(compass_doc.get("magnitude", 0.01), "compass.magnitude")
        if magnitude < 0.0:
            raise ConfigError("magnitude must be non-negative", "compass.magnitude")
        b_ref = _number(compass_doc.get("b_ref", 0.01), "compass.b_ref")
        if b_ref <= 0.0:
            raise ConfigError("b_ref must be positive", "compass.b_ref")
        compass = CompassSpec(
            pair_count=pair_count,
            b_ref=b_ref,
            theta_b=_number(compass_doc.get("theta_b", 0.0), "compass.theta_b"),
            magnitude=magnitude,
        )

    rf = RfSpec()
    if "rf" in doc:
        rf_doc = _require_mapping(doc["rf"], "rf")
        _check_keys(rf_doc, ("f_ext", "theta_ext_deg", "phase", "parasitic_inductance"), "rf")
        rf = RfSpec(
            f_ext=_number(rf_doc.get("f_ext", 0.0), "rf.f_ext"),
            theta_ext_deg=_number(rf_doc.get("theta_ext_deg", 73.0), "rf.theta_ext_deg"),
            phase=_number(rf_doc.get("phase", 0.0), "rf.phase"),
            parasitic_inductance=_number(rf_doc.get("parasitic_inductance", DEFAULT_L_E),
                                         "rf.parasitic_inductance"),
        )

    normalization = doc.get("normalization", "mechanical")
    if normalization not in NORMALIZATIONS:
        raise ConfigError(f"expected one of {NORMALIZATIONS}, got {normalization!r}",
                          "normalization")
    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("expected an integer", "seed")
    calibration_path = doc.get("calibration")
    if calibration_path is not None and not isinstance(calibration_path, str):
        raise ConfigError("expected a path string or null", "calibration")

    return RunConfig(
        params_overrides=overrides,
        field=field,
        sweep=sweep,
        compass=compass,
        rf=rf,
        detuning_ratio=_number(doc.get("detuning_ratio", 0.0), "detuning_ratio"),
        normalization=normalization,
        seed=seed,
        calibration_path=calibration_path,
    )


def serialize_config(config: RunConfig) -> dict:
    """Dict form of a config; parse(serialize(c)) == c."""
    doc: dict = {
        "params": dict(config.params_overrides),
        "field": {"v_h1": config.field.v_h1, "v_h2": config.field.v_h2},
        "rf": {
            "f_ext": config.rf.f_ext,
            "theta_ext_deg": config.rf.theta_ext_deg,
            "phase": config.rf.phase,
            "parasitic_inductance": config.rf.parasitic_inductance,
        },
        "detuning_ratio": config.detuning_ratio,
        "normalization": config.normalization,
        "seed": config.seed,
        "calibration": config.calibration_path,
    }
    if config.sweep is not None:
        doc["sweep"] = {
            "variable": config.sweep.variable,
            "lo": config.sweep.lo,
            "hi": config.sweep.hi,
            "points": config.sweep.points,
        }
    if config.compass is not None:
        doc["compass"] = {
            "pair_count": config.compass.pair_count,
            "b_ref": config.compass.b_ref,
            "theta_b": config.compass.theta_b,
            "magnitude": config.compass.magnitude,
        }
    return doc


def resolved_params(config: RunConfig) -> PhysicalParams:
    """PhysicalParams with calibrated drives, then explicit overrides, applied."""
    params = apply_calibration(PhysicalParams(), config.calibration())
    if config.params_overrides:
        params = params.evolve(**config.params_overrides)
    return params


def detuned_params(params: PhysicalParams, ratio: float,
                   normalization: str = "mechanical") -> PhysicalParams:
    """Offset all four detunings by ``ratio`` times the normalization frequency.

    ``mechanical`` normalizes by omega_m; ``microwave`` by the LC resonance
    at the varactor midpoint, which couples the axis scale to the circuit
    design instead of the resonator.
    """
    if normalization == "mechanical":
        unit = params.omega_m
    elif normalization == "microwave":
        from .device import microwave_frequency

        c_mid = 0.5 * (params.c_vs_min + params.c_vs_max)
        unit = microwave_frequency(params.inductance, params.c_d + c_mid + params.c1_x0)
    else:
        raise ConfigError(f"expected one of {NORMALIZATIONS}, got {normalization!r}",
                          "normalization")
    shift = ratio * unit
    return params.evolve(
        delta_ocs=params.delta_ocs + shift,
        delta_oci=params.delta_oci + shift,
        delta_oos=params.delta_oos + shift,
        delta_ooi=params.delta_ooi + shift,
    )
