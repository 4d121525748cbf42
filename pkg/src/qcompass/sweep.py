"""Sweep engine: evaluate the pipeline over one variable and emit CSV.

Each sweep point is an independent pure computation, so points can be
farmed out to a thread pool; rows are always collected and written in
sweep order, making the CSV byte-identical across runs and thread counts.
Wall-clock timings are kept on the row objects for diagnostics but stay
out of the CSV for exactly that reason.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import RunConfig, detuned_params, resolved_params
from .device import PhysicalParams
from .dynamics import entanglement_from_capacitances, mc_entanglement
from .errors import FixedPointError, SensorModelError
from .magnetics import FieldCoefficients, VaractorModel, hall_to_varactor, varactor_rf_capacitance
from .compass import project_field

__all__ = ["SweepRow", "run_sweep", "write_csv", "CSV_COLUMNS"]

CSV_COLUMNS = (
    "value",
    "lambda_sph",
    "entangled",
    "stable",
    "status",
    "det_a",
    "det_b",
    "det_c",
    "fp_residual",
    "fp_iterations",
)

STATUS_OK = "ok"
STATUS_UNSTABLE = "unstable"
STATUS_FIXED_POINT = "fixed-point-failure"
STATUS_INDUCTIVE = "inductive"
STATUS_ERROR = "error"


@dataclass(frozen=True)
class SweepRow:
    """One evaluated sweep point.

    ``elapsed`` is wall-clock seconds for the point and is not part of
    the CSV schema (it would break byte-reproducibility).
    """

    value: float
    lambda_sph: float
    entangled: bool
    stable: bool
    status: str
    det_a: float
    det_b: float
    det_c: float
    fp_residual: float
    fp_iterations: int
    elapsed: float = 0.0


def _nan_row(value: float, status: str, elapsed: float) -> SweepRow:
    return SweepRow(value=value, lambda_sph=math.nan, entangled=False, stable=False,
                    status=status, det_a=math.nan, det_b=math.nan, det_c=math.nan,
                    fp_residual=math.nan, fp_iterations=0, elapsed=elapsed)


def _evaluate_point(config: RunConfig, base_params: PhysicalParams, value: float) -> SweepRow:
    start = time.perf_counter()
    variable = config.sweep.variable
    params = base_params
    field = config.field
    ratio = config.detuning_ratio
    rf_f_ext = None

    if variable == "detuning_ratio":
        ratio = value
    elif variable == "temperature":
        params = params.evolve(temperature=value)
    elif variable == "chi2":
        params = params.evolve(chi2=value)
    elif variable == "f_ext":
        rf_f_ext = value
    elif variable == "field_angle":
        compass = config.compass
        b_ref = compass.b_ref if compass is not None else 0.01
        magnitude = compass.magnitude if compass is not None else b_ref
        field = project_field(theta_b=value, magnitude=magnitude,
                              pair_angle=0.0, b_ref=b_ref)
    elif variable == "v_h1":
        field = FieldCoefficients(v_h1=value, v_h2=1.0 - value)
    else:  # pragma: no cover - SweepSpec already validated the name
        raise ValueError(f"unhandled sweep variable {variable!r}")

    params = detuned_params(params, ratio, config.normalization)
    try:
        if rf_f_ext is None:
            result = mc_entanglement(params, field)
            fp_residual, fp_iterations = _fp_stats(params, field)
        else:
            capacitances = _rf_capacitances(config, params, field, rf_f_ext)
            if capacitances is None:
                return _nan_row(value, STATUS_INDUCTIVE, time.perf_counter() - start)
            result = entanglement_from_capacitances(params, *capacitances)
            fp_residual, fp_iterations = math.nan, 0
    except FixedPointError:
        return _nan_row(value, STATUS_FIXED_POINT, time.perf_counter() - start)
    except SensorModelError as exc:
        return _nan_row(value, f"{STATUS_ERROR}:{type(exc).__name__}",
                        time.perf_counter() - start)

    status = STATUS_OK if result.stable else STATUS_UNSTABLE
    return SweepRow(
        value=value,
        lambda_sph=result.lambda_sph,
        entangled=result.entangled,
        stable=result.stable,
        status=status,
        det_a=result.det_a,
        det_b=result.det_b,
        det_c=result.det_c,
        fp_residual=fp_residual,
        fp_iterations=fp_iterations,
        elapsed=time.perf_counter() - start,
    )


def _fp_stats(params: PhysicalParams, field: FieldCoefficients) -> tuple[float, int]:
    from .device import derive_couplings
    from .dynamics import solve_fixed_point

    c_s = hall_to_varactor(field.v_h1, params)
    c_i = hall_to_varactor(field.v_h2, params)
    fp = solve_fixed_point(params, derive_couplings(params, c_s, c_i))
    return fp.residual, fp.iterations


def _rf_capacitances(config: RunConfig, params: PhysicalParams,
                     field: FieldCoefficients, f_ext: float) -> tuple[float, float] | None:
    """Effective capacitances under the RF tone; None in the inductive regime."""
    l_e = config.rf.parasitic_inductance
    effective = []
    for v_h in (field.v_h1, field.v_h2):
        c = hall_to_varactor(v_h, params)
        c_eff = varactor_rf_capacitance(VaractorModel(c, l_e), f_ext)
        if c_eff <= 0.0:
            return None
        effective.append(c_eff)
    return effective[0], effective[1]


def run_sweep(config: RunConfig, threads: int = 1) -> list[SweepRow]:
    """Evaluate all sweep points; rows returned in sweep order."""
    if config.sweep is None:
        raise ValueError("config has no sweep section")
    base_params = resolved_params(config)
    values = config.sweep.values()
    if threads <= 1:
        return [_evaluate_point(config, base_params, v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda v: _evaluate_point(config, base_params, v), values))


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def write_csv(rows, path: str | Path) -> None:
    """Write rows in sweep order; floats carry 17 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([
                _format(row.value),
                _format(row.lambda_sph),
                _format(row.entangled),
                _format(row.stable),
                row.status,
                _format(row.det_a),
                _format(row.det_b),
                _format(row.det_c),
                _format(row.fp_residual),
                _format(row.fp_iterations),
            ])
