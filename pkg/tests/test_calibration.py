"""Committed calibration file, serialization and application."""

import json

import pytest

from qcompass.calibration import (
    Calibration,
    apply_calibration,
    default_calibration,
    load_calibration,
    write_calibration,
)
from qcompass.device import PhysicalParams


def test_committed_calibration_values():
    calibration = default_calibration()
    assert calibration.e_c == 1.0e8
    assert calibration.e_omega == 1.0e14
    assert calibration.e_p0 == 1.0e4
    assert calibration.amplitude_floor == 10.0


def test_committed_search_log_records_the_hunt():
    log = default_calibration().search_log
    assert len(log) > 5
    assert all(isinstance(line, str) for line in log)
    # the microwave-pair entanglement hunt came up empty and says so
    assert any("unreachable" in line for line in log)
    assert any("stage 3" in line for line in log)


def test_dict_round_trip():
    calibration = Calibration(e_c=1.0, e_omega=2.0, e_p0=3.0,
                              amplitude_floor=4.0, search_log=("a", "b"))
    assert Calibration.from_dict(calibration.to_dict()) == calibration


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ValueError):
        Calibration.from_dict({"e_c": 1.0, "e_omega": 2.0, "e_p0": 3.0,
                               "voltage": 9.0})


def test_file_round_trip(tmp_path):
    calibration = default_calibration()
    path = tmp_path / "calibration.json"
    write_calibration(calibration, path)
    assert load_calibration(path) == calibration
    # stored sorted and indented, ending with a newline
    text = path.read_text()
    assert text.endswith("\n")
    assert json.loads(text)["e_p0"] == 1.0e4


def test_apply_calibration_sets_drives_only():
    params = PhysicalParams(e_c=1.0, e_omega=1.0, e_p0=1.0, temperature=0.4)
    out = apply_calibration(params, default_calibration())
    assert out.e_c == 1.0e8
    assert out.e_omega == 1.0e14
    assert out.e_p0 == 1.0e4
    assert out.temperature == 0.4
