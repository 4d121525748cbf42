"""Hall readout, varactor RF response and the disturbance verdict."""

import math

import pytest

from qcompass.device import PhysicalParams
from qcompass.errors import ResonanceError
from qcompass.magnetics import (
    FieldCoefficients,
    VaractorModel,
    hall_to_varactor,
    rf_disturbance_verdict,
    rf_modified_coefficient,
    varactor_rf_capacitance,
)


def test_hall_reading_interpolates_varactor_range():
    params = PhysicalParams()
    assert hall_to_varactor(0.0, params) == pytest.approx(10e-12, rel=1e-12)
    assert hall_to_varactor(0.5, params) == pytest.approx(65e-12, rel=1e-12)
    assert hall_to_varactor(1.0, params) == pytest.approx(120e-12, rel=1e-12)


def test_hall_reading_clamps_with_warning():
    params = PhysicalParams()
    with pytest.warns(UserWarning):
        assert hall_to_varactor(1.3, params) == pytest.approx(120e-12)
    with pytest.warns(UserWarning):
        assert hall_to_varactor(-0.2, params) == pytest.approx(10e-12)


def test_field_coefficients_validate_range():
    field = FieldCoefficients(0.99, 0.01)
    assert field.v_h1 == 0.99
    with pytest.raises(ValueError):
        FieldCoefficients(1.1, 0.0)
    with pytest.raises(ValueError):
        FieldCoefficients(0.5, -0.01)


def test_varactor_model_validates_inputs():
    with pytest.raises(ValueError):
        VaractorModel(c_nominal=0.0)
    with pytest.raises(ValueError):
        VaractorModel(c_nominal=120e-12, parasitic_inductance=0.0)
    with pytest.raises(ValueError):
        VaractorModel(c_nominal=120e-12, series_resistance=-1.0)


def test_self_resonance_of_fully_biased_varactor():
    model = VaractorModel(c_nominal=120e-12)
    # 1 / (2 pi sqrt(82.5 pH * 120 pF))
    assert model.self_resonance == pytest.approx(1599567362.9278271, rel=1e-12)


def test_effective_capacitance_landmarks():
    model = VaractorModel(c_nominal=120e-12)
    f_r = model.self_resonance
    assert varactor_rf_capacitance(model, 0.0) == model.c_nominal
    # (2 pi f)^2 L C = 1/2 there, so the capacitance doubles
    assert varactor_rf_capacitance(model, f_r / math.sqrt(2.0)) \
        == pytest.approx(2.0 * model.c_nominal, rel=1e-9)
    # above resonance the varactor turns inductive
    assert varactor_rf_capacitance(model, 2.0 * f_r) \
        == pytest.approx(-model.c_nominal / 3.0, rel=1e-9)
    assert varactor_rf_capacitance(model, 1e8) \
        == pytest.approx(1.2047084382990478e-10, rel=1e-12)


def test_effective_capacitance_grows_towards_resonance():
    model = VaractorModel(c_nominal=120e-12)
    f_r = model.self_resonance
    values = [varactor_rf_capacitance(model, x * f_r)
              for x in (0.0, 0.2, 0.4, 0.6, 0.8, 0.95)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_effective_capacitance_rejects_pole_and_negative_frequency():
    model = VaractorModel(c_nominal=120e-12)
    with pytest.raises(ResonanceError):
        varactor_rf_capacitance(model, model.self_resonance)
    with pytest.raises(ValueError):
        varactor_rf_capacitance(model, -1.0)


def test_rf_modified_coefficient_phase_and_angle():
    # aligned tone at zero phase doubles the reading, clamped at 1
    assert rf_modified_coefficient(0.5, 1e8, 0.0, 0.0) == 1.0
    assert rf_modified_coefficient(0.5, 1e8, 0.0, math.pi) == pytest.approx(0.0, abs=1e-15)
    # orthogonal tone leaves the reading alone
    assert rf_modified_coefficient(0.5, 1e8, 90.0, 0.3) == pytest.approx(0.5, rel=1e-12)
    expected = 0.99 * (1.0 - math.cos(math.radians(73.0)))
    assert rf_modified_coefficient(0.99, 1e8, 73.0, math.pi) \
        == pytest.approx(expected, rel=1e-12)
    assert rf_modified_coefficient(0.99, 1e8, 73.0, 0.0) == 1.0


def test_rf_modified_coefficient_validates_inputs():
    with pytest.raises(ValueError):
        rf_modified_coefficient(1.5, 1e8, 73.0, 0.0)
    with pytest.raises(ValueError):
        rf_modified_coefficient(0.5, -1e8, 73.0, 0.0)


def test_rf_verdict_requires_entangled_baseline():
    # the microwave pair never entangles at the operating temperature, so
    # the disturbance question is rejected as undefined
    params = PhysicalParams()
    with pytest.raises(ValueError, match="baseline"):
        rf_disturbance_verdict(params, FieldCoefficients(0.99, 0.01), 1e8, 73.0)
