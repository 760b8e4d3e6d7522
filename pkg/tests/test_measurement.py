import math

import numpy as np
import pytest

from sidebandsim.modes import ModeId, Port, basket_standard
from sidebandsim.optics import analyser_unitary
from sidebandsim.states import (
    CoherentSidebandState,
    apply_unitary,
    pm_state,
    vacuum_state,
    with_carrier,
)
from sidebandsim.measurement import (
    HomodyneParams,
    OsaParams,
    Trace,
    attenuated_variance,
    homodyne_scan,
    homodyne_variance,
    infer_input_variance,
    osa_scan,
    photon_number_from_scan,
    spectral_peaks,
)

BASKET = basket_standard(3)
SCAN = dict(scan_start=-1.0e8, scan_stop=4.2e8, n_samples=5201)


def _single_line_state(power: float, offset: int = 1) -> CoherentSidebandState:
    state = vacuum_state(BASKET)
    alpha = np.array(state.alpha)
    alpha[BASKET.index(ModeId(Port.IN, offset))] = math.sqrt(power)
    return CoherentSidebandState(BASKET, alpha, state.noise_plus, state.noise_minus)


def test_trace_validation():
    with pytest.raises(ValueError):
        Trace(np.array([0.0, 0.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        Trace(np.array([0.0, 1.0]), np.array([1.0]))


def test_osa_scan_of_nothing_is_zero():
    trace = osa_scan(vacuum_state(BASKET), 0.0, Port.IN, OsaParams(), **SCAN)
    assert np.all(trace.y == 0.0)
    assert spectral_peaks(trace).size == 0


def test_osa_scan_peak_heights_match_line_powers():
    # two well separated lines: peak heights reproduce the 4:1 power ratio
    # after subtracting the numerically computed tail overlap
    params = OsaParams()
    state = _single_line_state(1.0, offset=1)
    trace = osa_scan(state, 4.0, Port.IN, params, **SCAN)
    nu = trace.x

    def height_at(freq):
        return trace.y[int(np.argmin(np.abs(nu - freq)))]

    def lorentz(x):
        half = params.linewidth / 2
        return half * half / (x * x + half * half)

    # independent two-line model evaluated at the line centers (periodic
    # images are > 400 linewidths away and below 1e-5 relative)
    spacing = 90.5e6
    expected_carrier = 4.0 + 1.0 * lorentz(spacing)
    expected_side = 1.0 + 4.0 * lorentz(spacing)
    assert height_at(0.0) == pytest.approx(expected_carrier, rel=1e-4)
    assert height_at(spacing) == pytest.approx(expected_side, rel=1e-4)


def test_osa_equal_lines_have_equal_peaks():
    # symmetric tails cancel in the ratio for equal powers
    params = OsaParams()
    state = _single_line_state(2.5, offset=1)
    trace = osa_scan(state, 2.5, Port.IN, params, **SCAN)
    top_carrier = trace.y[int(np.argmin(np.abs(trace.x - 0.0)))]
    top_side = trace.y[int(np.argmin(np.abs(trace.x - 90.5e6)))]
    assert top_carrier / top_side == pytest.approx(1.0, abs=1e-6)


def test_osa_linearity_in_power():
    state = pm_state(1.0)
    doubled = pm_state(2.0)
    t1 = osa_scan(state, 1.0, Port.IN, OsaParams(mismatch_fraction=0.1), **SCAN)
    t2 = osa_scan(doubled, 4.0, Port.IN, OsaParams(mismatch_fraction=0.1), **SCAN)
    np.testing.assert_allclose(t2.y, 4.0 * t1.y, rtol=1e-12)


def test_osa_periodic_images():
    params = OsaParams()
    state = _single_line_state(1.0, offset=1)
    trace = osa_scan(state, 0.0, Port.IN, params, scan_start=-1.0e8,
                     scan_stop=6.2e8, n_samples=7201)
    height = lambda f: trace.y[int(np.argmin(np.abs(trace.x - f)))]
    assert height(90.5e6 + params.fsr) == pytest.approx(height(90.5e6), rel=1e-9)


def test_osa_scan_window_must_cover_one_fsr():
    with pytest.raises(ValueError):
        osa_scan(vacuum_state(BASKET), 1.0, Port.IN, OsaParams(),
                 scan_start=0.0, scan_stop=1e8, n_samples=101)


def test_osa_five_peak_census_at_balanced_angle():
    # analysed phase-modulated beam: carrier, analysed sideband, upshifted
    # carrier, and the two visible mode-mismatch images
    state = with_carrier(pm_state(1.0), 10.0)
    out = apply_unitary(analyser_unitary(math.pi / 4, 0.0, BASKET), state)
    params = OsaParams(mismatch_fraction=0.05)
    trace = osa_scan(out, 0.0, Port.OUT1, params, **SCAN)
    peaks = spectral_peaks(trace, min_rel_height=0.005)
    expected = np.array([
        90.5e6 * 2 + params.fsr / 2 - params.fsr,  # mismatch image of the upshifted carrier
        0.0,                                       # carrier
        90.5e6,                                    # analysed sideband
        2 * 90.5e6,                                # upshifted carrier
        params.fsr / 2,                            # mismatch image of the carrier
    ])
    assert peaks.size == expected.size
    step = trace.x[1] - trace.x[0]
    np.testing.assert_allclose(np.sort(peaks), np.sort(expected), atol=step)


def test_homodyne_vacuum_fixed_point():
    state = vacuum_state(BASKET)
    for eta in (0.3, 0.95, 1.0):
        for phase in (0.0, 0.7, math.pi / 2):
            v = homodyne_variance(state, Port.IN, HomodyneParams(eta, phase))
            assert v == pytest.approx(1.0, abs=1e-15)


def test_homodyne_pm_extrema():
    state = pm_state(1.0)
    phases = np.linspace(0, 2 * math.pi, 721)
    values = [homodyne_variance(state, Port.IN, HomodyneParams(1.0, p))
              for p in phases]
    assert max(values) == pytest.approx(5.0, abs=1e-10)
    assert min(values) == pytest.approx(1.0, abs=1e-10)
    # the maximum sits at the phase quadrature
    assert phases[int(np.argmax(values))] == pytest.approx(math.pi / 2, abs=0.01)


def test_homodyne_detected_variance_is_affine_in_ideal():
    state = pm_state(1.0)
    eta = 0.8
    v_ideal = homodyne_variance(state, Port.IN, HomodyneParams(1.0, 1.1))
    v_det = homodyne_variance(state, Port.IN, HomodyneParams(eta, 1.1))
    assert v_det == pytest.approx(eta * v_ideal + (1 - eta), abs=1e-12)


def test_homodyne_scan_db_values():
    state = pm_state(1.0)
    trace = homodyne_scan(state, Port.IN, HomodyneParams(1.0),
                          np.linspace(0, 2 * math.pi, 181))
    assert np.max(trace.y) == pytest.approx(10 * math.log10(5.0), abs=1e-9)
    vac = homodyne_scan(vacuum_state(BASKET), Port.IN, HomodyneParams(0.9),
                        np.linspace(0, math.pi, 19))
    np.testing.assert_allclose(vac.y, 0.0, atol=1e-12)


def test_homodyne_flat_for_single_sideband_output():
    out = apply_unitary(analyser_unitary(math.pi / 4, 0.0, BASKET), pm_state(1.0))
    trace = homodyne_scan(out, Port.OUT1, HomodyneParams(0.95),
                          np.linspace(0, 2 * math.pi, 181))
    assert np.max(trace.y) - np.min(trace.y) <= 1e-10


def test_infer_input_variance_cases():
    assert infer_input_variance(1.0, 4.0) == pytest.approx(1.0)
    assert infer_input_variance(1.5, 4.0) == pytest.approx(3.0)
    assert infer_input_variance(2.0, 1.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        infer_input_variance(0.5, 4.0)
    with pytest.raises(ValueError):
        infer_input_variance(1.0, 0.5)


def test_attenuation_round_trip():
    for v in (1.0, 1.7, 6.0):
        for g in (1.0, 2.5, 4.0):
            assert infer_input_variance(attenuated_variance(v, g), g) == \
                pytest.approx(v, abs=1e-12)


def test_photon_number_from_scan():
    eta = 1.0
    assert photon_number_from_scan(1.0, 1.0, HomodyneParams(eta)) == 0.0
    # detected variances of a unit phase-modulated tone: n = 1 at the source
    assert photon_number_from_scan(1.0, 5.0, HomodyneParams(1.0), 1.0) == \
        pytest.approx(1.0)
    # forward-model then invert through efficiency and attenuation
    eta, g = 0.8, 4.0
    s_plus, s_minus = 1.0, 5.0
    det = [eta * attenuated_variance(s, g) + (1 - eta) for s in (s_plus, s_minus)]
    n = photon_number_from_scan(det[0], det[1], HomodyneParams(eta), g)
    assert n == pytest.approx(1.0, abs=1e-10)
