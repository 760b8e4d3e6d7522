import math

import numpy as np
import pytest

from sidebandsim.modes import ModeId, Port, basket_standard
from sidebandsim.optics import (
    Aom,
    Beamsplitter,
    Delay,
    DeviceParams,
    PhaseShift,
    analyser_closed_form,
    analyser_unitary,
    compose,
    element_unitary,
    identity_unitary,
    port_swap,
    umzi_port_transmission,
    umzi_unitary,
)

BASKET = basket_standard(3)

THETA_GRID = [0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2]
PHI_GRID = [i * math.pi / 4 for i in range(9)]

# symmetric 50/50 convention used throughout
BS_BLOCK = np.array([[1, 1j], [1j, 1]], dtype=complex) / np.sqrt(2)


def test_beamsplitter_block_and_unitarity():
    u = element_unitary(Beamsplitter(Port.IN, Port.VAC), BASKET)
    block = u.submatrix(
        [ModeId(Port.IN, 1), ModeId(Port.VAC, 1)],
        [ModeId(Port.IN, 1), ModeId(Port.VAC, 1)],
    )
    np.testing.assert_allclose(block, BS_BLOCK, atol=1e-15)
    col_norms = np.linalg.norm(u.matrix, axis=0)
    np.testing.assert_allclose(col_norms, 1.0, atol=1e-12)


def test_beamsplitter_needs_distinct_ports():
    with pytest.raises(ValueError):
        Beamsplitter(Port.IN, Port.IN)


def test_delay_phases_at_lock_point():
    u = element_unitary(Delay(Port.ARM2, math.pi / 2, math.pi / 2), BASKET)
    plus = u.entry(ModeId(Port.ARM2, +1), ModeId(Port.ARM2, +1))
    minus = u.entry(ModeId(Port.ARM2, -1), ModeId(Port.ARM2, -1))
    assert plus == pytest.approx(-1.0)
    assert minus == pytest.approx(+1.0)


def test_phase_shift_offset_independent():
    u = element_unitary(PhaseShift(Port.OUT2, 0.7), BASKET)
    for k in BASKET.offsets():
        assert u.entry(ModeId(Port.OUT2, k), ModeId(Port.OUT2, k)) == pytest.approx(
            np.exp(0.7j)
        )
        assert u.entry(ModeId(Port.IN, k), ModeId(Port.IN, k)) == pytest.approx(1.0)


def test_aom_zero_angle_is_identity():
    u = element_unitary(Aom(Port.OUT1, Port.OUT2, 0.0, 2), BASKET)
    np.testing.assert_allclose(
        u.matrix[: len(BASKET), : len(BASKET)], np.eye(len(BASKET)), atol=1e-15
    )


def test_aom_shifts_and_stays_unitary():
    u = element_unitary(Aom(Port.OUT1, Port.OUT2, 0.6, 2), BASKET)
    assert u.unitarity_defect() <= 1e-12
    # diffracted-port input appears upshifted in the undiffracted output
    got = u.entry(ModeId(Port.OUT1, +1), ModeId(Port.OUT2, -1))
    assert got == pytest.approx(1j * math.sin(0.6))
    # undiffracted-port input leaks downshifted into the diffracted output
    got = u.entry(ModeId(Port.OUT2, -1), ModeId(Port.OUT1, +1))
    assert got == pytest.approx(1j * math.sin(0.6))
    assert len(u.loss_labels) == 4


def test_aom_overlong_shift_rejected():
    with pytest.raises(ValueError):
        element_unitary(Aom(Port.OUT1, Port.OUT2, 0.3, 7), BASKET)


def test_compose_identity():
    u = analyser_unitary(0.4, 1.1, BASKET)
    same = compose(u, identity_unitary(BASKET))
    np.testing.assert_allclose(same.matrix, u.matrix, atol=1e-15)


def test_compose_with_dagger_gives_identity():
    u = umzi_unitary(1.0, +1, BASKET)
    round_trip = compose(u, u.dagger())
    np.testing.assert_allclose(round_trip.matrix, np.eye(round_trip.dim), atol=1e-12)


def test_compose_two_beamsplitters_swaps_with_phase():
    # multiplying the convention block with itself gives the expected swap
    expected = BS_BLOCK @ BS_BLOCK
    np.testing.assert_allclose(expected, np.array([[0, 1j], [1j, 0]]), atol=1e-15)
    bs = element_unitary(Beamsplitter(Port.IN, Port.VAC), BASKET)
    twice = compose(bs, bs)
    block = twice.submatrix(
        [ModeId(Port.IN, 2), ModeId(Port.VAC, 2)],
        [ModeId(Port.IN, 2), ModeId(Port.VAC, 2)],
    )
    np.testing.assert_allclose(block, expected, atol=1e-15)


def test_compose_rejects_basket_mismatch():
    with pytest.raises(ValueError):
        compose(identity_unitary(basket_standard(3)),
                identity_unitary(basket_standard(4)))


def test_port_swap_is_permutation():
    u = port_swap(BASKET, Port.IN, Port.ARM1)
    assert u.unitarity_defect() <= 1e-15
    assert u.entry(ModeId(Port.IN, 2), ModeId(Port.ARM1, 2)) == 1.0
    assert u.entry(ModeId(Port.ARM1, 2), ModeId(Port.IN, 2)) == 1.0


@pytest.mark.parametrize("theta", THETA_GRID)
@pytest.mark.parametrize("phi", PHI_GRID)
def test_analyser_matches_closed_form(theta, phi):
    u = analyser_unitary(theta, phi, BASKET)
    table = analyser_closed_form(theta, phi)
    for out_mode, row in table.items():
        for in_mode, coeff in row.items():
            assert abs(u.entry(out_mode, in_mode) - coeff) <= 1e-10


def test_analyser_rows_have_no_other_support():
    # the four populated output rows have all their weight on the
    # closed-form inputs
    u = analyser_unitary(0.9, 2.2, BASKET)
    table = analyser_closed_form(0.9, 2.2)
    for out_mode, row in table.items():
        total = sum(abs(c) ** 2 for c in row.values())
        row_index = BASKET.index(out_mode)
        row_norm = float(np.sum(np.abs(u.matrix[row_index]) ** 2))
        assert total == pytest.approx(1.0, abs=1e-12)
        assert row_norm == pytest.approx(total, abs=1e-12)


def test_closed_form_examples():
    table = analyser_closed_form(math.pi / 4, 0.0)
    row = table[ModeId(Port.OUT1, +1)]
    assert row[ModeId(Port.IN, +1)] == pytest.approx(1 / math.sqrt(2))
    assert row[ModeId(Port.IN, -1)] == pytest.approx(-1 / math.sqrt(2))
    table = analyser_closed_form(0.0, 1.3)
    row = table[ModeId(Port.OUT2, -1)]
    assert row[ModeId(Port.IN, -1)] == pytest.approx(1j * np.exp(1.3j))
    assert row[ModeId(Port.IN, +1)] == 0


def test_closed_form_rows_normalised():
    for theta in THETA_GRID:
        for phi in PHI_GRID:
            for row in analyser_closed_form(theta, phi).values():
                total = sum(abs(c) ** 2 for c in row.values())
                assert total == pytest.approx(1.0, abs=1e-12)


def test_analyser_extreme_entries():
    u = analyser_unitary(0.0, 0.4, BASKET)
    assert abs(u.entry(ModeId(Port.OUT1, +1), ModeId(Port.IN, +1))) == pytest.approx(1.0)
    u = analyser_unitary(math.pi / 2, 0.0, BASKET)
    assert u.entry(ModeId(Port.OUT1, +1), ModeId(Port.IN, -1)) == pytest.approx(-1.0)


def test_unitarity_and_energy_conservation_random():
    rng = np.random.default_rng(7)
    for _ in range(10):
        theta = rng.uniform(0, math.pi / 2)
        phi = rng.uniform(0, 2 * math.pi)
        u = analyser_unitary(theta, phi, BASKET)
        assert u.unitarity_defect() <= 1e-12
        amp = rng.normal(size=len(BASKET)) + 1j * rng.normal(size=len(BASKET))
        kept, lost = u.apply(amp)
        total = np.sum(np.abs(kept) ** 2) + np.sum(np.abs(lost) ** 2)
        assert total == pytest.approx(np.sum(np.abs(amp) ** 2), rel=1e-12)


def test_frequency_bookkeeping_at_full_diffraction():
    # at theta = pi/2 nothing survives at its original offset: every input
    # amplitude reappears shifted by +/-2 comb steps with power conserved
    u = analyser_unitary(math.pi / 2, 0.0, BASKET)
    for k in (-1, 0, +1):
        amp = np.zeros(len(BASKET), dtype=complex)
        amp[BASKET.index(ModeId(Port.IN, k))] = 1.0
        kept, lost = u.apply(amp)
        assert np.max(np.abs(lost)) <= 1e-12
        same_offset = sum(
            abs(kept[BASKET.index(ModeId(port, k))]) ** 2 for port in Port
        )
        shifted = sum(
            abs(kept[BASKET.index(ModeId(port, k + dk))]) ** 2
            for port in Port
            for dk in (-2, +2)
        )
        assert same_offset <= 1e-24
        assert shifted == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("sign,expected", [(+1, 0.9855741889605223),
                                           (-1, 0.0144258110394777)])
def test_umzi_port_transmission_values(sign, expected):
    assert umzi_port_transmission(1.33, sign) == pytest.approx(expected, abs=1e-12)
    # 0.985 / 0.015 of the surviving beam, as measured
    assert umzi_port_transmission(1.33, sign) == pytest.approx(
        {+1: 0.985, -1: 0.015}[sign], abs=1e-3
    )


def test_umzi_port_transmission_complete_separation():
    assert umzi_port_transmission(math.pi / 2, +1) == pytest.approx(1.0)
    assert umzi_port_transmission(math.pi / 2, -1) == pytest.approx(0.0, abs=1e-15)


def test_umzi_port_transmission_matches_matrix():
    for omega_tau in (0.4, 1.33, math.pi / 2):
        for lock in (+1, -1):
            u = umzi_unitary(omega_tau, lock, BASKET)
            for k in (+1, -1):
                fraction = abs(u.entry(ModeId(Port.OUT1, k), ModeId(Port.IN, k))) ** 2
                assert fraction == pytest.approx(
                    umzi_port_transmission(omega_tau, lock * k), abs=1e-10
                )


def test_device_params_defaults():
    params = DeviceParams()
    assert params.Omega == pytest.approx(2 * math.pi * 90.5e6)
    # 0.83 m of differential path is a 2.77 ns delay
    assert params.tau == pytest.approx(0.83 / 299792458.0)
    with pytest.raises(ValueError):
        DeviceParams(Omega=-1.0)
