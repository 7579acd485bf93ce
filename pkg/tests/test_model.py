import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bichroma.errors import (DimensionMismatch, NonHermitianError, NormError,
                             SingularDenominator)
from bichroma.model import (DriveParams, PulsePair, RegimeLabel, SpinParams, StateAmplitudes,
                            apply_T_symmetry, effective_floquet_Dprime, effective_hamiltonian,
                            full_hamiltonian, hermitian, rwa_hamiltonian, rwa_hamiltonian_fields,
                            t_symmetry_gauge_image)

finite = st.floats(-3, 3, allow_nan=False)
amp = st.floats(0, 3, allow_nan=False)
nonzero_delta = st.one_of(st.floats(0.2, 3), st.floats(-3, -0.2))


def test_hermitian_rejects_and_symmetrizes():
    with pytest.raises(NonHermitianError):
        hermitian([[0, 1], [0, 0]])
    with pytest.raises(DimensionMismatch):
        hermitian(np.zeros((2, 3)))
    m = hermitian([[1, 1j], [-1j, 2]])
    assert np.array_equal(m, m.conj().T)


def test_spin_params_validation_and_energies():
    s = SpinParams(-0.25, 60.0)
    assert s.energies == (-60.25, 0.25, 59.75, 0.25)
    for xi, bz in ((0.1, 60.0), (-0.25, -1.0), (-1.0, 1.5)):
        with pytest.raises(ValueError):
            SpinParams(xi, bz)


def test_for_drive_gives_consistent_carriers():
    d = DriveParams(-0.05, -0.05, 1.0)
    s = SpinParams.for_drive(d, 60.0)
    assert s.xi == pytest.approx(-0.25)
    w1, w2 = d.carriers(s)
    assert w1 - w2 == pytest.approx(1.0, abs=1e-12)
    assert w1 == pytest.approx(0.5 + 60.0 + 0.05)
    with pytest.raises(ValueError):
        d.carriers(SpinParams(-0.4, 60.0))


def test_drive_params_validation():
    with pytest.raises(ValueError):
        DriveParams(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        DriveParams(math.nan, 0.0)
    assert DriveParams(2.0, -1.0, -4.0).normalized() == DriveParams(0.5, -0.25, -1.0)


def test_pulse_pair_from_area_conventions():
    p = PulsePair.from_area(0.35, 50.0, 1.7, 1)
    assert p.width == pytest.approx(50 / 0.35)
    assert p.tau == pytest.approx(0.85 * p.width)
    assert p.sequence == 1 and p.swapped().sequence == 2
    q = PulsePair.from_area(0.35, 50.0, 1.7, 2, delay_convention="literal")
    assert q.tau == pytest.approx(-1.7 * q.width)
    with pytest.raises(ValueError):
        PulsePair.from_area(0.0)
    with pytest.raises(ValueError):
        PulsePair(1.0, 0.0)


def test_pulse_envelopes_peak_order():
    p = PulsePair(1.0, 10.0, 5.0)
    o1, o2 = p.envelopes(-5.0)
    assert o1 == 1.0 and o2 == pytest.approx(math.exp(-1.0))


def test_state_amplitudes_contract():
    s = StateAmplitudes.basis(1)
    assert s.populations.tolist() == [0, 1, 0]
    with pytest.raises(NormError):
        StateAmplitudes([1, 1, 0])
    with pytest.raises(DimensionMismatch):
        StateAmplitudes([1, 0, 0], frame="lab")
    with pytest.raises(ValueError):
        s.amps[0] = 1
    assert s == StateAmplitudes([0, 1, 0]) and hash(s) == hash(StateAmplitudes([0, 1, 0]))


@settings(max_examples=60, deadline=None)
@given(t=finite, o1=amp, o2=amp, d1=finite, d2=finite, dl=nonzero_delta)
def test_rwa_hamiltonian_is_hermitian_with_expected_entries(t, o1, o2, d1, d2, dl):
    d = DriveParams(d1, d2, dl)
    h = rwa_hamiltonian_fields(t, o1, o2, d)
    assert np.allclose(h, h.conj().T, atol=0)
    assert h[0, 1] == pytest.approx(0.5 * (o1 + np.exp(-1j * dl * t) * o2))
    assert h[1, 2] == pytest.approx(0.5 * (o2 + np.exp(1j * dl * t) * o1))
    assert np.real(h[2, 2]) == pytest.approx(d1 + d2)


@settings(max_examples=60, deadline=None)
@given(t=st.floats(-20, 20), om=st.floats(0.05, 2), width=st.floats(1, 20), tau=finite,
       d1=finite, d2=finite, dl=nonzero_delta)
def test_T_gauge_image_reproduces_hamiltonian(t, om, width, tau, d1, d2, dl):
    d, p = DriveParams(d1, d2, dl), PulsePair(om, width, tau)
    assert np.allclose(t_symmetry_gauge_image(t, p, d), rwa_hamiltonian(t, p, d), atol=1e-12)


@given(d1=finite, d2=finite, dl=nonzero_delta, tau=finite)
def test_T_symmetry_is_an_involution(d1, d2, dl, tau):
    d, p = DriveParams(d1, d2, dl), PulsePair(1.0, 2.0, tau)
    d2_, p2 = apply_T_symmetry(*apply_T_symmetry(d, p))
    assert p2 == p
    assert d2_.delta == d.delta
    assert d2_.delta1 == pytest.approx(d.delta1) and d2_.delta2 == pytest.approx(d.delta2)


def test_full_hamiltonian_singlet_is_decoupled():
    d = DriveParams(-0.05, -0.05)
    s = SpinParams.for_drive(d, 60.0)
    h = full_hamiltonian(3.0, PulsePair(0.4, 10.0, 1.0), s, d, field_scale=math.sqrt(2))
    assert np.all(h[3, :3] == 0) and np.all(h[:3, 3] == 0)
    assert h[0, 2] == 0 and h[0, 1] == h[1, 2]


@settings(max_examples=60, deadline=None)
@given(o1=st.floats(0, 0.5), o2=st.floats(0, 0.5), d1=st.floats(-0.4, 0.4),
       d2=st.floats(-0.4, 0.4))
def test_regime_B_is_T_image_of_regime_A(o1, o2, d1, d2):
    d = DriveParams(d1, d2, 1.0)
    if abs(d1) < 1e-3 or abs(d2) < 1e-3:
        return
    td, _ = apply_T_symmetry(d, PulsePair(1.0, 1.0))
    hb = effective_hamiltonian("B", o1, o2, d)
    ha = effective_hamiltonian("A", o2, o1, td)
    assert np.allclose(hb, ha, atol=1e-12)


def test_regime_A_reduces_to_weak_channel_with_stark_slope():
    d = DriveParams(-0.05, -0.05)
    o1, o2 = 0.3, 0.2
    diffs = []
    for eps in (1e-2, 1e-3):
        a = effective_hamiltonian("A", eps * o1, eps * o2, d)
        w = effective_hamiltonian("A_weak", eps * o1, eps * o2, d)
        diffs.append(np.real(np.diag(a - w)) / eps ** 2)
    # second-order shifts: -O2^2/(4(delta+D1)), +O2^2/(4(delta+D1)) + O1^2/(4(delta-D2)), ...
    expected = [-o2 ** 2 / (4 * 0.95), o2 ** 2 / (4 * 0.95) + o1 ** 2 / (4 * 1.05),
                -o1 ** 2 / (4 * 1.05)]
    assert np.allclose(diffs[0], expected, rtol=1e-12)
    assert np.allclose(diffs[1], expected, rtol=1e-12)


def test_weak_channel_matrix_is_exact():
    h = effective_hamiltonian(RegimeLabel.A_weak, 0.2, 0.4, DriveParams(0.1, -0.3))
    expected = 0.5 * np.array([[0, 0.2, 0], [0.2, 0.2, 0.4], [0, 0.4, -0.4]])
    assert np.allclose(h, expected, atol=0)


def test_effective_hamiltonian_singular_denominators():
    with pytest.raises(SingularDenominator):
        effective_hamiltonian("A", 0.1, 0.1, DriveParams(-1.0, 0.0))
    with pytest.raises(SingularDenominator):
        effective_hamiltonian("D", 0.1, 0.1, DriveParams(-1.0, 0.0))
    with pytest.raises(SingularDenominator):
        effective_floquet_Dprime(0.1, 0.1, DriveParams(-1.0, 1.0))
    with pytest.raises(ValueError):
        effective_hamiltonian("D_prime", 0.1, 0.1, DriveParams(-1.0, -1.0))


def test_dprime_operator_structure():
    m = effective_floquet_Dprime(0.7, 0.4, DriveParams(-1.4, -1.4), n_modes=2)
    assert m.shape == (15, 15)
    c = 6  # central mode
    assert m[c, c + 1] == pytest.approx(0.2)
    assert m[c + 3, c + 1] == pytest.approx(0.35)
    # state 3 only has a diagonal entry
    assert np.count_nonzero(m[c + 2]) == 1
