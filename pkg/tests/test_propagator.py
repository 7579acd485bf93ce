import math
import warnings

import numpy as np
import pytest
from scipy.linalg import expm

from bichroma import propagator
from bichroma.errors import DimensionMismatch, StepSizeUnderflow
from bichroma.model import DriveParams, PulsePair, SpinParams, StateAmplitudes
from bichroma.propagator import (PropagationConfig, propagate, simulate_full, simulate_transfer,
                                 verify_T_invariance)

from conftest import diag_drive, operating_pulse

# final populations from an independent DOP853 integration (scipy, rtol 1e-12)
# of the hand-written rotating-frame equations over the same window
ORACLE = [
    ((0.35, -0.05, -0.05, 1), (0.0019676748715976924, 0.996173827149424, 0.0018584979786364624)),
    ((1.5, -1.4, -1.4, 2), (0.4644912374866804, 0.5354905562413224, 1.820627148165491e-05)),
    ((0.8, 0.3, -0.6, 1), (0.9989891104739927, 0.0005569033205716011, 0.00045398620489138617)),
]


@pytest.mark.parametrize("args,expected", ORACLE)
def test_matches_independent_integrator(args, expected):
    o0, d1, d2, seq = args
    res = simulate_transfer(operating_pulse(o0, seq), DriveParams(d1, d2, 1.0))
    assert np.allclose(res.populations, expected, atol=1e-6)
    assert res.norm_drift < 1e-7


def test_rabi_oracle_for_constant_hamiltonian():
    h = np.array([[0.0, 0.3, 0.0], [0.3, 0.1, 0.2], [0.0, 0.2, -0.4]], dtype=complex)
    cfg = PropagationConfig(0.0, 25.0, rel_tol=1e-11, abs_tol=1e-13, max_step=0.5)
    out = propagate(lambda t: h, StateAmplitudes.basis(0), cfg)
    exact = expm(-1j * h * 25.0)[:, 0]
    assert np.allclose(out.amps, exact, atol=1e-9)


def test_two_level_resonant_rabi_flop():
    # |1> <-> |2> at resonance: P2 = sin^2(Omega t / 2)
    om = 0.4
    h = np.array([[0, om / 2, 0], [om / 2, 0, 0], [0, 0, 5.0]], dtype=complex)
    t = math.pi / om
    out = propagate(lambda _: h, StateAmplitudes.basis(0), PropagationConfig(0.0, t, max_step=0.1))
    assert out.populations[1] == pytest.approx(1.0, abs=1e-9)


def test_propagate_dimension_check():
    with pytest.raises(DimensionMismatch):
        propagate(lambda t: np.eye(2), StateAmplitudes.basis(0), PropagationConfig(0.0, 1.0))


def test_zero_field_keeps_population_and_applies_exact_phase():
    d = DriveParams(0.3, -0.2)
    res = simulate_transfer(PulsePair(0.0, 10.0, 5.0), d, initial=StateAmplitudes([0, 0.6, 0.8]))
    assert res.populations == pytest.approx((0.0, 0.36, 0.64))
    res = simulate_transfer(PulsePair(0.0, 10.0, 5.0), d)
    assert res.populations == (1.0, 0.0, 0.0) and res.norm_drift == 0.0


def test_results_depend_only_on_ratios_to_delta():
    a = simulate_transfer(operating_pulse(0.7, 1), diag_drive(-0.25))
    p = PulsePair.from_area(1.4, 50.0, 1.7, 1)
    b = simulate_transfer(p, DriveParams(-0.5, -0.5, 2.0))
    assert np.allclose(a.populations, b.populations, atol=1e-9)


def test_checkpoint_history_and_budget(monkeypatch):
    res = simulate_transfer(operating_pulse(1.0, 1), diag_drive(-0.25), n_checkpoints=10)
    assert res.history.shape == (11, 3)
    assert np.allclose(res.history.sum(axis=1), 1.0, atol=1e-7)
    monkeypatch.setattr(propagator, "MAX_STEPS", 5)
    with pytest.raises(StepSizeUnderflow):
        simulate_transfer(operating_pulse(1.0, 1), diag_drive(-0.25))


def test_short_window_warns():
    cfg = PropagationConfig(-10.0, 10.0)
    with pytest.warns(RuntimeWarning):
        simulate_transfer(PulsePair(1.0, 10.0, 0.0), diag_drive(0.0), cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        simulate_transfer(PulsePair(1.0, 10.0, 0.0), diag_drive(0.0))


def test_config_validation():
    with pytest.raises(ValueError):
        PropagationConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        PropagationConfig(1.0, 0.0)
    cfg = PropagationConfig().resolve(PulsePair(1.0, 10.0, 3.0), 1.0)
    assert (cfg.t_start, cfg.t_end) == (-48.0, 48.0) and cfg.max_step == pytest.approx(1.0)


@pytest.mark.parametrize("args", [(0.35, -0.05, -0.05, 1), (0.7, -0.25, -0.25, 2),
                                  (1.3, 0.4, -1.2, 1)])
def test_T_invariance_at_fixed_points(args):
    o0, d1, d2, seq = args
    assert verify_T_invariance(operating_pulse(o0, seq), DriveParams(d1, d2)) < 1e-6


def test_full_model_rwa_limit_and_singlet():
    d = diag_drive(-0.05)
    pulse = operating_pulse(0.35, 1)
    spin = SpinParams.for_drive(d, 60.0)
    full = simulate_full(pulse, spin, d, n_checkpoints=20)
    rwa = simulate_transfer(pulse, d)
    assert np.allclose(full.populations[:3], rwa.populations, atol=0.01)
    assert np.all(full.history[:, 3] == 0.0)
    start = StateAmplitudes([0, 0, 0, 1], frame="lab")
    sing = simulate_full(pulse, spin, d, initial=start)
    assert sing.populations[3] == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(DimensionMismatch):
        simulate_full(pulse, spin, d, initial=StateAmplitudes.basis(0))
