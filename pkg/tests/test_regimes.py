import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bichroma.errors import DomainError
from bichroma.model import RegimeLabel
from bichroma.regimes import (CURVE_IDS, boundaries_Dprime, boundaries_regime_A, boundary_20a,
                              boundary_20b, boundary_21a, boundary_21b, boundary_D,
                              classification_margin, classify_regime, classify_weak_field,
                              dynamical_resonance, overlay_curves, resonance_23,
                              weak_field_limit_boundaries)

R = RegimeLabel


@pytest.mark.parametrize("d1,d2,label", [(0, 0, R.A), (-1, -1, R.D), (-1, 0, R.C),
                                         (-1, 1, R.B), (0, 1, R.C_tilde), (0, -1, R.D_tilde),
                                         (0, 2, R.D_tilde), (1.2, 0, R.none), (-2, 0, R.none)])
def test_weak_field_boxes(d1, d2, label):
    assert classify_weak_field(d1, d2, 1.0) is label


def test_ties_go_to_lower_region_and_scale_with_delta():
    assert classify_weak_field(-0.5, 0.0) is R.C
    assert classify_weak_field(0.0, 0.5) is R.A
    assert classify_weak_field(0.0, 0.0, 2.0) is classify_weak_field(0.0, 0.0)
    assert classify_weak_field(-2.0, -2.0, 2.0) is R.D
    assert classification_margin(-0.05, -0.05) == pytest.approx(0.45)


DUAL = {R.A: R.B, R.B: R.A, R.C: R.C_tilde, R.C_tilde: R.C, R.D: R.D_tilde, R.D_tilde: R.D,
        R.none: R.none}


@settings(max_examples=200, deadline=None)
@given(d1=st.floats(-2.5, 1.5), d2=st.floats(-1.5, 2.5))
def test_T_duality_of_classifier(d1, d2):
    if classification_margin(d1, d2) < 1e-9 or classification_margin(d1 + 1, d2 - 1, -1) < 1e-9:
        return
    assert classify_weak_field(d1 + 1.0, d2 - 1.0, -1.0) is DUAL[classify_weak_field(d1, d2, 1.0)]


def test_dprime_promotion():
    assert classify_regime(-1.4, -1.4, 1.0, 1.5) is R.D_prime
    assert classify_regime(-1.4, -1.4, 1.0, 0.5) is R.D
    assert classify_regime(-1.4, -1.4, 1.0, 3.5) is R.D
    assert classify_regime(-1.4, -1.4) is R.D
    assert classify_regime(0.0, 0.0, 1.0, 1.5) is R.A


def test_regime_A_examples():
    assert boundary_20a(0.0) == 0.0
    assert boundary_21b(0.0, 1.0, 1) == pytest.approx(math.sqrt(2))
    assert boundary_21b(0.0, 1.0, -1) == 0.0
    assert boundary_20a(1.0) == pytest.approx((-5 + math.sqrt(41)) / 16)
    assert boundary_20a(1.0) == pytest.approx(0.0877, abs=1e-4)
    assert boundary_21a(0.5) == boundary_20a(0.5, 1.0, -1)
    assert boundary_20a(2.0, 2.0) == pytest.approx(2.0 * boundary_20a(1.0))


def test_regime_A_domain_errors():
    with pytest.raises(DomainError):
        boundary_21b(0.1)
    with pytest.raises(DomainError):
        boundary_21b(-0.2)
    with pytest.raises(DomainError):
        boundary_20b(-0.8)


def test_resonance_examples():
    assert resonance_23(-1.0, -1.0) == pytest.approx(2.0)
    assert resonance_23(-1.4, -1.4) == pytest.approx(2 * math.sqrt(2.52))
    assert resonance_23(-1.4, -1.4) == pytest.approx(3.175, abs=1e-3)
    with pytest.raises(DomainError):
        resonance_23(0.0, 0.0)
    assert dynamical_resonance(-1.0) == 1.0
    assert dynamical_resonance(0.0) == 0.0 and dynamical_resonance(-2.0) == 0.0
    assert dynamical_resonance(-1.4) == pytest.approx(0.917, abs=1e-3)
    with pytest.raises(DomainError):
        dynamical_resonance(0.5)


def test_D_boundary_examples():
    assert boundary_D(-1.0) == 0.0
    assert boundary_D(1.0) == 0.0
    assert boundary_D(-0.9) == pytest.approx(0.486, abs=1e-3)
    with pytest.raises(DomainError):
        boundary_D(-1.2)
    with pytest.raises(DomainError):
        boundary_D(0.5)


def test_Dprime_examples():
    o1, o2 = boundaries_Dprime(-1.4)
    assert o1 == pytest.approx(1.66, abs=5e-3) and o2 == pytest.approx(0.97, abs=5e-3)
    assert 0.97 < 1.5 < 1.66
    _, z = boundaries_Dprime(0.0)
    assert z == 0.0
    for dv in np.linspace(-2.0, -1.0, 41):
        a, b = boundaries_Dprime(dv)
        assert a >= b


def test_weak_field_limit():
    ok, curves = weak_field_limit_boundaries(0.3, -0.2)
    assert not ok
    ok, curves = weak_field_limit_boundaries(0.3, 0.3)
    assert ok and curves["seq1"] == pytest.approx(2 * math.sqrt(2) * 0.3)
    assert curves["seq2"] == curves["seq1"]
    ok, curves = weak_field_limit_boundaries(0.0, 0.0)
    assert not ok and curves == {"seq1": 0.0, "seq2": 0.0}
    assert weak_field_limit_boundaries(-0.2, 0.5)[1]["seq1"] is None


def test_boundaries_regime_A_curves():
    ids1 = [c.id for c in boundaries_regime_A(1, 50)]
    ids2 = [c.id for c in boundaries_regime_A(2, 50)]
    assert ids1 == ["seq1_lower_20a_plus", "seq1_lower_20a_minus", "seq1_upper_20b"]
    assert ids2 == ["seq2_21a", "seq2_21b_plus", "seq2_21b_minus"]
    with pytest.raises(ValueError):
        boundaries_regime_A(3)


def test_overlay_curves_are_real_and_inside_domain():
    curves = overlay_curves()
    assert [c.id for c in curves] == list(CURVE_IDS)
    for c in curves:
        assert np.all(np.isfinite(c.samples))
        assert np.all(c.samples[:, 0] > 0)
        col = 0 if c.variable == "omega0" else 1
        assert np.all(c.samples[:, col] >= c.domain[0]) and np.all(c.samples[:, col] <= c.domain[1])
    line = next(c for c in curves if c.id == "line_delta_eq_minus_delta")
    assert np.all(line.samples[:, 1] == -1.0)
