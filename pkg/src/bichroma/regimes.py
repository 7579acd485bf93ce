"""Regime classification of the detuning plane and closed-form island boundaries.

All functions take physical values together with ``delta`` and work
internally with ratios to ``delta``. Boundaries are the loci of exact sheet
crossings of the effective Hamiltonians on the field axes; where a closed form
is undefined a ``DomainError`` is raised instead of returning a complex or NaN
value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import RegimeLabel

__all__ = [
    "RegimeLabel",
    "BoundaryCurve",
    "classify_weak_field",
    "classification_margin",
    "classify_regime",
    "boundary_20a",
    "boundary_20b",
    "boundary_21a",
    "boundary_21b",
    "boundaries_regime_A",
    "resonance_23",
    "dynamical_resonance",
    "boundary_D",
    "dprime_omega1",
    "dprime_omega2",
    "boundaries_Dprime",
    "weak_field_limit_boundaries",
    "overlay_curves",
    "CURVE_IDS",
]

# band edges in units of delta
_D1_EDGES = (-1.5, -0.5, 0.5)
_D2_EDGES = (-0.5, 0.5, 1.5)

CURVE_IDS = (
    "seq1_lower_20a_plus", "seq1_lower_20a_minus", "seq1_upper_20b",
    "seq2_21a", "seq2_21b_plus", "seq2_21b_minus",
    "resonance_25", "dyn_res_26", "D_boundary", "Dprime_omega1", "Dprime_omega2",
    "weakfield_13a", "weakfield_13b", "line_delta_eq_minus_delta", "line_delta_eq_minus_half_delta",
)


def _sqrt(x, what):
    if not math.isfinite(x) or x < 0:
        # tolerate roundoff on exact zeros
        if math.isfinite(x) and x > -1e-14:
            return 0.0
        raise DomainError(f"{what}: negative radicand {x:.6g}")
    return math.sqrt(x)


def _d1_band(x):
    # half-open intervals (lo, hi]: a tie goes to the lower band
    if -1.5 < x <= -0.5:
        return "resonant_w2"
    if -0.5 < x <= 0.5:
        return "resonant_w1"
    return None


def _d2_band(y):
    if y <= -0.5:
        return "low"
    if y <= 0.5:
        return "resonant_w2"
    if y <= 1.5:
        return "resonant_w1"
    return "high"


def classify_weak_field(delta1, delta2, delta=1.0):
    """Weak-field regime of a detuning pair.

    Transition 1-2 is quasi-resonant with the first carrier for
    ``delta1/delta`` in ``(-1/2, 1/2]`` and with the second for ``(-3/2, -1/2]``;
    transition 2-3 is quasi-resonant with the second carrier for
    ``delta2/delta`` in ``(-1/2, 1/2]`` and with the first for ``(1/2, 3/2]``.
    Outside these bands the transition is only perturbed.

    Returns
    -------
    RegimeLabel
        ``A``, ``B``, ``C``, ``C_tilde``, ``D``, ``D_tilde`` or ``none``.
    """
    if delta == 0:
        raise ValueError("delta must be nonzero")
    x, y = delta1 / delta, delta2 / delta
    b1, b2 = _d1_band(x), _d2_band(y)
    if b1 is None:
        return RegimeLabel.none
    if b1 == "resonant_w1":
        return {"resonant_w2": RegimeLabel.A,
                "resonant_w1": RegimeLabel.C_tilde}.get(b2, RegimeLabel.D_tilde)
    return {"resonant_w1": RegimeLabel.B,
            "resonant_w2": RegimeLabel.C}.get(b2, RegimeLabel.D)


def classification_margin(delta1, delta2, delta=1.0):
    """Distance (in units of ``|delta|``) from ``(delta1, delta2)`` to the nearest band edge."""
    x, y = delta1 / delta, delta2 / delta
    return float(min(min(abs(x - e) for e in _D1_EDGES), min(abs(y - e) for e in _D2_EDGES)))


def classify_regime(delta1, delta2, delta=1.0, omega0=None):
    """Weak-field regime, promoted to ``D_prime`` at strong field.

    ``D_prime`` is returned when the weak-field regime is ``D`` and the peak
    amplitude lies beyond the dynamical resonance and below the 2-3 resonance.
    """
    label = classify_weak_field(delta1, delta2, delta)
    if omega0 is None or label is not RegimeLabel.D:
        return label
    try:
        lo = dynamical_resonance(delta1, delta)
        hi = resonance_23(delta1, delta2, delta)
    except DomainError:
        return label
    return RegimeLabel.D_prime if lo < omega0 < hi else label


@dataclass
class BoundaryCurve:
    """Sampled boundary curve in the ``(omega0/delta, Delta/delta)`` plane of a transfer map.

    Attributes
    ----------
    id : str
    samples : ndarray, shape (N, 2)
        ``(abscissa, ordinate) = (omega0/delta, Delta/delta)``.
    domain : tuple of float
        Interval of the sampling variable over which the curve is defined.
    variable : str
        ``"omega0"`` or ``"delta"``: which coordinate was sampled.
    style : str
        ``"full"`` for island boundaries, ``"dashed"`` for resonance and regime lines.
    excluded : int
        Number of samples dropped because the closed form was undefined.
    """

    id: str
    samples: np.ndarray
    domain: tuple
    variable: str = "delta"
    style: str = "full"
    excluded: int = 0
    meta: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, BoundaryCurve):
            return NotImplemented
        return (self.id == other.id and np.array_equal(self.samples, other.samples)
                and tuple(self.domain) == tuple(other.domain) and self.variable == other.variable
                and self.style == other.style and self.excluded == other.excluded)


def boundary_20a(omega2, delta=1.0, branch=1):
    """Detuning at which the first-sequence lower boundary meets amplitude ``omega2``."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    o = omega2 / delta
    return delta * (o / 16.0) * (-5.0 * o + branch * math.sqrt(9.0 * o * o + 32.0))


def boundary_20b(Delta, delta=1.0):
    """First-sequence upper boundary ``omega1(Delta)``.

    The inner square root is taken of ``2(1 + Delta/delta)`` in units of
    ``delta``, which is the printed expression with ``delta = 1``.
    """
    x = Delta / delta
    inner = _sqrt(2.0 * (1.0 + x), "20b inner root")
    return delta * _sqrt(2.0 * (1.0 - x) * (2.0 * (1.0 + x) - inner), "20b")


def boundary_21a(omega2, delta=1.0):
    """Second-sequence boundary ``Delta(omega2)`` (lower branch of the 20a family)."""
    return boundary_20a(omega2, delta, branch=-1)


def boundary_21b(Delta, delta=1.0, branch=1):
    """Second-sequence boundary ``omega1(Delta)``, defined for ``Delta <= 0``."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    x = Delta / delta
    if x > 0:
        raise DomainError("21b is defined for Delta <= 0 only")
    inner = _sqrt(1.0 + 8.0 * x, "21b inner root")
    return delta * _sqrt((1.0 - x) * (4.0 * x + 1.0 + branch * inner), "21b")


def _samples(fn, grid):
    good, bad = [], 0
    for g in grid:
        try:
            good.append((g, fn(g)))
        except DomainError:
            bad += 1
    return good, bad


def boundaries_regime_A(sequence, samples=None, delta=1.0, omega_max=2.2, delta_range=(-2.2, 1.1)):
    """Regime-A island boundaries of one pulse ordering, with ``Delta1 = Delta2``.

    Parameters
    ----------
    sequence : {1, 2}
    samples : int or array_like, optional
        Number of samples (default 200) or explicit sampling values. Amplitude
        parametrized curves sample ``omega0`` in ``(0, omega_max]``; detuning
        parametrized curves sample ``Delta`` over ``delta_range``.
    delta : float
    omega_max : float
        Largest amplitude, in units of ``delta``.
    delta_range : tuple
        Detuning window, in units of ``delta``.

    Returns
    -------
    list of BoundaryCurve
        Samples in units of ``delta``; the ``+-`` branches are separate curves.
    """
    n = 200 if samples is None else samples
    if np.ndim(n) == 0:
        og = np.linspace(0.0, omega_max, int(n) + 1)[1:]
        dg = np.linspace(delta_range[0], delta_range[1], int(n))
    else:
        og = dg = np.asarray(n, dtype=float)
    lo, hi = delta_range
    out = []

    def amp_curve(cid, fn):
        pts, bad = _samples(fn, og)
        pts = [(o, v) for o, v in pts if lo <= v <= hi]
        out.append(BoundaryCurve(cid, np.array(pts).reshape(-1, 2), (0.0, omega_max), "omega0",
                                 "full", bad))

    def det_curve(cid, fn, domain):
        grid = dg[(dg >= domain[0]) & (dg <= domain[1])]
        pts, bad = _samples(fn, grid)
        pts = [(v, g) for g, v in pts if 0 < v <= omega_max]
        out.append(BoundaryCurve(cid, np.array(pts).reshape(-1, 2), domain, "delta", "full",
                                 bad + int(np.sum((dg < domain[0]) | (dg > domain[1])))))

    if sequence == 1:
        amp_curve("seq1_lower_20a_plus", lambda o: boundary_20a(o, 1.0, 1))
        amp_curve("seq1_lower_20a_minus", lambda o: boundary_20a(o, 1.0, -1))
        det_curve("seq1_upper_20b", lambda x: boundary_20b(x, 1.0), (-1.0, 1.0))
    elif sequence == 2:
        amp_curve("seq2_21a", lambda o: boundary_21a(o, 1.0))
        det_curve("seq2_21b_plus", lambda x: boundary_21b(x, 1.0, 1), (-0.125, 0.0))
        det_curve("seq2_21b_minus", lambda x: boundary_21b(x, 1.0, -1), (-0.125, 0.0))
    else:
        raise ValueError("sequence must be 1 or 2")
    return out


def resonance_23(delta1, delta2, delta=1.0):
    """Amplitude of the second carrier at which transition 2-3 becomes resonant with it.

    Raises
    ------
    DomainError
        If ``delta1 + 2 delta2 + delta > 0`` or the radicand is negative.
    """
    if delta1 + 2 * delta2 + delta > 0:
        raise DomainError("2-3 resonance absent: delta1 + 2 delta2 + delta > 0")
    return 2.0 * _sqrt(delta2 * (delta1 + delta2 + delta), "resonance 2-3")


def dynamical_resonance(delta1, delta=1.0):
    """Amplitude of the second carrier that brings transition 1-2 into resonance with the first.

    Defined for ``delta1`` in ``[-2 delta, 0]``.
    """
    return _sqrt(-delta1 * (delta1 + 2 * delta), "dynamical resonance")


def boundary_D(Delta, delta=1.0):
    """Regime-D upper island boundary ``omega1(Delta)`` for ``Delta1 = Delta2 = Delta``."""
    if Delta < -delta * (1 + 1e-15):
        raise DomainError("below Delta = -delta the transfer is topologically forbidden")
    if Delta == 2 * delta:
        raise DomainError("boundary_D is singular at Delta = 2 delta")
    return 2.0 * _sqrt(Delta * (Delta ** 2 - delta ** 2) / (2 * delta - Delta), "boundary_D")


def dprime_omega1(Delta, delta=1.0):
    """D' boundary on the ``omega2 = 0`` axis."""
    inner = _sqrt(delta * (2 * delta - Delta), "D' omega1 inner root")
    return 2.0 * _sqrt((Delta - delta) * (2 * delta - Delta - 2 * inner), "D' omega1")


def dprime_omega2(Delta, delta=1.0):
    """D' boundary on the ``omega1 = 0`` axis."""
    inner = _sqrt(delta * (delta - 4 * Delta), "D' omega2 inner root")
    return 2.0 * _sqrt(Delta * (delta - Delta - inner), "D' omega2")


def boundaries_Dprime(Delta, delta=1.0):
    """Both D' island boundaries ``(omega1_b, omega2_b)``; raises if either is undefined."""
    return dprime_omega1(Delta, delta), dprime_omega2(Delta, delta)


def weak_field_limit_boundaries(delta1, delta2):
    """Very-weak-field allowance and island boundaries of the one-photon channel.

    Returns
    -------
    allowed : bool
        ``delta1 * delta2 > 0``.
    curves : dict
        ``{"seq1": 2 sqrt(delta1 (delta1 + delta2)), "seq2": 2 sqrt(delta2 (delta1 + delta2))}``;
        a value is ``None`` where its radicand is negative.
    """
    s = delta1 + delta2

    def curve(a):
        r = a * s
        return 2.0 * math.sqrt(r) if r >= 0 else None

    return delta1 * delta2 > 0, {"seq1": curve(delta1), "seq2": curve(delta2)}


def overlay_curves(omega_max=2.2, delta_range=(-2.2, 1.1), n=200):
    """Every boundary and resonance curve for a map with ``Delta1 = Delta2 = Delta``.

    Amplitude boundaries on the ``omega1 = 0`` axis are drawn at
    ``omega0 = omega2``, those on the ``omega2 = 0`` axis at ``omega0 = omega1``.
    All values are in units of ``delta``.
    """
    lo, hi = delta_range
    dg = np.linspace(lo, hi, n)
    curves = boundaries_regime_A(1, n, 1.0, omega_max, delta_range)
    curves += boundaries_regime_A(2, n, 1.0, omega_max, delta_range)

    def det_curve(cid, fn, domain, style="full"):
        grid = dg[(dg >= domain[0]) & (dg <= domain[1])]
        pts, bad = _samples(fn, grid)
        pts = [(v, g) for g, v in pts if 0 < v <= omega_max]
        curves.append(BoundaryCurve(cid, np.array(pts).reshape(-1, 2), domain, "delta", style,
                                    bad + int(len(dg) - len(grid))))

    det_curve("resonance_25", lambda x: resonance_23(x, x, 1.0), (-math.inf, -1.0 / 3.0), "dashed")
    det_curve("dyn_res_26", lambda x: dynamical_resonance(x, 1.0), (-2.0, 0.0), "dashed")
    det_curve("D_boundary", lambda x: boundary_D(x, 1.0), (-1.0, -0.5))
    det_curve("Dprime_omega1", lambda x: dprime_omega1(x, 1.0), (-2.0, -1.0))
    det_curve("Dprime_omega2", lambda x: dprime_omega2(x, 1.0), (-2.0, -1.0))
    det_curve("weakfield_13a",
              lambda x: _none_to_domain(weak_field_limit_boundaries(x, x)[1]["seq1"]), (lo, hi))
    det_curve("weakfield_13b",
              lambda x: _none_to_domain(weak_field_limit_boundaries(x, x)[1]["seq2"]), (lo, hi))
    og = np.linspace(0.0, omega_max, n + 1)[1:]
    for cid, level in (("line_delta_eq_minus_delta", -1.0), ("line_delta_eq_minus_half_delta", -0.5)):
        if lo <= level <= hi:
            pts = np.column_stack([og, np.full_like(og, level)])
        else:
            pts = np.zeros((0, 2))
        curves.append(BoundaryCurve(cid, pts, (0.0, omega_max), "omega0", "dashed", 0))
    return curves


def _none_to_domain(v):
    if v is None or v == 0:
        raise DomainError("curve undefined")
    return v
