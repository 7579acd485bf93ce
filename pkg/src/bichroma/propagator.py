"""Time-dependent Schrodinger propagation and final-population reports.

The rotating-frame and lab-frame models run through the compiled kernels
(see ``_backend``); arbitrary Hamiltonian callables go through the same
Dormand-Prince 5(4) stepper in pure Python.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from ._pykernels import dopri5
from .errors import DimensionMismatch, StepSizeUnderflow
from .model import DriveParams, PulsePair, SpinParams, StateAmplitudes, apply_T_symmetry

__all__ = [
    "PropagationConfig",
    "TransferResult",
    "propagate",
    "simulate_transfer",
    "simulate_full",
    "verify_T_invariance",
    "WINDOW_WIDTHS",
]

# half-window beyond the pulse centres, in pulse widths; exp(-4.5^2) ~ 1.6e-9
WINDOW_WIDTHS = 4.5
COVERAGE_TOL = 1e-7
MAX_STEPS = 50_000_000


@dataclass(frozen=True)
class PropagationConfig:
    """Integration window and adaptive-stepper settings.

    ``None`` fields are resolved against the pulse pair: the window defaults to
    ``+-(|tau| + 4.5 width)`` and ``max_step`` to ``min(0.1 width, pi/|delta|)``.
    """

    t_start: float | None = None
    t_end: float | None = None
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_step: float | None = None
    first_step: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.t_start is not None and self.t_end is not None and not self.t_start < self.t_end:
            raise ValueError("t_start must be smaller than t_end")
        if self.max_step is not None and not self.max_step > 0:
            raise ValueError("max_step must be positive")

    def resolve(self, pulse=None, delta=None):
        """Fill defaults from a pulse pair and the carrier difference frequency."""
        t0, t1, hmax = self.t_start, self.t_end, self.max_step
        if pulse is not None:
            half = abs(pulse.tau) + WINDOW_WIDTHS * pulse.width
            t0 = -half if t0 is None else t0
            t1 = half if t1 is None else t1
            if hmax is None:
                hmax = 0.1 * pulse.width
        if t0 is None or t1 is None:
            raise ValueError("integration window is not set")
        if delta is not None and delta != 0:
            hmax = math.pi / abs(delta) if hmax is None else min(hmax, math.pi / abs(delta))
        if hmax is None:
            hmax = (t1 - t0) / 100.0
        h0 = self.first_step if self.first_step is not None else min(hmax, 1e-3 * (t1 - t0))
        return replace(self, t_start=t0, t_end=t1, max_step=hmax, first_step=h0)


@dataclass(frozen=True)
class TransferResult:
    """Final populations of one propagation.

    Attributes
    ----------
    populations : tuple of float
        ``|a_n|^2`` at the end of the window.
    norm_drift : float
        ``| ||psi|| - 1 |`` at the end of the window (no renormalization is applied).
    final_state : StateAmplitudes
    steps : int
        Accepted integrator steps.
    history : ndarray or None
        Populations at checkpoint times, shape ``(n_checkpoints + 1, dim)``,
        when requested.
    """

    populations: tuple
    norm_drift: float
    final_state: StateAmplitudes
    steps: int = 0
    history: np.ndarray | None = None

    @property
    def dominant(self):
        """0-based index of the largest final population."""
        return int(np.argmax(self.populations))


def _check(status, t0, t1):
    if status == 1:
        raise StepSizeUnderflow(f"step size underflow while integrating over [{t0}, {t1}]")
    if status == 2:
        raise StepSizeUnderflow(f"step budget exhausted while integrating over [{t0}, {t1}]")


def _finish(y, frame, steps, history=None):
    a = np.asarray(y, dtype=complex)
    norm = float(np.sqrt(np.sum(np.abs(a) ** 2)))
    pops = tuple(float(v) for v in np.abs(a) ** 2)
    state = StateAmplitudes(a, frame, check_norm=False)
    return TransferResult(pops, abs(norm - 1.0), state, steps, history)


def _coverage_warning(pulse, t0, t1):
    if pulse.omega0 == 0:
        return
    for t in (t0, t1):
        o1 = math.exp(-((t + pulse.tau) / pulse.width) ** 2)
        o2 = math.exp(-((t - pulse.tau) / pulse.width) ** 2)
        if max(o1, o2) > COVERAGE_TOL:
            warnings.warn(f"pulse envelope is {max(o1, o2):.2e} of its peak at t={t}; "
                          "widen the integration window", RuntimeWarning, stacklevel=3)
            return


def propagate(hamiltonian, psi0, cfg):
    """Integrate ``i dpsi/dt = H(t) psi`` over ``[cfg.t_start, cfg.t_end]``.

    Parameters
    ----------
    hamiltonian : callable
        ``t -> (n, n)`` Hermitian array.
    psi0 : StateAmplitudes or array_like
        Initial state, normalized.
    cfg : PropagationConfig
        Must have a window; ``max_step`` defaults to a hundredth of the window.

    Returns
    -------
    StateAmplitudes
        Final state, not renormalized (built with ``check_norm=False``).
    """
    cfg = cfg.resolve()
    frame = psi0.frame if isinstance(psi0, StateAmplitudes) else None
    y0 = np.asarray(psi0.amps if isinstance(psi0, StateAmplitudes) else psi0, dtype=complex)
    h_probe = np.asarray(hamiltonian(cfg.t_start))
    if h_probe.shape != (y0.size, y0.size):
        raise DimensionMismatch(f"Hamiltonian shape {h_probe.shape} does not match state size {y0.size}")

    def f(t, y):
        return (-1j * (np.asarray(hamiltonian(t)) @ np.asarray(y))).tolist()

    y, _, _, status = dopri5(f, y0.tolist(), cfg.t_start, cfg.t_end, cfg.rel_tol, cfg.abs_tol,
                             cfg.max_step, cfg.first_step, MAX_STEPS)
    _check(status, cfg.t_start, cfg.t_end)
    if frame is None:
        frame = {3: "rwa", 4: "lab"}.get(y0.size, "rwa")
    if y0.size not in (3, 4):
        return np.asarray(y, dtype=complex)
    return StateAmplitudes(np.asarray(y, dtype=complex), frame, check_norm=False)


def _checkpoints(t0, t1, n):
    return np.linspace(t0, t1, n + 1) if n > 0 else np.array([t0, t1])


def simulate_transfer(pulse, drive, cfg=None, initial=None, n_checkpoints=0):
    """Propagate the rotating-frame ladder from |1> through a pulse pair.

    Parameters
    ----------
    pulse : PulsePair
    drive : DriveParams
    cfg : PropagationConfig, optional
    initial : StateAmplitudes, optional
        Defaults to |1>.
    n_checkpoints : int
        If positive, record populations at that many equally spaced times.

    Returns
    -------
    TransferResult
        Populations of |1>, |2>, |3>.

    Notes
    -----
    Everything is rescaled to units of ``|delta|`` before integration, so the
    result depends only on dimensionless ratios.
    """
    cfg = (cfg or PropagationConfig())
    s = drive.scale
    nd = drive.normalized()
    npulse = PulsePair(pulse.omega0 / s, pulse.width * s, pulse.tau * s)
    ncfg = replace(cfg,
                   t_start=None if cfg.t_start is None else cfg.t_start * s,
                   t_end=None if cfg.t_end is None else cfg.t_end * s,
                   max_step=None if cfg.max_step is None else cfg.max_step * s,
                   first_step=None if cfg.first_step is None else cfg.first_step * s)
    ncfg = ncfg.resolve(npulse, nd.delta)
    _coverage_warning(npulse, ncfg.t_start, ncfg.t_end)
    y = [1.0 + 0j, 0j, 0j] if initial is None else [complex(v) for v in initial.amps]
    if len(y) != 3:
        raise DimensionMismatch("rotating-frame propagation needs three amplitudes")
    if npulse.omega0 == 0:
        # diagonal Hamiltonian: exact phase evolution
        dt = ncfg.t_end - ncfg.t_start
        ph = np.exp(-1j * np.array([0.0, nd.delta1, nd.delta1 + nd.delta2]) * dt)
        hist = None
        if n_checkpoints > 0:
            hist = np.tile(np.abs(np.asarray(y)) ** 2, (n_checkpoints + 1, 1))
        return _finish(np.asarray(y) * ph, "rwa", 0, hist)
    times = _checkpoints(ncfg.t_start, ncfg.t_end, n_checkpoints)
    hist = [np.abs(np.asarray(y)) ** 2]
    steps = 0
    h = ncfg.first_step
    for a, b in zip(times[:-1], times[1:]):
        y, na, _, status = _backend.rwa_propagate(
            nd.delta1, nd.delta2, nd.delta, npulse.omega0, npulse.width, npulse.tau,
            float(a), float(b), y, ncfg.rel_tol, ncfg.abs_tol, ncfg.max_step, h, MAX_STEPS)
        _check(status, a, b)
        steps += na
        hist.append(np.abs(np.asarray(y)) ** 2)
    return _finish(y, "rwa", steps, np.array(hist) if n_checkpoints > 0 else None)


def simulate_full(pulse, spin, drive, cfg=None, initial=None, field_scale=math.sqrt(2.0),
                  n_checkpoints=0):
    """Propagate the lab-frame four-state model, counter-rotating terms included.

    Parameters
    ----------
    pulse : PulsePair
    spin : SpinParams
        Must be consistent with ``drive`` (see ``SpinParams.for_drive``).
    drive : DriveParams
    cfg : PropagationConfig, optional
        ``max_step`` is capped at ``0.05 * 2 pi / max(omega1, omega2)``.
    initial : StateAmplitudes, optional
        Lab-frame state; defaults to |dd>.
    field_scale : float
        Envelope-to-``beta_x`` factor, see ``model.full_hamiltonian``. The
        default makes the rotating-wave limit coincide with
        ``simulate_transfer`` for the same pulse pair.
    n_checkpoints : int
        Record populations at this many equally spaced times.

    Returns
    -------
    TransferResult
        Populations of |dd>, |du+>, |uu>, |du->.
    """
    cfg = cfg or PropagationConfig()
    w1, w2 = drive.carriers(spin)
    hcar = 0.05 * 2 * math.pi / max(w1, w2)
    cfg = cfg.resolve(pulse, drive.delta)
    cfg = replace(cfg, max_step=min(cfg.max_step, hcar), first_step=min(cfg.first_step, hcar))
    _coverage_warning(pulse, cfg.t_start, cfg.t_end)
    if initial is None:
        y = [1.0 + 0j, 0j, 0j, 0j]
    else:
        if initial.frame != "lab":
            raise DimensionMismatch("lab-frame propagation needs a four-amplitude lab state")
        y = [complex(v) for v in initial.amps]
    times = _checkpoints(cfg.t_start, cfg.t_end, n_checkpoints)
    hist = [np.abs(np.asarray(y)) ** 2]
    steps = 0
    for a, b in zip(times[:-1], times[1:]):
        y, na, _, status = _backend.lab_propagate(
            spin.xi, spin.beta_z, w1, w2, spin.phi1, spin.phi2,
            field_scale * pulse.omega0, pulse.width, pulse.tau,
            float(a), float(b), y, cfg.rel_tol, cfg.abs_tol, cfg.max_step, cfg.first_step,
            MAX_STEPS)
        _check(status, a, b)
        steps += na
        hist.append(np.abs(np.asarray(y)) ** 2)
    return _finish(y, "lab", steps, np.array(hist) if n_checkpoints > 0 else None)


def verify_T_invariance(pulse, drive, cfg=None):
    """Largest population difference between a run and its symmetry image."""
    a = simulate_transfer(pulse, drive, cfg)
    d2, p2 = apply_T_symmetry(drive, pulse)
    b = simulate_transfer(p2, d2, cfg)
    return float(max(abs(x - y) for x, y in zip(a.populations, b.populations)))
