"""Parameter types and Hamiltonian builders for the bichromatically driven ladder.

The ladder is |1> = |dd>, |2> = |du+> (symmetric triplet), |3> = |uu>; the
singlet |du-> is decoupled. All builders are pure functions of immutable
parameter objects and return dense complex ``numpy`` arrays that have been
checked for Hermiticity.

Frequencies are angular frequencies in arbitrary but consistent units. The
difference frequency ``delta`` of the two carriers sets the natural scale;
helpers that need dimensionless numbers divide by ``abs(delta)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatch, NonHermitianError, NormError, SingularDenominator

__all__ = [
    "SpinParams",
    "DriveParams",
    "PulsePair",
    "StateAmplitudes",
    "RegimeLabel",
    "hermitian",
    "pulse_envelopes",
    "rwa_hamiltonian",
    "rwa_hamiltonian_fields",
    "full_hamiltonian",
    "apply_T_symmetry",
    "t_symmetry_gauge_image",
    "effective_hamiltonian",
    "effective_floquet_Dprime",
    "DELAY_CONVENTIONS",
]

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-9
DELAY_CONVENTIONS = ("peak_separation", "literal")


def hermitian(m, tol=HERMITIAN_TOL):
    """Return ``m`` as a symmetrized complex Hermitian array.

    Parameters
    ----------
    m : array_like
        Square matrix.
    tol : float
        Largest entrywise deviation ``|m - m^H|`` tolerated before raising.

    Raises
    ------
    DimensionMismatch
        If ``m`` is not square.
    NonHermitianError
        If ``m`` deviates from its conjugate transpose by more than ``tol``.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NonHermitianError(f"matrix deviates from Hermitian by {dev:.3e}")
    return 0.5 * (a + a.conj().T)


class RegimeLabel(str, enum.Enum):
    """Regimes of the detuning plane (weak field) plus the strong-field D' regime."""

    A = "A"
    A_weak = "A_weak"
    B = "B"
    C = "C"
    C_tilde = "C_tilde"
    D = "D"
    D_tilde = "D_tilde"
    D_prime = "D_prime"
    none = "none"


@dataclass(frozen=True)
class SpinParams:
    """Constants of the two exchange-coupled spins.

    Parameters
    ----------
    xi : float
        Exchange constant, negative.
    beta_z : float
        Static Zeeman shift, positive and larger than ``2*|xi|``.
    phi1, phi2 : float
        Phases of the two carriers (radians); only the lab-frame model uses them.
    """

    xi: float
    beta_z: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if not (self.xi < 0 and self.beta_z > 0 and self.beta_z > 2 * abs(self.xi)):
            raise ValueError(
                f"need xi < 0 < beta_z and beta_z > 2|xi|; got xi={self.xi}, beta_z={self.beta_z}")

    @property
    def energies(self):
        """Bare energies of |dd>, |du+>, |uu> and the singlet |du->."""
        return (self.xi - self.beta_z, -self.xi, self.xi + self.beta_z, -self.xi)

    @classmethod
    def for_drive(cls, drive, beta_z, phi1=0.0, phi2=0.0):
        """Spin constants whose exchange splitting is consistent with ``drive``.

        The carriers are then separated by exactly ``drive.delta``, which fixes
        ``4|xi| = delta + delta1 - delta2``.
        """
        four_xi = drive.delta + drive.delta1 - drive.delta2
        if four_xi <= 0:
            raise ValueError("delta + delta1 - delta2 must be positive for a consistent exchange constant")
        return cls(xi=-four_xi / 4.0, beta_z=beta_z, phi1=phi1, phi2=phi2)


@dataclass(frozen=True)
class DriveParams:
    """One-photon detunings and the carrier difference frequency.

    ``delta`` is positive in ordinary use. The symmetry transform flips its sign,
    so a negative value is accepted and denotes the transformed problem.
    """

    delta1: float
    delta2: float
    delta: float = 1.0

    def __post_init__(self):
        for name in ("delta1", "delta2", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.delta == 0:
            raise ValueError("delta must be nonzero")

    @property
    def scale(self):
        return abs(self.delta)

    def normalized(self):
        """Same drive expressed in units of ``|delta|``."""
        s = self.scale
        return DriveParams(self.delta1 / s, self.delta2 / s, self.delta / s)

    def carriers(self, spin):
        """Carrier frequencies ``(omega1, omega2)`` for the given spin constants.

        Raises
        ------
        ValueError
            If the spin splitting is inconsistent with ``delta`` or a carrier is
            not positive.
        """
        w1 = 2 * abs(spin.xi) + spin.beta_z - self.delta1
        w2 = -2 * abs(spin.xi) + spin.beta_z - self.delta2
        dw = w1 - w2
        scale = max(abs(w1), abs(w2), 1.0)
        if abs(dw - self.delta) > 1e-9 * scale:
            raise ValueError(
                f"carrier separation {dw} differs from delta={self.delta}; "
                "use SpinParams.for_drive to build consistent constants")
        if w1 <= 0 or w2 <= 0:
            raise ValueError("carrier frequencies must be positive")
        return w1, w2


@dataclass(frozen=True)
class PulsePair:
    """Two Gaussian envelopes of equal peak value.

    ``omega1(t) = omega0 exp(-(t + tau)^2 / width^2)`` and
    ``omega2(t) = omega0 exp(-(t - tau)^2 / width^2)``. A positive ``tau`` fires
    the omega1 pulse first (sequence 1), a negative one fires omega2 first
    (sequence 2).
    """

    omega0: float
    width: float
    tau: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise ValueError("omega0 must be finite and nonnegative")
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError("width must be finite and positive")
        if not math.isfinite(self.tau):
            raise ValueError("tau must be finite")

    @property
    def sequence(self):
        """1 when the omega1 pulse comes first, 2 when omega2 comes first, 0 if simultaneous."""
        return 1 if self.tau > 0 else (2 if self.tau < 0 else 0)

    def swapped(self):
        return replace(self, tau=-self.tau)

    def envelopes(self, t):
        return pulse_envelopes(t, self)

    @classmethod
    def from_area(cls, omega0, area=50.0, delay=1.7, sequence=1,
                  delay_convention="peak_separation"):
        """Build a pulse pair from the pulse area ``omega0 * width``.

        Parameters
        ----------
        omega0 : float
            Peak Rabi frequency, positive.
        area : float
            ``omega0 * width``.
        delay : float
            Delay in units of the width, always given as a positive number.
        sequence : {1, 2}
            Pulse ordering; sets the sign of ``tau``.
        delay_convention : {"peak_separation", "literal"}
            ``"peak_separation"`` reads ``delay`` as the distance between the two
            pulse maxima, so ``tau = delay * width / 2``. ``"literal"`` uses
            ``tau = delay * width`` directly.
        """
        if omega0 <= 0:
            raise ValueError("from_area needs omega0 > 0")
        if area <= 0:
            raise ValueError("area must be positive")
        if sequence not in (1, 2):
            raise ValueError("sequence must be 1 or 2")
        if delay_convention not in DELAY_CONVENTIONS:
            raise ValueError(f"delay_convention must be one of {DELAY_CONVENTIONS}")
        width = area / omega0
        tau = abs(delay) * width
        if delay_convention == "peak_separation":
            tau /= 2.0
        return cls(omega0=omega0, width=width, tau=tau if sequence == 1 else -tau)


@dataclass(frozen=True)
class StateAmplitudes:
    """Normalized amplitude vector in the rotating (3 states) or lab (4 states) frame."""

    amps: np.ndarray
    frame: str = "rwa"
    check_norm: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)
        expected = {"rwa": 3, "lab": 4}.get(self.frame)
        if expected is None:
            raise ValueError("frame must be 'rwa' or 'lab'")
        if a.size != expected:
            raise DimensionMismatch(f"{self.frame} frame needs {expected} amplitudes, got {a.size}")
        if self.check_norm and abs(self.norm - 1.0) > NORM_TOL:
            raise NormError(f"amplitudes have norm {self.norm:.12f}")

    @property
    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    @property
    def populations(self):
        return np.abs(self.amps) ** 2

    @classmethod
    def basis(cls, index, frame="rwa"):
        """Basis state with 0-based ``index``."""
        n = 3 if frame == "rwa" else 4
        a = np.zeros(n, dtype=complex)
        a[index] = 1.0
        return cls(a, frame)

    def __eq__(self, other):
        if not isinstance(other, StateAmplitudes):
            return NotImplemented
        return self.frame == other.frame and np.array_equal(self.amps, other.amps)

    def __hash__(self):
        return hash((self.frame, self.amps.tobytes()))


def pulse_envelopes(t, p):
    """Envelope values ``(omega1, omega2)`` at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    o1 = p.omega0 * np.exp(-((t + p.tau) / p.width) ** 2)
    o2 = p.omega0 * np.exp(-((t - p.tau) / p.width) ** 2)
    if o1.ndim == 0:
        return float(o1), float(o2)
    return o1, o2


def rwa_hamiltonian_fields(t, omega1, omega2, d):
    """Rotating-frame Hamiltonian for given instantaneous envelope values."""
    e = np.exp(1j * d.delta * t)
    h12 = 0.5 * (omega1 + np.conj(e) * omega2)
    h23 = 0.5 * (omega2 + e * omega1)
    h = np.array([[0.0, h12, 0.0],
                  [np.conj(h12), d.delta1, h23],
                  [0.0, np.conj(h23), d.delta1 + d.delta2]], dtype=complex)
    return hermitian(h)


def rwa_hamiltonian(t, p, d):
    """Three-state rotating-wave Hamiltonian at time ``t``.

    Both carriers couple both transitions; the off-resonant partner enters
    through the explicit ``exp(+-i delta t)`` factors.
    """
    o1, o2 = pulse_envelopes(t, p)
    return rwa_hamiltonian_fields(t, o1, o2, d)


def full_hamiltonian(t, p, s, d, field_scale=1.0):
    """Lab-frame four-state Hamiltonian in the basis |dd>, |du+>, |uu>, |du->.

    The transverse field is ``beta_x = field_scale * (omega1(t) cos(w1 t + phi1)
    + omega2(t) cos(w2 t + phi2))`` and couples neighbouring triplet states with
    ``beta_x / sqrt(2)``. The singlet row and column are exactly zero apart from
    the diagonal.

    Parameters
    ----------
    field_scale : float
        Multiplier from envelope values to ``beta_x`` amplitude. With
        ``sqrt(2)`` the rotating-wave limit reproduces ``rwa_hamiltonian``
        exactly; with 1 the envelopes are the bare ``beta_x`` amplitudes.
    """
    w1, w2 = d.carriers(s)
    o1, o2 = pulse_envelopes(t, p)
    bx = field_scale * (o1 * math.cos(w1 * t + s.phi1) + o2 * math.cos(w2 * t + s.phi2))
    c = bx / math.sqrt(2.0)
    e1, e2, e3, e4 = s.energies
    h = np.array([[e1, c, 0, 0],
                  [c, e2, c, 0],
                  [0, c, e3, 0],
                  [0, 0, 0, e4]], dtype=complex)
    return hermitian(h)


def apply_T_symmetry(d, p):
    """Map parameters through the population-preserving symmetry transform.

    ``delta1 -> delta1 + delta``, ``delta2 -> delta2 - delta``,
    ``delta -> -delta`` and the two envelopes are exchanged (``tau -> -tau``).
    The map is an involution.
    """
    d2 = DriveParams(d.delta1 + d.delta, d.delta2 - d.delta, -d.delta)
    return d2, p.swapped()


def t_symmetry_gauge_image(t, p, d):
    """Transformed Hamiltonian brought back to the original frame.

    Returns ``R^H (T H) R + i (dR^H/dt) R`` with ``R = diag(1, exp(-i delta t), 1)``,
    where ``T H`` is the rotating-frame Hamiltonian built from the transformed
    parameters. The result equals ``rwa_hamiltonian(t, p, d)``.
    """
    d2, p2 = apply_T_symmetry(d, p)
    th = rwa_hamiltonian(t, p2, d2)
    r = np.diag([1.0, np.exp(-1j * d.delta * t), 1.0])
    drh = np.diag([0.0, 1j * d.delta * np.exp(1j * d.delta * t), 0.0])
    return hermitian(r.conj().T @ th @ r + 1j * drh @ r)


def _nonzero(value, name):
    if value == 0 or abs(value) < 1e-300:
        raise SingularDenominator(f"{name} vanishes; the effective Hamiltonian is undefined here")
    return value


def effective_hamiltonian(regime, omega1, omega2, d):
    """Effective three-state Hamiltonian of a weak-field regime.

    Parameters
    ----------
    regime : RegimeLabel or str
        One of ``A`` (one-photon channel with Stark shifts), ``A_weak`` (channel
        alone), ``B``, ``C`` or ``D``.
    omega1, omega2 : float
        Instantaneous envelope values.
    d : DriveParams

    Raises
    ------
    SingularDenominator
        If an energy denominator of the selected regime is zero.
    """
    regime = RegimeLabel(regime)
    d1, d2, dl = d.delta1, d.delta2, d.delta
    o1s, o2s = omega1 ** 2, omega2 ** 2
    if regime is RegimeLabel.A:
        a = _nonzero(dl + d1, "delta + delta1")
        b = _nonzero(dl - d2, "delta - delta2")
        diag = (-o2s / (2 * a),
                2 * d1 + o2s / (2 * a) + o1s / (2 * b),
                2 * (d1 + d2) - o1s / (2 * b))
        off = (omega1, omega2)
    elif regime is RegimeLabel.A_weak:
        diag = (0.0, 2 * d1, 2 * (d1 + d2))
        off = (omega1, omega2)
    elif regime is RegimeLabel.B:
        a = _nonzero(d1, "delta1")
        b = _nonzero(d2, "delta2")
        diag = (-o1s / (2 * a),
                2 * (d1 + dl) + o1s / (2 * a) - o2s / (2 * b),
                2 * (d1 + d2) + o2s / (2 * b))
        off = (omega2, omega1)
    elif regime is RegimeLabel.C:
        a = _nonzero(d1, "delta1")
        b = _nonzero(d2 - dl, "delta2 - delta")
        diag = (-o1s / (2 * a),
                2 * (d1 + dl) + o1s / (2 * a) - o1s / (2 * b),
                2 * (d1 + d2 + dl) + o1s / (2 * b))
        off = (omega2, omega2)
    elif regime is RegimeLabel.D:
        a = _nonzero(d1, "delta1")
        b = _nonzero(d2 - dl, "delta2 - delta")
        c = _nonzero(d2, "delta2")
        diag = (-o1s / (2 * a),
                2 * (d1 + dl) + o1s / (2 * a) - o1s / (2 * b) - o2s / (2 * c),
                2 * (d1 + d2 + dl) + o1s / (2 * b) + o2s / (2 * c))
        off = (omega2, 0.0)
    else:
        raise ValueError(f"no effective Hamiltonian for regime {regime.value}")
    h = 0.5 * np.array([[diag[0], off[0], 0.0],
                        [off[0], diag[1], off[1]],
                        [0.0, off[1], diag[2]]], dtype=complex)
    return hermitian(h)


def effective_floquet_Dprime(omega1, omega2, d, n_modes=12):
    """Fourier-truncated quasienergy operator of the strong-field D' regime.

    Basis ordering is ``(mode m, state n)`` with ``m`` running over
    ``-n_modes..n_modes`` and ``n`` over 1, 2, 3; index ``3*(m + n_modes) + n - 1``.
    States 1 and 2 form a two-level system driven by both carriers
    (``omega2`` within a Fourier block, ``omega1`` between neighbouring blocks);
    state 3 is a decoupled, Stark-shifted level.

    Raises
    ------
    SingularDenominator
        If ``delta2`` or ``delta2 - delta`` is zero.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    d1, d2, dl = d.delta1, d.delta2, d.delta
    b = _nonzero(d2 - dl, "delta2 - delta")
    c = _nonzero(d2, "delta2")
    shift = omega1 ** 2 / (2 * b) + omega2 ** 2 / (2 * c)
    e = (0.0, d1 + dl - 0.5 * shift, d1 + d2 + dl + 0.5 * shift)
    nb = 2 * n_modes + 1
    m = np.zeros((3 * nb, 3 * nb), dtype=complex)
    for k in range(nb):
        kk = k - n_modes
        i = 3 * k
        for n in range(3):
            m[i + n, i + n] = e[n] + kk * dl
        m[i, i + 1] = m[i + 1, i] = 0.5 * omega2
        if k + 1 < nb:
            # state 1 in mode k+1 couples to state 2 in mode k
            j = 3 * (k + 1)
            m[j, i + 1] = m[i + 1, j] = 0.5 * omega1
    return hermitian(m)
