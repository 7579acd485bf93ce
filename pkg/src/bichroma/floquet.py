"""Quasienergy operator, labelled quasienergy surfaces and adiabatic tracking.

Basis ordering of every truncated operator here is ``(Fourier mode j, state n)``
with flat index ``3*(j + n_modes) + (n - 1)``. Fourier mode ``j`` of state ``n``
is the dressed state

* ``|1; j, -j>`` for n = 1,
* ``|2; j-1, -j>`` for n = 2,
* ``|3; j-1, -j-1>`` for n = 3,

whose zero-field quasienergy is ``E_n + j*delta`` with ``E = (0, delta1,
delta1 + delta2)``. With one field switched off a photon number is conserved
and the operator splits into small blocks; solving those blocks separately
makes the sheets that cross on the axes exactly degenerate and exactly
labelled.
"""
from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment
from scipy.sparse.csgraph import connected_components

from .errors import AmbiguousContinuation, ConvergenceFailure, LostBranch
from .model import _nonzero, effective_floquet_Dprime, hermitian, pulse_envelopes

__all__ = [
    "FloquetLabel",
    "IntersectionRecord",
    "QuasienergySurface",
    "build_quasienergy_operator",
    "basis_labels",
    "eigensolve",
    "dressed_states",
    "compute_surface",
    "pulse_path",
    "track_adiabatic_path",
    "track_pulse",
    "find_axis_intersections",
    "axis_block_eigenvalues",
    "CROSSING_TOL",
]

CROSSING_TOL = 1e-8
OVERLAP_MIN = 0.9
AMBIGUITY_GAP = 0.1
TIMED_OVERLAP_MIN = float(np.cos(0.2))
# adiabaticity ratio at which a Landau-Zener crossing is diabatic with probability 1/2
LZ_RATIO = float(np.pi / (4 * np.log(2)))


@dataclass(frozen=True, order=True)
class FloquetLabel:
    """Diabatic label ``|n; k1, k2>``: bare state ``n`` with relative photon numbers."""

    n: int
    k1: int
    k2: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError("n must be 1, 2 or 3")
        if self.k1 + self.k2 != 1 - self.n:
            raise ValueError(f"|{self.n}; {self.k1}, {self.k2}> is not a valid dressed label")

    @classmethod
    def from_fourier(cls, n, j):
        """Label of Fourier mode ``j`` of bare state ``n``."""
        if n == 1:
            return cls(1, j, -j)
        if n == 2:
            return cls(2, j - 1, -j)
        return cls(3, j - 1, -j - 1)

    @property
    def fourier(self):
        return self.k1 if self.n == 1 else self.k1 + 1

    def shifted(self, m):
        """Same bare state, Fourier mode moved by ``m`` (quasienergy moves by ``m*delta``)."""
        return FloquetLabel.from_fourier(self.n, self.fourier + m)

    def bare_quasienergy(self, d):
        e = (0.0, d.delta1, d.delta1 + d.delta2)[self.n - 1]
        return e + self.fourier * d.delta

    @classmethod
    def parse(cls, text):
        """Inverse of ``str``: accepts ``"|2;0,-1>"`` or ``"2,0,-1"``."""
        s = text.strip().strip("|>").replace(";", ",")
        n, k1, k2 = (int(v) for v in s.split(","))
        return cls(n, k1, k2)

    def __str__(self):
        return f"|{self.n};{self.k1},{self.k2}>"


@dataclass(frozen=True)
class IntersectionRecord:
    """Exact crossing of two sheets on an axis where one field is off.

    ``axis`` is ``"omega1=0"`` or ``"omega2=0"``; ``position`` is the value of the
    other amplitude; ``sheets`` are labelled with the lower-``n`` member in
    Fourier mode 0.
    """

    axis: str
    position: float
    sheets: tuple
    gap_at_crossing: float


@dataclass
class QuasienergySurface:
    """Labelled quasienergy sheets over an ``(omega1, omega2)`` grid, in units of ``|delta|``.

    Attributes
    ----------
    omega1, omega2 : ndarray
        Grid axes.
    labels : list of FloquetLabel
        One label per sheet, fixed at the origin.
    values : ndarray
        ``values[i2, i1, s]`` is the quasienergy of sheet ``s`` at
        ``(omega1[i1], omega2[i2])``.
    n_modes : int
    flagged : ndarray of bool
        Nodes where the continuation was ambiguous.
    """

    omega1: np.ndarray
    omega2: np.ndarray
    labels: list
    values: np.ndarray
    n_modes: int
    flagged: np.ndarray = field(default=None)

    def index(self, label):
        return self.labels.index(label)

    def sheet(self, label):
        """Quasienergy of one labelled sheet over the grid, shape ``(len(omega2), len(omega1))``."""
        return self.values[:, :, self.index(label)]

    def interior_labels(self, margin=8):
        """Labels whose Fourier mode is at least ``margin`` away from the truncation edge.

        Sheets closer to the edge feel the truncation: four modes in, the
        error reaches ~1e-4 at amplitudes ~delta, while eight modes in it is
        at round-off level for amplitudes up to ~1.5 delta.
        """
        lim = self.n_modes - margin
        return [lab for lab in self.labels if abs(lab.fourier) <= lim]


def basis_labels(n_modes, operator="full"):
    """Dressed labels of the basis vectors of a truncated operator."""
    out = []
    for j in range(-n_modes, n_modes + 1):
        for n in (1, 2, 3):
            jj = j if (operator == "full" or n == 1) else j + 1
            out.append(FloquetLabel.from_fourier(n, jj))
    return out


class _Structure:
    """Field-independent pieces of a truncated operator.

    The operator is ``diag(e0 + o1^2 s1 + o2^2 s2) + o1 c1 + o2 c2`` with real
    entries, which keeps repeated solves along paths and grids cheap.
    """

    def __init__(self, d, n_modes, operator):
        if n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        nb = 2 * n_modes + 1
        dim = 3 * nb
        self.labels = basis_labels(n_modes, operator)
        self.e0 = np.zeros(dim)
        self.s1 = np.zeros(dim)
        self.s2 = np.zeros(dim)
        self.c1 = np.zeros((dim, dim))
        self.c2 = np.zeros((dim, dim))
        d1, d2, dl = d.delta1, d.delta2, d.delta
        if operator == "full":
            e = (0.0, d1, d1 + d2)
        elif operator == "dprime":
            b = _nonzero(d2 - dl, "delta2 - delta")
            c = _nonzero(d2, "delta2")
            e = (0.0, d1 + dl, d1 + d2 + dl)
            self.s1[1::3] = -1.0 / (4 * b)
            self.s2[1::3] = -1.0 / (4 * c)
            self.s1[2::3] = 1.0 / (4 * b)
            self.s2[2::3] = 1.0 / (4 * c)
        else:
            raise ValueError("operator must be 'full' or 'dprime'")
        for k in range(nb):
            i = 3 * k
            self.e0[i:i + 3] = np.array(e) + (k - n_modes) * dl
            if operator == "full":
                self.c1[i, i + 1] = self.c1[i + 1, i] = 0.5
                self.c2[i + 1, i + 2] = self.c2[i + 2, i + 1] = 0.5
                if k + 1 < nb:
                    j = 3 * (k + 1)
                    # state 2 in mode k+1 couples to state 1 and state 3 in mode k
                    self.c2[j + 1, i] = self.c2[i, j + 1] = 0.5
                    self.c1[j + 1, i + 2] = self.c1[i + 2, j + 1] = 0.5
            else:
                self.c2[i, i + 1] = self.c2[i + 1, i] = 0.5
                if k + 1 < nb:
                    j = 3 * (k + 1)
                    # state 1 in mode k+1 couples to state 2 in mode k
                    self.c1[j, i + 1] = self.c1[i + 1, j] = 0.5
        self.blocks = {}
        for axis in ("omega1=0", "omega2=0"):
            q = _conserved(self.labels, axis)
            self.blocks[axis] = [np.flatnonzero(q == v) for v in np.unique(q)]

    def matrix(self, o1, o2):
        m = o1 * self.c1 + o2 * self.c2
        m[np.diag_indices_from(m)] = self.e0 + o1 * o1 * self.s1 + o2 * o2 * self.s2
        return m


@functools.lru_cache(maxsize=64)
def _structure(d, n_modes, operator):
    return _Structure(d, n_modes, operator)


def build_quasienergy_operator(omega1, omega2, d, n_modes=12):
    """Fourier-truncated quasienergy operator of the rotating-frame ladder.

    Within a Fourier mode, ``omega1`` couples states 1-2 and ``omega2`` couples
    2-3; between neighbouring modes the roles are exchanged. Dimension is
    ``3(2 n_modes + 1)``.

    Parameters
    ----------
    omega1, omega2 : float
        Envelope values.
    d : DriveParams
    n_modes : int
        Fourier modes ``-n_modes..n_modes`` are kept.
    """
    return hermitian(_structure(d, n_modes, "full").matrix(omega1, omega2))


def _operator(omega1, omega2, d, n_modes, operator):
    if operator == "full":
        return build_quasienergy_operator(omega1, omega2, d, n_modes)
    if operator == "dprime":
        return effective_floquet_Dprime(omega1, omega2, d, n_modes)
    raise ValueError("operator must be 'full' or 'dprime'")


def eigensolve(m, check=True):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.

    Raises
    ------
    ConvergenceFailure
        If the dense solver fails or its residual exceeds ``1e-10 * ||M||``.
    """
    m = np.asarray(m)
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if check and m.size:
        scale = max(np.linalg.norm(m, 2), 1e-300)
        res = np.max(np.linalg.norm(m @ v - v * w, axis=0))
        orth = np.max(np.abs(v.conj().T @ v - np.eye(m.shape[0])))
        if res > 1e-10 * scale or orth > 1e-10:
            raise ConvergenceFailure(f"eigensolver residual {res:.2e}, orthogonality error {orth:.2e}")
    return w, v


def _conserved(labels, axis):
    # omega2 = 0 conserves k2, omega1 = 0 conserves k1
    return np.array([lab.k2 if axis == "omega2=0" else lab.k1 for lab in labels])


def dressed_states(omega1, omega2, d, n_modes=12, operator="full", check=False):
    """Eigen-decomposition with exact block structure on the axes.

    When a field amplitude is exactly zero the operator is diagonalized block
    by block, so each eigenvector carries a definite conserved photon number
    and sheets from different blocks cross exactly. All operators here are
    real symmetric, so the eigenvectors are real.

    Returns
    -------
    values : ndarray
        Eigenvalues, ascending.
    vectors : ndarray
        Orthonormal eigenvectors as columns.
    """
    st = _structure(d, n_modes, operator)
    m = st.matrix(omega1, omega2)
    if omega1 != 0 and omega2 != 0:
        return eigensolve(m, check)
    if omega1 == 0 and omega2 == 0:
        w = np.diag(m).copy()
        order = np.argsort(w, kind="stable")
        return w[order], np.eye(len(w))[:, order]
    dim = m.shape[0]
    w = np.empty(dim)
    v = np.zeros((dim, dim))
    col = 0
    for idx in st.blocks["omega2=0" if omega2 == 0 else "omega1=0"]:
        bw, bv = eigensolve(m[np.ix_(idx, idx)], check)
        w[col:col + len(idx)] = bw
        v[idx, col:col + len(idx)] = bv
        col += len(idx)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _match(prev, vecs, band):
    """Assign new eigenvectors to labelled sheets by maximal overlap.

    Returns the permutation ``perm`` (sheet s -> column perm[s]) and whether
    the assignment was ambiguous for any sheet in ``band``.
    """
    ov = np.abs(prev.conj().T @ vecs)
    rows, cols = linear_sum_assignment(-(ov ** 2))
    perm = np.empty(len(rows), dtype=int)
    perm[rows] = cols
    ambiguous = False
    for s in band:
        r = np.sort(ov[s])[::-1]
        if r[0] - r[1] < AMBIGUITY_GAP:
            ambiguous = True
            break
    return perm, ambiguous


def compute_surface(omega1_grid, omega2_grid, d, n_modes=12, operator="full", warn=True):
    """Labelled quasienergy sheets over a rectangular grid containing the origin.

    Sheets are labelled at the origin by their bare states and continued node
    by node in row-major order (along ``omega1`` on the first row, then up
    each column from the row below) by maximal eigenvector overlap.

    Parameters
    ----------
    omega1_grid, omega2_grid : array_like
        Increasing, nonnegative, starting at 0.
    d : DriveParams
    n_modes : int
    operator : {"full", "dprime"}

    Returns
    -------
    QuasienergySurface
        Values and axes in units of ``|delta|``.

    Warns
    -----
    AmbiguousContinuation
        When some node's labelling was not clear-cut; those nodes are flagged.
    """
    g1 = np.asarray(omega1_grid, dtype=float)
    g2 = np.asarray(omega2_grid, dtype=float)
    if g1.size < 1 or g2.size < 1:
        raise ValueError("grid axes must not be empty")
    if g1[0] != 0 or g2[0] != 0:
        raise ValueError("grid must start at the origin")
    if np.any(np.diff(g1) <= 0) or np.any(np.diff(g2) <= 0):
        raise ValueError("grid axes must be strictly increasing")
    labels = basis_labels(n_modes, operator)
    dim = len(labels)
    band = [i for i, lab in enumerate(labels) if abs(lab.fourier) <= n_modes - 2]
    values = np.empty((g2.size, g1.size, dim))
    flagged = np.zeros((g2.size, g1.size), dtype=bool)
    # sheet vectors (columns ordered by label index) of the current row
    row_vecs = [None] * g1.size
    below = [None] * g1.size
    for i2, o2 in enumerate(g2):
        for i1, o1 in enumerate(g1):
            w, v = dressed_states(o1, o2, d, n_modes, operator)
            if i1 == 0 and i2 == 0:
                # bare basis vectors: column s of the identity is label s
                perm = np.argmax(np.abs(v), axis=0)
                inv = np.empty(dim, dtype=int)
                inv[perm] = np.arange(dim)
                ordered = v[:, inv]
                values[0, 0] = w[inv]
            else:
                ref = row_vecs[i1 - 1] if i1 > 0 else below[0]
                perm, amb = _match(ref, v, band)
                ordered = v[:, perm]
                values[i2, i1] = w[perm]
                flagged[i2, i1] = amb
            row_vecs[i1] = ordered
        below = list(row_vecs)
    if warn and flagged.any():
        warnings.warn(f"{int(flagged.sum())} grid node(s) had ambiguous sheet continuation",
                      AmbiguousContinuation, stacklevel=2)
    s = d.scale
    return QuasienergySurface(g1 / s, g2 / s, labels, values / s, n_modes, flagged)


def pulse_path(pulse, n_points=2001, window=4.5, return_times=False):
    """Envelope path ``(omega1, omega2)`` of a pulse pair, sampled evenly in arc length.

    The window is ``+-(|tau| + window * width)``; both ends are numerically at
    the origin. With ``return_times`` the sample times are returned as well.
    """
    half = abs(pulse.tau) + window * pulse.width
    t = np.linspace(-half, half, max(20 * n_points, 20001))
    o1, o2 = pulse_envelopes(t, pulse)
    seg = np.hypot(np.diff(o1), np.diff(o2))
    arc = np.concatenate(([0.0], np.cumsum(seg)))
    if arc[-1] == 0:
        ts = np.array([-half, half])
    else:
        ts = np.interp(np.linspace(0.0, arc[-1], n_points), arc, t)
    o1, o2 = pulse_envelopes(ts, pulse)
    path = np.column_stack([np.atleast_1d(o1), np.atleast_1d(o2)])
    return (path, ts) if return_times else path


def _snap(point, zero_tol):
    o1, o2 = float(point[0]), float(point[1])
    return (0.0 if abs(o1) <= zero_tol else o1, 0.0 if abs(o2) <= zero_tol else o2)


def track_adiabatic_path(path, d, start=FloquetLabel(1, 0, 0), n_modes=12, zero_tol=None,
                         times=None, max_depth=40, operator="full"):
    """Follow a dressed state along an envelope path and return its final label.

    Consecutive points are linked by maximal eigenvector overlap; a step whose
    best overlap is below the acceptance threshold is bisected until it is
    resolved. Amplitudes at or below ``zero_tol`` are set to zero; on such axis
    segments each eigenvector carries a definite photon number, so exact
    crossings are passed diabatically.

    If ``times`` is given, the path is a time-parametrized pulse path and
    narrow avoided crossings are judged by the local adiabaticity ratio
    ``|d theta/dt| / gap`` (eigenvector rotation rate over the gap to the
    competing sheet). Above ``pi / (4 ln 2)``, the value at which a
    Landau-Zener crossing is passed diabatically with probability one half,
    the pre-crossing state is kept frozen until an eigenvector matches it
    again.

    Parameters
    ----------
    path : array_like, shape (N, 2)
        ``(omega1, omega2)`` points; first and last must snap to the origin.
    d : DriveParams
    start : FloquetLabel
    n_modes : int
    zero_tol : float, optional
        Defaults to ``1e-3 * |delta|``.
    times : array_like, optional
        Time of each path point, increasing.
    max_depth : int
        Bisection depth limit per step.
    operator : {"full", "dprime"}

    Raises
    ------
    LostBranch
        If a step cannot be resolved within ``max_depth`` bisections.
    """
    if zero_tol is None:
        zero_tol = 1e-3 * d.scale
    pts = np.asarray(path, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("path must be an (N, 2) array with N >= 2")
    if times is None:
        tv = np.arange(len(pts), dtype=float)
        threshold = OVERLAP_MIN
    else:
        tv = np.asarray(times, dtype=float)
        if tv.shape != (len(pts),) or np.any(np.diff(tv) <= 0):
            raise ValueError("times must be increasing and match the path length")
        threshold = TIMED_OVERLAP_MIN
    if _snap(pts[0], zero_tol) != (0.0, 0.0) or _snap(pts[-1], zero_tol) != (0.0, 0.0):
        raise ValueError("path must start and end at the origin")
    labels = basis_labels(n_modes, operator)
    if start not in labels:
        raise ValueError(f"{start} is outside the truncated basis")
    v = np.zeros(len(labels))
    v[labels.index(start)] = 1.0
    frozen = None
    floor = 1e-13 * max(d.scale, float(np.max(np.abs(pts))))

    for i in range(len(pts) - 1):
        stack = [(pts[i], pts[i + 1], tv[i], tv[i + 1], 0)]
        while stack:
            a, b, ta, tb, depth = stack.pop()
            pb = _snap(b, zero_tol)
            w, vecs = dressed_states(pb[0], pb[1], d, n_modes, operator)
            ov = np.abs(vecs.T @ v)
            j = int(np.argmax(ov))
            if ov[j] < threshold:
                if depth < max_depth and np.hypot(*(b - a)) > floor:
                    mid, tm = 0.5 * (a + b), 0.5 * (ta + tb)
                    stack.append((mid, b, tm, tb, depth + 1))
                    stack.append((a, mid, ta, tm, depth + 1))
                    continue
                if ov[j] < OVERLAP_MIN:
                    raise LostBranch(f"overlap {ov[j]:.3f} near {tuple(pb)} after {depth} bisections")
            ratio = 0.0
            if times is not None:
                rest = ov.copy()
                rest[j] = 0.0
                k = int(np.argmax(rest))
                gap = abs(w[j] - w[k])
                theta = float(np.arccos(min(ov[j], 1.0)))
                if rest[k] > 1e-8 and theta > 0:
                    ratio = theta / ((tb - ta) * gap) if gap > 0 else np.inf
                if frozen is None and ratio > LZ_RATIO:
                    frozen = v
            v = vecs[:, j]
            if frozen is not None and ratio <= LZ_RATIO:
                of = np.abs(vecs.T @ frozen)
                m = int(np.argmax(of))
                if of[m] >= OVERLAP_MIN:
                    v = vecs[:, m]
                    frozen = None
    final = v if frozen is None else frozen
    return labels[int(np.argmax(np.abs(final)))]


def track_pulse(pulse, d, start=FloquetLabel(1, 0, 0), n_points=1001, n_modes=12,
                zero_tol=None, operator="full"):
    """Predicted final label for a pulse pair, with Landau-Zener judgement of narrow crossings."""
    path, ts = pulse_path(pulse, n_points, return_times=True)
    return track_adiabatic_path(path, d, start, n_modes, zero_tol, times=ts, operator=operator)


def _axis_operator_block(amp, axis, d, operator):
    n_modes = 3
    if axis == "omega2=0":
        m = _operator(amp, 0.0, d, n_modes, operator)
    else:
        m = _operator(0.0, amp, d, n_modes, operator)
    labels = basis_labels(n_modes, operator)
    q = _conserved(labels, axis)
    # block of conserved value 0 sits in the middle of the truncated range
    idx = np.flatnonzero(q == 0)
    return m[np.ix_(idx, idx)], [labels[i] for i in idx]


def _components(blk):
    # uncoupled pieces of a block (a decoupled level crosses the others exactly)
    pattern = (np.abs(blk) > 0).astype(int)
    _, comp = connected_components(pattern, directed=False)
    return [np.flatnonzero(comp == c) for c in np.unique(comp)]


def axis_block_eigenvalues(amp, axis, d, operator="full"):
    """Eigenvalues and member labels of the conserved-number-zero block on an axis.

    Every other block is a copy shifted by a multiple of ``delta``. Returns
    ``(values, vectors, members)`` with values ascending.
    """
    blk, members = _axis_operator_block(amp, axis, d, operator)
    w, v = eigensolve(blk)
    return w, v, members


def _axis_sheets(amp, axis, d, operator):
    """Block eigenvalues ordered by (coupled component, rank) and their labels."""
    blk, members = _axis_operator_block(amp, axis, d, operator)
    vals, labs = [], []
    for idx in _components(blk):
        w, v = eigensolve(blk[np.ix_(idx, idx)])
        vals.extend(w)
        labs.extend(members[idx[int(np.argmax(np.abs(v[:, r])))]] for r in range(len(w)))
    return np.array(vals), labs


def _canonical(la, lb):
    lo, hi = (la, lb) if (la.n, la.fourier) <= (lb.n, lb.fourier) else (lb, la)
    s = -lo.fourier
    return (lo.shifted(s), hi.shifted(s))


def find_axis_intersections(d, axis, scan_max, n_modes=12, n_scan=400, tol=CROSSING_TOL,
                            operator="full", max_shift=None):
    """Locate exact sheet crossings on an axis where one field is off.

    With one field off, the spectrum is a single small block repeated with
    period ``delta``, so every crossing is a root of
    ``lambda_r - lambda_r' - m*delta`` for two block eigenvalues ``r, r'`` and
    an integer shift ``m``. Roots are bracketed on a scan and refined.

    Parameters
    ----------
    d : DriveParams
    axis : {"omega1=0", "omega2=0"}
        Which field is off; the other amplitude is scanned over ``(0, scan_max]``.
    scan_max : float
    n_modes : int
        Bounds the Fourier shift between crossing sheets (``max_shift``
        defaults to ``min(n_modes, 4)``).
    n_scan : int
        Scan resolution before root refinement.
    tol : float
        Root tolerance in units of ``|delta|``.
    operator : {"full", "dprime"}
        Crossings of the full quasienergy operator or of the strong-field D'
        effective operator.

    Returns
    -------
    list of IntersectionRecord
        Sorted by position; sheets labelled with the lower-``n`` member in
        Fourier mode 0.
    """
    if scan_max <= 0:
        raise ValueError("scan_max must be positive")
    if axis not in ("omega1=0", "omega2=0"):
        raise ValueError("axis must be 'omega1=0' or 'omega2=0'")
    max_shift = min(n_modes, 4) if max_shift is None else max_shift
    s = d.scale
    grid = np.linspace(0.0, scan_max, n_scan + 1)[1:]
    probe = min(1e-6 * s, grid[0] * 1e-3)
    _, ranks = _axis_sheets(probe, axis, d, operator)
    nr = len(ranks)

    def eig(x):
        return _axis_sheets(x, axis, d, operator)[0]

    lam = np.array([eig(x) for x in grid])
    records = {}
    for r in range(nr):
        for rr in range(r + 1, nr):
            for m in range(-max_shift, max_shift + 1):
                g = lam[:, r] - lam[:, rr] - m * d.delta

                def f(x, r=r, rr=rr, m=m):
                    w = eig(x)
                    return w[r] - w[rr] - m * d.delta

                for i in range(len(grid) - 1):
                    if g[i] == 0:
                        x0 = grid[i]
                    elif np.sign(g[i]) != np.sign(g[i + 1]):
                        x0 = brentq(f, grid[i], grid[i + 1], xtol=1e-2 * tol * s, rtol=1e-15)
                    else:
                        continue
                    pair = _canonical(ranks[r], ranks[rr].shifted(m))
                    key = (pair, round(x0 / s, 7))
                    if key not in records:
                        records[key] = IntersectionRecord(axis, float(x0), pair, abs(f(x0)))
    return sorted(records.values(), key=lambda rec: (rec.position, rec.sheets))
