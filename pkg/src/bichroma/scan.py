"""Parameter sweeps, artifact writers and single-shot reports.

Everything written to disk is in units of ``delta`` (energies and
frequencies) and ``1/delta`` (times). Grids go to CSV with a one-line
``#``-prefixed JSON metadata header; single reports go to JSON.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import BichromaError, ValidationError
from .floquet import FloquetLabel, QuasienergySurface, compute_surface, track_pulse
from .model import DELAY_CONVENTIONS, DriveParams, PulsePair, SpinParams
from .propagator import PropagationConfig, simulate_full, simulate_transfer, verify_T_invariance
from .regimes import (BoundaryCurve, classification_margin, classify_regime, classify_weak_field,
                      overlay_curves, weak_field_limit_boundaries)

__all__ = [
    "ScanConfig",
    "TransferMap",
    "MODES",
    "RESTRICTIONS",
    "PRESETS",
    "drive_for",
    "pulse_for",
    "run_transfer_map",
    "run_surface_dump",
    "run_boundary_overlays",
    "run_simulation",
    "run_classification",
    "write_map_csv",
    "read_map_csv",
    "write_surface_csv",
    "read_surface_csv",
    "write_boundaries_csv",
    "read_boundaries_csv",
    "write_json",
    "read_json",
]

MODES = ("map", "surface", "simulate", "boundaries", "classify")
RESTRICTIONS = ("delta1_eq_delta2", "delta2_eq_delta1_plus_2delta", "independent")
MAP_HEADER = ("omega0_over_delta", "delta_over_delta", "p1", "p2", "p3", "norm_drift")
SURFACE_HEADER = ("omega1", "omega2", "label_n", "label_k1", "label_k2", "quasienergy")
BOUNDARY_HEADER = ("curve_id", "abscissa", "ordinate")

PRESETS = {
    "weak_field": {},
    "strong_field": {"omega0_max": 5.0, "omega0_count": 41,
                     "delta_min": -2.0, "delta_max": -1.0, "delta_count": 21},
    "wide_strong_field": {"omega0_max": 8.0, "omega0_count": 41,
                          "delta_min": -2.2, "delta_max": 1.1, "delta_count": 41},
}


@dataclass(frozen=True)
class ScanConfig:
    """Run configuration shared by every CLI mode; all quantities in units of ``delta``.

    The amplitude axis of a map is half-open, ``(omega0_min, omega0_max]``,
    with ``omega0_count`` nodes at ``omega0_min + (omega0_max - omega0_min)(i+1)/count``;
    the detuning axis is closed with ``delta_count`` evenly spaced nodes.

    Attributes
    ----------
    mode : {"map", "surface", "simulate", "boundaries", "classify"}
    sequence : {1, 2}
        1 fires the omega1 pulse first.
    omega0_min, omega0_max, omega0_count : float, float, int
    delta_min, delta_max, delta_count : float, float, int
    pulse_area : float
        ``omega0 * T``.
    tau_over_T : float
        Delay in pulse widths, given positive; the sign follows ``sequence``.
    delay_convention : {"peak_separation", "literal"}
        See ``PulsePair.from_area``.
    restriction : {"delta1_eq_delta2", "delta2_eq_delta1_plus_2delta", "independent"}
        How a map's detuning coordinate sets ``(delta1, delta2)``.
    delta1, delta2, omega0 : float or None
        Single-point parameters (simulate, surface, classify). ``delta2`` is
        also the fixed second detuning of an ``independent`` map; when ``None``
        it equals ``delta1``.
    surface_max, surface_count : float, int
        Square ``[0, surface_max]^2`` grid of a surface dump.
    n_modes : int
        Fourier truncation of the quasienergy operator.
    n_points : int
        Path samples for adiabatic tracking.
    beta_z : float or None
        When set, ``simulate`` also runs the lab-frame four-state model.
    rel_tol, abs_tol : float
        Integrator tolerances.
    output : str or None
    workers : int
    """

    mode: str = "map"
    sequence: int = 1
    omega0_min: float = 0.0
    omega0_max: float = 2.2
    omega0_count: int = 61
    delta_min: float = -2.2
    delta_max: float = 1.1
    delta_count: int = 61
    pulse_area: float = 50.0
    tau_over_T: float = 1.7
    delay_convention: str = "peak_separation"
    restriction: str = "delta1_eq_delta2"
    delta1: float | None = None
    delta2: float | None = None
    omega0: float | None = None
    surface_max: float = 1.2
    surface_count: int = 25
    n_modes: int = 12
    n_points: int = 1001
    beta_z: float | None = None
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        def fail(msg):
            raise ValidationError(msg)

        if self.mode not in MODES:
            fail(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sequence not in (1, 2):
            fail("sequence must be 1 or 2")
        if self.restriction not in RESTRICTIONS:
            fail(f"restriction must be one of {RESTRICTIONS}")
        if self.delay_convention not in DELAY_CONVENTIONS:
            fail(f"delay_convention must be one of {DELAY_CONVENTIONS}")
        for name in ("omega0_min", "omega0_max", "delta_min", "delta_max", "pulse_area",
                     "tau_over_T", "surface_max", "rel_tol", "abs_tol"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                fail(f"{name} must be a finite number")
        for name in ("delta1", "delta2", "omega0", "beta_z"):
            v = getattr(self, name)
            if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float))
                                  or not math.isfinite(v)):
                fail(f"{name} must be a finite number or null")
        for name in ("omega0_count", "delta_count", "surface_count"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 2:
                fail(f"{name} must be an integer >= 2")
        for name, lo in (("n_modes", 1), ("n_points", 2), ("workers", 1)):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < lo:
                fail(f"{name} must be an integer >= {lo}")
        if self.pulse_area <= 0:
            fail("pulse_area must be positive")
        if self.tau_over_T < 0:
            fail("tau_over_T is a magnitude; the sign follows sequence")
        if self.omega0_min < 0 or not self.omega0_max > self.omega0_min:
            fail("need 0 <= omega0_min < omega0_max")
        if not self.delta_max > self.delta_min:
            fail("need delta_min < delta_max")
        if not self.surface_max > 0:
            fail("surface_max must be positive")
        if self.omega0 is not None and self.omega0 < 0:
            fail("omega0 must be nonnegative")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            fail("tolerances must be positive")
        if self.beta_z is not None and self.beta_z <= 0:
            fail("beta_z must be positive")
        if self.mode in ("simulate", "classify", "surface") and self.delta1 is None:
            fail(f"mode {self.mode!r} needs delta1")
        if self.mode == "simulate" and self.omega0 is None:
            fail("mode 'simulate' needs omega0")
        if self.mode == "boundaries" and self.restriction != "delta1_eq_delta2":
            fail("boundary overlays are defined for restriction delta1_eq_delta2")

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        """Build from a mapping whose keys are field names; unknown keys are rejected."""
        if not isinstance(data, dict):
            raise ValidationError("configuration must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names - {"preset"})
        if unknown:
            raise ValidationError(f"unknown configuration keys: {unknown}")
        merged = {}
        if "preset" in data:
            if data["preset"] not in PRESETS:
                raise ValidationError(f"preset must be one of {sorted(PRESETS)}")
            merged.update(PRESETS[data["preset"]])
        merged.update({k: v for k, v in data.items() if k != "preset"})
        return cls(**merged)

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
        except OSError as exc:
            raise ValidationError(f"{path}: {exc.strerror}") from exc
        return cls.from_dict(data)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def omega0_axis(self):
        i = np.arange(1, self.omega0_count + 1)
        return self.omega0_min + (self.omega0_max - self.omega0_min) * i / self.omega0_count

    @property
    def delta_axis(self):
        return np.linspace(self.delta_min, self.delta_max, self.delta_count)


def drive_for(cfg, delta_value):
    """Detunings of a map node under the configured restriction (``delta = 1``).

    ``delta2_eq_delta1_plus_2delta`` is the symmetry image of the diagonal
    restriction: node ``D`` maps to ``(D + 1, D - 1)`` with ``delta = -1``.
    """
    if cfg.restriction == "delta1_eq_delta2":
        return DriveParams(delta_value, delta_value, 1.0)
    if cfg.restriction == "delta2_eq_delta1_plus_2delta":
        return DriveParams(delta_value + 1.0, delta_value - 1.0, -1.0)
    d2 = delta_value if cfg.delta2 is None else cfg.delta2
    return DriveParams(delta_value, d2, 1.0)


def pulse_for(cfg, omega0):
    """Pulse pair of amplitude ``omega0`` with the configured area, delay and ordering.

    At zero amplitude the width is the one the area would give at unit
    amplitude; the fields are off, so only the window length depends on it.
    """
    if omega0 > 0:
        return PulsePair.from_area(omega0, cfg.pulse_area, cfg.tau_over_T, cfg.sequence,
                                   cfg.delay_convention)
    ref = PulsePair.from_area(1.0, cfg.pulse_area, cfg.tau_over_T, cfg.sequence,
                              cfg.delay_convention)
    return PulsePair(0.0, ref.width, ref.tau)


@dataclass
class TransferMap:
    """Final populations over an ``(omega0, Delta)`` grid.

    Attributes
    ----------
    omega0 : ndarray, shape (n_omega,)
    delta : ndarray, shape (n_delta,)
    populations : ndarray, shape (n_delta, n_omega, 3)
        NaN where the node's integration failed.
    norm_drift : ndarray, shape (n_delta, n_omega)
    metadata : dict
        Configuration echo and tool version.
    """

    omega0: np.ndarray
    delta: np.ndarray
    populations: np.ndarray
    norm_drift: np.ndarray
    metadata: dict = field(default_factory=dict)

    def p(self, n):
        """Population map of level ``n`` (1-based)."""
        return self.populations[:, :, n - 1]

    def node(self, omega0, delta):
        """Populations at the grid node nearest to ``(omega0, delta)``."""
        i = int(np.argmin(np.abs(self.delta - delta)))
        j = int(np.argmin(np.abs(self.omega0 - omega0)))
        return self.populations[i, j]

    def __eq__(self, other):
        if not isinstance(other, TransferMap):
            return NotImplemented
        return (np.array_equal(self.omega0, other.omega0)
                and np.array_equal(self.delta, other.delta)
                and np.array_equal(self.populations, other.populations, equal_nan=True)
                and np.array_equal(self.norm_drift, other.norm_drift, equal_nan=True)
                and self.metadata == other.metadata)


def _map_node(args):
    cfg, omega0, delta_value = args
    try:
        res = simulate_transfer(pulse_for(cfg, omega0), drive_for(cfg, delta_value),
                                PropagationConfig(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol))
        return (*res.populations, res.norm_drift)
    except (BichromaError, ValueError, ArithmeticError):
        return (math.nan,) * 4


def _fan_out(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _metadata(cfg, kind):
    return {"kind": kind, "version": __version__, "config": cfg.to_dict()}


def run_transfer_map(cfg):
    """Transfer-efficiency map over the configured grid.

    Each node derives ``T = pulse_area / omega0`` and the delay from the
    configuration and runs ``simulate_transfer`` from |1>. Nodes are
    independent and assembled in grid order, so the result does not depend
    on the worker count. A node whose integration fails holds NaN.
    """
    if cfg.mode != "map":
        raise ValidationError("run_transfer_map needs mode 'map'")
    om, de = cfg.omega0_axis, cfg.delta_axis
    items = [(cfg, float(o), float(d)) for d in de for o in om]
    out = np.array(_fan_out(_map_node, items, cfg.workers), dtype=float)
    out = out.reshape(de.size, om.size, 4)
    return TransferMap(om, de, out[:, :, :3].copy(), out[:, :, 3].copy(), _metadata(cfg, "map"))


def _surface_drive(cfg):
    d2 = cfg.delta1 if cfg.delta2 is None else cfg.delta2
    return DriveParams(cfg.delta1, d2, 1.0)


def run_surface_dump(cfg, d=None):
    """Labelled quasienergy sheets on ``[0, surface_max]^2``; writes CSV when ``cfg.output`` is set.

    Returns
    -------
    QuasienergySurface
    """
    if cfg.mode != "surface":
        raise ValidationError("run_surface_dump needs mode 'surface'")
    d = d or _surface_drive(cfg)
    grid = np.linspace(0.0, cfg.surface_max, cfg.surface_count) * d.scale
    surf = compute_surface(grid, grid, d, cfg.n_modes)
    if cfg.output:
        write_surface_csv(cfg.output, surf, _metadata(cfg, "surface"))
    return surf


def run_boundary_overlays(cfg):
    """Every boundary and resonance curve over the map window; writes CSV when ``cfg.output`` is set."""
    if cfg.mode != "boundaries":
        raise ValidationError("run_boundary_overlays needs mode 'boundaries'")
    curves = overlay_curves(cfg.omega0_max, (cfg.delta_min, cfg.delta_max),
                            max(cfg.omega0_count, cfg.delta_count, 200))
    if cfg.output:
        write_boundaries_csv(cfg.output, curves, _metadata(cfg, "boundaries"))
    return curves


def run_simulation(cfg):
    """Single-shot report: populations, symmetry check, predicted label and regime.

    Returns
    -------
    dict
        JSON-serializable report; written to ``cfg.output`` when set.
    """
    if cfg.mode != "simulate":
        raise ValidationError("run_simulation needs mode 'simulate'")
    d = _surface_drive(cfg)
    pulse = pulse_for(cfg, cfg.omega0)
    pcfg = PropagationConfig(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)
    rwa = simulate_transfer(pulse, d, pcfg)
    report = {
        "version": __version__,
        "input": {"delta1": d.delta1, "delta2": d.delta2, "omega0": cfg.omega0,
                  "sequence": cfg.sequence, "pulse_area": cfg.pulse_area,
                  "tau_over_T": cfg.tau_over_T, "delay_convention": cfg.delay_convention,
                  "width": pulse.width, "tau": pulse.tau},
        "rwa": {"populations": list(rwa.populations), "norm_drift": rwa.norm_drift,
                "steps": rwa.steps},
        "t_invariance_max_difference": verify_T_invariance(pulse, d, pcfg),
        "regime": classify_regime(d.delta1, d.delta2, d.delta, cfg.omega0).value,
        "classification_margin": classification_margin(d.delta1, d.delta2, d.delta),
    }
    try:
        label = track_pulse(pulse, d, n_points=cfg.n_points, n_modes=cfg.n_modes)
        report["predicted_label"] = str(label)
    except BichromaError as exc:
        report["predicted_label"] = None
        report["tracking_error"] = f"{type(exc).__name__}: {exc}"
    if cfg.beta_z is not None:
        spin = SpinParams.for_drive(d, cfg.beta_z)
        full = simulate_full(pulse, spin, d, pcfg, n_checkpoints=50)
        report["full"] = {
            "populations": list(full.populations),
            "norm_drift": full.norm_drift,
            "max_difference_to_rwa": float(max(abs(a - b) for a, b in
                                               zip(full.populations[:3], rwa.populations))),
            "singlet_max_population": float(np.max(full.history[:, 3])),
            "spin": {"xi": spin.xi, "beta_z": spin.beta_z},
        }
    if cfg.output:
        write_json(cfg.output, report)
    return report


def run_classification(cfg):
    """Regime of ``(delta1, delta2)`` with margin and weak-field topology information."""
    if cfg.mode != "classify":
        raise ValidationError("run_classification needs mode 'classify'")
    d = _surface_drive(cfg)
    allowed, curves = weak_field_limit_boundaries(d.delta1, d.delta2)
    report = {
        "delta1": d.delta1,
        "delta2": d.delta2,
        "weak_field_regime": classify_weak_field(d.delta1, d.delta2).value,
        "regime": classify_regime(d.delta1, d.delta2, 1.0, cfg.omega0).value,
        "omega0": cfg.omega0,
        "classification_margin": classification_margin(d.delta1, d.delta2),
        "weak_field_transfer_allowed": allowed,
        "weak_field_boundaries": curves,
    }
    if cfg.output:
        write_json(cfg.output, report)
    return report


# ---------------------------------------------------------------- file formats

def _fmt(x):
    return repr(float(x))


def _write_csv(path, header, rows, metadata):
    buf = io.StringIO()
    buf.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _read_csv(path, header):
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise ValueError(f"{path}: missing metadata line")
        metadata = json.loads(first[2:])
        reader = csv.reader(fh)
        if tuple(next(reader)) != header:
            raise ValueError(f"{path}: unexpected header")
        return metadata, [row for row in reader if row]


def write_map_csv(path, tmap):
    """Write a transfer map, one row per node with the detuning as outer loop."""
    rows = []
    for i, dv in enumerate(tmap.delta):
        for j, ov in enumerate(tmap.omega0):
            p = tmap.populations[i, j]
            rows.append([_fmt(ov), _fmt(dv), _fmt(p[0]), _fmt(p[1]), _fmt(p[2]),
                         _fmt(tmap.norm_drift[i, j])])
    meta = dict(tmap.metadata)
    meta["shape"] = [int(tmap.delta.size), int(tmap.omega0.size)]
    _write_csv(path, MAP_HEADER, rows, meta)


def read_map_csv(path):
    meta, rows = _read_csv(path, MAP_HEADER)
    nd, no = meta.pop("shape")
    a = np.array(rows, dtype=float).reshape(nd, no, 6)
    return TransferMap(a[0, :, 0].copy(), a[:, 0, 1].copy(), a[:, :, 2:5].copy(),
                       a[:, :, 5].copy(), meta)


def write_surface_csv(path, surf, metadata=None):
    """Write sheets as ``omega1,omega2,label_n,label_k1,label_k2,quasienergy`` rows (units of ``delta``)."""
    rows = []
    for i2, o2 in enumerate(surf.omega2):
        for i1, o1 in enumerate(surf.omega1):
            for s, lab in enumerate(surf.labels):
                rows.append([_fmt(o1), _fmt(o2), lab.n, lab.k1, lab.k2, _fmt(surf.values[i2, i1, s])])
    meta = dict(metadata or {})
    meta["n_modes"] = surf.n_modes
    flagged = surf.flagged if surf.flagged is not None else np.zeros(surf.values.shape[:2], bool)
    meta["flagged"] = [[int(a), int(b)] for a, b in np.argwhere(flagged)]
    _write_csv(path, SURFACE_HEADER, rows, meta)


def read_surface_csv(path):
    """Inverse of ``write_surface_csv``; returns ``(QuasienergySurface, metadata)``."""
    meta, rows = _read_csv(path, SURFACE_HEADER)
    o1 = list(dict.fromkeys(float(r[0]) for r in rows))
    o2 = list(dict.fromkeys(float(r[1]) for r in rows))
    labels = list(dict.fromkeys(FloquetLabel(int(r[2]), int(r[3]), int(r[4])) for r in rows))
    vals = np.array([float(r[5]) for r in rows]).reshape(len(o2), len(o1), len(labels))
    flagged = np.zeros((len(o2), len(o1)), dtype=bool)
    for a, b in meta.pop("flagged"):
        flagged[a, b] = True
    surf = QuasienergySurface(np.array(o1), np.array(o2), labels, vals, meta.pop("n_modes"), flagged)
    return surf, meta


def write_boundaries_csv(path, curves, metadata=None):
    """Write curves as ``curve_id,abscissa,ordinate`` rows; curve attributes go to the metadata line."""
    rows = [[c.id, _fmt(x), _fmt(y)] for c in curves for x, y in c.samples]
    meta = dict(metadata or {})
    meta["curves"] = [{"id": c.id, "domain": [_json_float(v) for v in c.domain],
                       "variable": c.variable, "style": c.style, "excluded": c.excluded,
                       "count": int(len(c.samples))} for c in curves]
    _write_csv(path, BOUNDARY_HEADER, rows, meta)


def read_boundaries_csv(path):
    """Inverse of ``write_boundaries_csv``; returns ``(list of BoundaryCurve, metadata)``."""
    meta, rows = _read_csv(path, BOUNDARY_HEADER)
    pos = 0
    curves = []
    for info in meta.pop("curves"):
        chunk = rows[pos:pos + info["count"]]
        pos += info["count"]
        if any(r[0] != info["id"] for r in chunk):
            raise ValueError(f"{path}: rows out of order for curve {info['id']}")
        samples = np.array([[float(r[1]), float(r[2])] for r in chunk]).reshape(-1, 2)
        curves.append(BoundaryCurve(info["id"], samples,
                                    tuple(float(v) for v in info["domain"]),
                                    info["variable"], info["style"], info["excluded"]))
    return curves, meta


def _json_float(v):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def write_json(path, report):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
