"""Time the compiled and pure-Python propagation kernels on the same problems.

Run with ``python3 benchmarks/bench_kernels.py``. Both kernels integrate the
rotating-frame ladder and the lab-frame model for one pulse pair and the
final amplitudes are compared.
"""
import argparse
import math
import time

import numpy as np

from bichroma import _pykernels
from bichroma.model import DriveParams, PulsePair, SpinParams
from bichroma.propagator import MAX_STEPS, PropagationConfig

try:
    from bichroma import _kernels
except ImportError:
    _kernels = None


def _rwa_args(omega0):
    pulse = PulsePair.from_area(omega0, 50.0, 1.7, 1)
    d = DriveParams(-0.05, -0.05, 1.0)
    c = PropagationConfig().resolve(pulse, d.delta)
    return (d.delta1, d.delta2, d.delta, pulse.omega0, pulse.width, pulse.tau,
            c.t_start, c.t_end, [1 + 0j, 0j, 0j], c.rel_tol, c.abs_tol, c.max_step,
            c.first_step, MAX_STEPS)


def _lab_args(omega0, beta_z):
    pulse = PulsePair.from_area(omega0, 50.0, 1.7, 1)
    d = DriveParams(-0.05, -0.05, 1.0)
    spin = SpinParams.for_drive(d, beta_z)
    w1, w2 = d.carriers(spin)
    c = PropagationConfig().resolve(pulse, d.delta)
    h = min(c.max_step, 0.05 * 2 * math.pi / max(w1, w2))
    return (spin.xi, spin.beta_z, w1, w2, 0.0, 0.0, math.sqrt(2.0) * pulse.omega0, pulse.width,
            pulse.tau, c.t_start, c.t_end, [1 + 0j, 0j, 0j, 0j], c.rel_tol, c.abs_tol, h, h,
            MAX_STEPS)


def _time(fn, args, repeat):
    best = math.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--omega0", type=float, default=0.35)
    p.add_argument("--beta-z", type=float, default=10.0)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    cases = [("rwa", "rwa_propagate", _rwa_args(args.omega0)),
             ("lab", "lab_propagate", _lab_args(args.omega0, args.beta_z))]
    print(f"{'problem':8s} {'kernel':8s} {'steps':>8s} {'seconds':>10s} {'speedup':>8s}")
    for name, fn, fargs in cases:
        tp, (yp, nap, _, _) = _time(getattr(_pykernels, fn), fargs, 1)
        print(f"{name:8s} {'python':8s} {nap:8d} {tp:10.4f} {'1.0':>8s}")
        if _kernels is None:
            print(f"{name:8s} {'cython':8s} {'n/a (extension not built)':>28s}")
            continue
        tc, (yc, nac, _, _) = _time(getattr(_kernels, fn), fargs, args.repeat)
        diff = float(np.max(np.abs(np.asarray(yp) - np.asarray(yc))))
        print(f"{name:8s} {'cython':8s} {nac:8d} {tc:10.4f} {tp / tc:8.1f}   max|dy| = {diff:.1e}")


if __name__ == "__main__":
    main()
