"""Pure-Python twin of the compiled propagation kernels.

Same Dormand-Prince 5(4) tableau, error norm and step controller as
``_kernels.pyx``; used when the extension is unavailable or when
``BICHROMA_PURE_PYTHON=1``. Only the standard library is used in the step loop
because numpy's per-call overhead dominates for three- and four-component
states.
"""
import math

_SQRT2 = math.sqrt(2.0)

A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


def dopri5(f, y, t0, t1, rtol, atol, max_step, h, max_steps=200_000_000):
    """Integrate ``dy/dt = f(t, y)`` over lists of complex numbers.

    Returns ``(y, n_accept, n_reject, status)`` with status 0 on success,
    1 on step-size underflow and 2 when ``max_steps`` is exhausted.
    """
    n = len(y)
    y = list(y)
    t = t0
    k1 = f(t, y)
    h = min(h, max_step)
    n_acc = n_rej = steps = 0
    rng = range(n)
    while t < t1:
        if steps >= max_steps:
            return y, n_acc, n_rej, 2
        last = False
        if t + h >= t1:
            h = t1 - t
            last = True
        if h < 1e-13 * max(abs(t), 1.0):
            return y, n_acc, n_rej, 1
        k2 = f(t + h / 5.0, [y[i] + h * (A21 * k1[i]) for i in rng])
        k3 = f(t + 3.0 * h / 10.0, [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in rng])
        k4 = f(t + 4.0 * h / 5.0,
               [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in rng])
        k5 = f(t + 8.0 * h / 9.0,
               [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                for i in rng])
        k6 = f(t + h,
               [y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                            + A65 * k5[i]) for i in rng])
        ynew = [y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
                for i in rng]
        k7 = f(t + h, ynew)
        err = 0.0
        for i in rng:
            ei = abs(h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                          + E6 * k6[i] + E7 * k7[i]))
            sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            err += (ei / sc) ** 2
        err = math.sqrt(err / n)
        steps += 1
        if err <= 1.0:
            t = t1 if last else t + h
            y = ynew
            k1 = k7
            n_acc += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            n_rej += 1
            fac = max(0.2, 0.9 * err ** -0.2)
        h = min(h * fac, max_step)
    return y, n_acc, n_rej, 0


def _envelopes(omega0, width, tau):
    def env(t):
        u = (t + tau) / width
        v = (t - tau) / width
        return omega0 * math.exp(-u * u), omega0 * math.exp(-v * v)
    return env


def rwa_propagate(delta1, delta2, delta, omega0, width, tau, t0, t1, y0,
                  rtol, atol, max_step, h0, max_steps=200_000_000):
    env = _envelopes(omega0, width, tau)
    d3 = delta1 + delta2

    def f(t, y):
        o1, o2 = env(t)
        e = complex(math.cos(delta * t), math.sin(delta * t))
        ec = e.conjugate()
        h12 = 0.5 * (o1 + ec * o2)
        h23 = 0.5 * (o2 + e * o1)
        return [-1j * (h12 * y[1]),
                -1j * (h12.conjugate() * y[0] + delta1 * y[1] + h23 * y[2]),
                -1j * (h23.conjugate() * y[1] + d3 * y[2])]

    return dopri5(f, [complex(v) for v in y0], t0, t1, rtol, atol, max_step, h0, max_steps)


def lab_propagate(xi, beta_z, carrier1, carrier2, phi1, phi2, omega0, width, tau,
                  t0, t1, y0, rtol, atol, max_step, h0, max_steps=200_000_000):
    env = _envelopes(omega0, width, tau)
    e1, e3 = xi - beta_z, xi + beta_z

    def f(t, y):
        o1, o2 = env(t)
        c = (o1 * math.cos(carrier1 * t + phi1) + o2 * math.cos(carrier2 * t + phi2)) / _SQRT2
        return [-1j * (e1 * y[0] + c * y[1]),
                -1j * (c * y[0] - xi * y[1] + c * y[2]),
                -1j * (c * y[1] + e3 * y[2]),
                -1j * (-xi * y[3])]

    return dopri5(f, [complex(v) for v in y0], t0, t1, rtol, atol, max_step, h0, max_steps)
