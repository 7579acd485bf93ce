# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernels for the two pulse-driven ladders.

Both kernels integrate i dy/dt = H(t) y with H built inline from a pair of
Gaussian envelopes, so no Python call happens inside the step loop. The
pure-Python twin lives in ``_pykernels``; both follow the same step-size
controller and must agree to integration tolerance.
"""
from libc.math cimport exp, cos, sin, sqrt, fabs, fmax, fmin, pow

cdef int NMAX = 4

cdef struct Params:
    int dim
    # envelopes
    double omega0
    double width
    double tau
    # rwa model
    double delta1
    double delta2
    double delta
    # lab model
    double xi
    double beta_z
    double carrier1
    double carrier2
    double phi1
    double phi2

ctypedef void (*rhs_fn)(double t, const double complex* y, double complex* dy,
                        const Params* p) noexcept nogil


cdef inline void envelopes(double t, const Params* p, double* o1, double* o2) noexcept nogil:
    cdef double u = (t + p.tau) / p.width
    cdef double v = (t - p.tau) / p.width
    o1[0] = p.omega0 * exp(-u * u)
    o2[0] = p.omega0 * exp(-v * v)


cdef void rhs_rwa(double t, const double complex* y, double complex* dy,
                  const Params* p) noexcept nogil:
    cdef double o1, o2
    envelopes(t, p, &o1, &o2)
    cdef double complex e = cos(p.delta * t) + 1j * sin(p.delta * t)
    cdef double complex ec = e.conjugate()
    cdef double complex h12 = 0.5 * (o1 + ec * o2)
    cdef double complex h23 = 0.5 * (o2 + e * o1)
    dy[0] = -1j * (h12 * y[1])
    dy[1] = -1j * (h12.conjugate() * y[0] + p.delta1 * y[1] + h23 * y[2])
    dy[2] = -1j * (h23.conjugate() * y[1] + (p.delta1 + p.delta2) * y[2])


cdef void rhs_lab(double t, const double complex* y, double complex* dy,
                  const Params* p) noexcept nogil:
    cdef double o1, o2
    envelopes(t, p, &o1, &o2)
    cdef double bx = o1 * cos(p.carrier1 * t + p.phi1) + o2 * cos(p.carrier2 * t + p.phi2)
    cdef double c = bx / sqrt(2.0)
    dy[0] = -1j * ((p.xi - p.beta_z) * y[0] + c * y[1])
    dy[1] = -1j * (c * y[0] - p.xi * y[1] + c * y[2])
    dy[2] = -1j * (c * y[1] + (p.xi + p.beta_z) * y[2])
    dy[3] = -1j * (-p.xi * y[3])


cdef int dopri5(rhs_fn f, const Params* p, double complex* y, double t0, double t1,
                double rtol, double atol, double max_step, double h,
                long max_steps, long* n_accept, long* n_reject) noexcept nogil:
    """Return 0 on success, 1 on step-size underflow, 2 on step budget exhaustion."""
    cdef int n = p.dim
    cdef int i
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]
    cdef double complex k5[4]
    cdef double complex k6[4]
    cdef double complex k7[4]
    cdef double complex ytmp[4]
    cdef double complex ynew[4]
    cdef double t = t0
    cdef double err, sc, ei, fac, hmin
    cdef long steps = 0
    cdef bint last

    f(t, y, k1, p)
    h = fmin(h, max_step)
    while t < t1:
        if steps >= max_steps:
            return 2
        last = False
        if t + h >= t1:
            h = t1 - t
            last = True
        hmin = 1e-13 * fmax(fabs(t), 1.0)
        if h < hmin:
            return 1
        for i in range(n):
            ytmp[i] = y[i] + h * (k1[i] / 5.0)
        f(t + h / 5.0, ytmp, k2, p)
        for i in range(n):
            ytmp[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i])
        f(t + 3.0 * h / 10.0, ytmp, k3, p)
        for i in range(n):
            ytmp[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i])
        f(t + 4.0 * h / 5.0, ytmp, k4, p)
        for i in range(n):
            ytmp[i] = y[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i]
                                  + 64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i])
        f(t + 8.0 * h / 9.0, ytmp, k5, p)
        for i in range(n):
            ytmp[i] = y[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i]
                                  + 46732.0 / 5247.0 * k3[i] + 49.0 / 176.0 * k4[i]
                                  - 5103.0 / 18656.0 * k5[i])
        f(t + h, ytmp, k6, p)
        for i in range(n):
            ynew[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i]
                                  + 125.0 / 192.0 * k4[i] - 2187.0 / 6784.0 * k5[i]
                                  + 11.0 / 84.0 * k6[i])
        f(t + h, ynew, k7, p)
        err = 0.0
        for i in range(n):
            ei = abs(h * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i]
                          + 71.0 / 1920.0 * k4[i] - 17253.0 / 339200.0 * k5[i]
                          + 22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]))
            sc = atol + rtol * fmax(abs(y[i]), abs(ynew[i]))
            err += (ei / sc) * (ei / sc)
        err = sqrt(err / n)
        steps += 1
        if err <= 1.0:
            t = t1 if last else t + h
            for i in range(n):
                y[i] = ynew[i]
                k1[i] = k7[i]
            n_accept[0] += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = fmin(5.0, fmax(0.2, 0.9 * pow(err, -0.2)))
        else:
            n_reject[0] += 1
            fac = fmax(0.2, 0.9 * pow(err, -0.2))
        h = fmin(h * fac, max_step)
    return 0


def rwa_propagate(double delta1, double delta2, double delta,
                  double omega0, double width, double tau,
                  double t0, double t1, y0,
                  double rtol, double atol, double max_step, double h0,
                  long max_steps=200_000_000):
    """Propagate the three-state rotating-frame ladder; returns (y, n_acc, n_rej, status)."""
    cdef Params p
    p.dim = 3
    p.omega0 = omega0
    p.width = width
    p.tau = tau
    p.delta1 = delta1
    p.delta2 = delta2
    p.delta = delta
    cdef double complex y[4]
    cdef int i
    for i in range(3):
        y[i] = y0[i]
    y[3] = 0
    cdef long na = 0, nr = 0
    cdef int status
    with nogil:
        status = dopri5(rhs_rwa, &p, y, t0, t1, rtol, atol, max_step, h0, max_steps, &na, &nr)
    return [y[0], y[1], y[2]], na, nr, status


def lab_propagate(double xi, double beta_z, double carrier1, double carrier2,
                  double phi1, double phi2,
                  double omega0, double width, double tau,
                  double t0, double t1, y0,
                  double rtol, double atol, double max_step, double h0,
                  long max_steps=200_000_000):
    """Propagate the four-state lab-frame two-spin model; returns (y, n_acc, n_rej, status)."""
    cdef Params p
    p.dim = 4
    p.omega0 = omega0
    p.width = width
    p.tau = tau
    p.xi = xi
    p.beta_z = beta_z
    p.carrier1 = carrier1
    p.carrier2 = carrier2
    p.phi1 = phi1
    p.phi2 = phi2
    cdef double complex y[4]
    cdef int i
    for i in range(4):
        y[i] = y0[i]
    cdef long na = 0, nr = 0
    cdef int status
    with nogil:
        status = dopri5(rhs_lab, &p, y, t0, t1, rtol, atol, max_step, h0, max_steps, &na, &nr)
    return [y[0], y[1], y[2], y[3]], na, nr, status
