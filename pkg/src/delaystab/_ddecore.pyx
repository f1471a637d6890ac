# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 method-of-steps kernel; mirrors ``_ddecore_py`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, floor, pow

cnp.import_array()

cdef enum:
    MACKEY_GLASS = 0


cdef inline double _F(int model, double y, double n) nogil:
    if model == MACKEY_GLASS:
        return y / (1.0 + pow(y, n))
    return pow(y, n) * exp(-y)


cdef inline double _delayed(double[::1] x, double[::1] dx, double pos, double h,
                            double x0) nogil:
    cdef Py_ssize_t j
    cdef double s, s2, s3
    if pos <= 0.0:
        return x0
    j = <Py_ssize_t>floor(pos)
    s = pos - j
    if s == 0.0:
        return x[j]
    s2 = s * s
    s3 = s2 * s
    return ((2.0 * s3 - 3.0 * s2 + 1.0) * x[j] + (s3 - 2.0 * s2 + s) * h * dx[j]
            + (-2.0 * s3 + 3.0 * s2) * x[j + 1] + (s3 - s2) * h * dx[j + 1])


def integrate_kernel(int model, double beta, double gamma, double n, double eta,
                     double tau, double x0, double h, Py_ssize_t nsteps):
    cdef cnp.ndarray[double, ndim=1] xa = np.empty(nsteps + 1)
    cdef cnp.ndarray[double, ndim=1] da = np.empty(nsteps + 1)
    cdef double[::1] x = xa
    cdef double[::1] dx = da
    cdef double tau_h = tau / h
    cdef double xi, y0, y5, y1, k1, k2, k3, k4, fy1, xn
    cdef Py_ssize_t i
    cdef Py_ssize_t failed = -1
    x[0] = x0
    dx[0] = eta * (beta * _F(model, x0, n) - gamma * x0)
    with nogil:
        for i in range(nsteps):
            xi = x[i]
            y0 = _delayed(x, dx, i - tau_h, h, x0)
            y5 = _delayed(x, dx, i + 0.5 - tau_h, h, x0)
            y1 = _delayed(x, dx, i + 1.0 - tau_h, h, x0)
            k1 = eta * (beta * _F(model, y0, n) - gamma * xi)
            k2 = eta * (beta * _F(model, y5, n) - gamma * (xi + 0.5 * h * k1))
            k3 = eta * (beta * _F(model, y5, n) - gamma * (xi + 0.5 * h * k2))
            fy1 = beta * _F(model, y1, n)
            k4 = eta * (fy1 - gamma * (xi + h * k3))
            xn = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            x[i + 1] = xn
            dx[i + 1] = eta * (fy1 - gamma * xn)
            if not xn > 0.0:
                failed = i + 1
                break
    return xa, da, failed
