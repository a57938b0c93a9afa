# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: perturbed vector-field RHS and oval integrands.

Mirrors eightloop._kernels_py; see that module for the coefficient layout.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt

BACKEND = "cython"


cdef inline double _cubic(const double* c, double x, double y) nogil:
    return (c[0]
            + x * (c[1] + x * (c[2] + x * c[3]))
            + y * (c[4] + x * (c[5] + x * c[6]))
            + y * y * (c[7] + x * c[8] + y * c[9]))


def ham(double x, double y):
    cdef double x2 = x * x
    return 0.5 * y * y - 0.5 * x2 + 0.25 * x2 * x2


def cubic_eval(c, x, y):
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    return _cubic(&cv[0], x, y)


def vf_rhs(double x, double y, double[::1] a, double[::1] b, double eps):
    cdef double dx = y
    cdef double dy = x - x * x * x
    if eps != 0.0:
        dx += eps * _cubic(&a[0], x, y)
        dy += eps * _cubic(&b[0], x, y)
    return dx, dy


def vf_rhs_many(xs, ys, double[::1] a, double[::1] b, double eps):
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    dx = np.empty(n)
    dy = np.empty(n)
    cdef double[::1] dxv = dx
    cdef double[::1] dyv = dy
    cdef double x, y
    for i in range(n):
        x = xv[i]
        y = yv[i]
        dxv[i] = y + eps * _cubic(&a[0], x, y)
        dyv[i] = x - x * x * x + eps * _cubic(&b[0], x, y)
    return dx, dy


def moment_integrand(thetas, double x_lo, double x_hi, double o1, double o2,
                     int k):
    cdef double[::1] tv = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0], i
    cdef int j
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef double L = x_hi - x_lo
    cdef double s, c, sc, x, y, xk
    for i in range(n):
        s = sin(tv[i])
        c = cos(tv[i])
        sc = s * c
        x = x_lo + L * s * s
        y = L * sc * sqrt(0.5 * (x - o1) * (x - o2))
        xk = 1.0
        for j in range(k):
            xk *= x
        ov[i] = 2.0 * xk * y * 2.0 * L * sc
    return out
