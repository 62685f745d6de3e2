# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels: the hot inner loops of the L^q quadrature path.

Twin of ``sobstab._kernels_py``; same functions, same contracts. Power
sums use Kahan compensation so accuracy does not degrade on the largest
grids.
"""

import numpy as np

from libc.math cimport fabs, pow

BACKEND = "compiled"


cdef inline double _abs_pow(double x, double q, long iq, bint integral) nogil:
    cdef double a = fabs(x)
    cdef double r = 1.0
    cdef long m
    if integral:
        m = iq
        # exponentiation by squaring; q is small (<= 64)
        while m > 0:
            if m & 1:
                r *= a
            a *= a
            m >>= 1
        return r
    return pow(a, q)


def circle_synth(double a0, double[::1] ac, double[::1] bs,
                 double[::1] costab, double[::1] sintab):
    cdef Py_ssize_t n = costab.shape[0]
    cdef Py_ssize_t nk = ac.shape[0]
    cdef Py_ssize_t j, k, idx
    cdef double a, b, acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for j in range(n):
        acc = a0
        for k in range(1, nk + 1):
            a = ac[k - 1]
            b = bs[k - 1]
            if a == 0.0 and b == 0.0:
                continue
            idx = (k * j) % n
            acc += a * costab[idx] + b * sintab[idx]
        o[j] = acc
    return out


def uniform_power_mean(double[::1] vals, double q):
    cdef Py_ssize_t n = vals.shape[0]
    cdef Py_ssize_t i
    cdef double s = 0.0, c = 0.0, y, t
    cdef long iq = <long> q
    cdef bint integral = (q == <double> iq)
    for i in range(n):
        y = _abs_pow(vals[i], q, iq, integral) - c
        t = s + y
        c = (t - s) - y
        s = t
    return s / n


def weighted_power_sum(double[::1] vals, double[::1] weights, double q):
    cdef Py_ssize_t n = vals.shape[0]
    cdef Py_ssize_t i
    cdef double s = 0.0, c = 0.0, y, t
    cdef long iq = <long> q
    cdef bint integral = (q == <double> iq)
    for i in range(n):
        y = weights[i] * _abs_pow(vals[i], q, iq, integral) - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def zonal_synth(double[::1] coeffs, double[:, ::1] table):
    cdef Py_ssize_t nl = table.shape[0]
    cdef Py_ssize_t n = table.shape[1]
    cdef Py_ssize_t i, l
    cdef double acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        acc = 0.0
        for l in range(nl):
            acc += coeffs[l] * table[l, i]
        o[i] = acc
    return out


def tensor_synth(double[:, ::1] pc, double[:, ::1] ps,
                 double[::1] costab, double[::1] sintab):
    cdef Py_ssize_t n = costab.shape[0]
    cdef Py_ssize_t nk = pc.shape[0]
    cdef Py_ssize_t nx = pc.shape[1]
    cdef Py_ssize_t i, j, k, idx
    cdef double cv, sv
    out = np.zeros((n, nx), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in range(n):
        for k in range(nk):
            idx = (k * i) % n
            cv = costab[idx]
            sv = sintab[idx] if k > 0 else 0.0
            for j in range(nx):
                o[i, j] += cv * pc[k, j] + sv * ps[k, j]
    return out


def tensor_power_sum(double[:, ::1] grid, double[::1] col_weights, double q):
    cdef Py_ssize_t ns = grid.shape[0]
    cdef Py_ssize_t nx = grid.shape[1]
    cdef Py_ssize_t i, j
    cdef double s = 0.0, c = 0.0, y, t
    cdef long iq = <long> q
    cdef bint integral = (q == <double> iq)
    for i in range(ns):
        for j in range(nx):
            y = col_weights[j] * _abs_pow(grid[i, j], q, iq, integral) - c
            t = s + y
            c = (t - s) - y
            s = t
    return s
