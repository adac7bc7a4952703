# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the fallback kernels (same contracts, same results)."""

import numpy as np

cimport cython
from libc.math cimport fabs, hypot, copysign

ctypedef fused gridval:
    double
    double complex


def propagate_grid(double[::1] a, double[::1] b, gridval[::1] zs,
                   double u0, double u1, bint forward=True):
    """Three-term recurrence over a window, batched over spectral parameters."""
    cdef Py_ssize_t nz = zs.shape[0]
    cdef Py_ssize_t ns = b.shape[0]
    cdef Py_ssize_t iz, i
    if gridval is double:
        out_arr = np.empty((nz, ns), dtype=np.float64)
    else:
        out_arr = np.empty((nz, ns), dtype=np.complex128)
    cdef gridval[:, ::1] out = out_arr
    if forward:
        for iz in range(nz):
            out[iz, 0] = u0
            out[iz, 1] = u1
            for i in range(1, ns - 1):
                out[iz, i + 1] = ((zs[iz] - b[i]) * out[iz, i]
                                  - a[i - 1] * out[iz, i - 1]) / a[i]
    else:
        for iz in range(nz):
            out[iz, ns - 1] = u0
            out[iz, ns - 2] = u1
            for i in range(ns - 2, 0, -1):
                out[iz, i - 1] = ((zs[iz] - b[i]) * out[iz, i]
                                  - a[i] * out[iz, i + 1]) / a[i - 1]
    return out_arr


def tridiag_eigen(d_in, e_in, bint want_vectors=False, int max_sweeps=50):
    """Implicit-shift QL; returns (w ascending, V or None, fail_index)."""
    d_arr = np.array(d_in, dtype=np.float64)
    cdef Py_ssize_t n = d_arr.shape[0]
    e_arr = np.zeros(n, dtype=np.float64)
    if n > 1:
        e_arr[: n - 1] = np.asarray(e_in, dtype=np.float64)
    v_arr = np.eye(n) if want_vectors else None

    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double[:, ::1] v
    if want_vectors:
        v = v_arr

    cdef double eps = np.finfo(np.float64).eps
    cdef Py_ssize_t l, m, i, k
    cdef int sweeps
    cdef double dd, g, r, s, c, p, f, bb, tmp
    cdef bint broke

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                order = np.argsort(d_arr, kind="stable")
                return d_arr[order], (v_arr[:, order] if want_vectors else None), l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            broke = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                bb = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    broke = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                if want_vectors:
                    for k in range(n):
                        tmp = v[k, i + 1]
                        v[k, i + 1] = s * v[k, i] + c * tmp
                        v[k, i] = c * v[k, i] - s * tmp
            if not broke:
                d[l] -= p
                e[l] = g
                e[m] = 0.0

    order = np.argsort(d_arr, kind="stable")
    d_sorted = d_arr[order]
    if want_vectors:
        return d_sorted, v_arr[:, order], -1
    return d_sorted, None, -1
