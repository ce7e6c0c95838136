# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels.

Semantics mirror ``_kernels_py`` exactly; see that module for the contract.
The integer kernel is exact (int64 accumulation), the weighted kernel performs
the same left-to-right scan as the fallback's cumulative-sum formulation.
"""

from libc.stdint cimport int64_t

import numpy as np


def eta_grid_sums(int64_t[::1] pos, int64_t[::1] ks):
    cdef Py_ssize_t m = ks.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t t
    cdef int64_t k, v, a, s
    for t in range(m):
        k = ks[t]
        s = 0
        a = 0
        for v in range(1, k + 1):
            if pos[v - 1] < k - 1:
                a += 1
                s += (2 * a - 1) * (k + 1 - v)
        ov[t] = s
    return out


def weighted_eta_grid_sums(double[::1] rx_sorted, int64_t[::1] ypos_sorted,
                           double[::1] w_sorted, int64_t[::1] taus,
                           int64_t[::1] ks):
    cdef Py_ssize_t m = ks.shape[0]
    cdef Py_ssize_t n = rx_sorted.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t t, j
    cdef int64_t tau
    cdef double kf, s, wacc, w, r
    for t in range(m):
        kf = <double> ks[t]
        tau = taus[t]
        s = 0.0
        wacc = 0.0
        j = 0
        while j < n and rx_sorted[j] < kf:
            if ypos_sorted[j] < tau:
                w = w_sorted[j]
                r = rx_sorted[j]
                s += (kf - r) * w * (2.0 * wacc + w)
                wacc += w
            j += 1
        ov[t] = s
    return out
