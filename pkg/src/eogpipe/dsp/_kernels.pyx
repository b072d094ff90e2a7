# cython: language_level=3
"""Compiled direct-form-II second-order-section recursion."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def sos_process(const double[:, ::1] coeffs, double[:, ::1] state, const double[::1] x):
    """Run ``x`` through every section in order, updating ``state`` in place.

    ``coeffs`` rows are ``(b0, b1, b2, a1, a2)``; ``state`` rows ``(z1, z2)``.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t n_sec = coeffs.shape[0]
    cdef Py_ssize_t i, k
    cdef double s, w, z1, z2
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] y = out
    for i in range(n):
        s = x[i]
        for k in range(n_sec):
            z1 = state[k, 0]
            z2 = state[k, 1]
            w = s - coeffs[k, 3] * z1 - coeffs[k, 4] * z2
            s = coeffs[k, 0] * w + coeffs[k, 1] * z1 + coeffs[k, 2] * z2
            state[k, 1] = z1
            state[k, 0] = w
        y[i] = s
    return out
