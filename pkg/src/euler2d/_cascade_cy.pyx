# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cascade interpolation kernel (hot loop of the reversion stage).

Mirrors the algorithm of _cascade_py: three stages of periodic 8-point
Lagrange interpolation with 4 nodes on each side of the target.
"""

import numpy as np

from libc.math cimport fmod

cimport numpy as cnp

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559

cdef int STENCIL = 8
cdef int HALF = 4


cdef inline Py_ssize_t _bracket(double* nodes, Py_ssize_t n, double t) noexcept:
    """Index n0 in [1, n] with nodes[n0-1] <= t < nodes[n0] (nodes[n] = nodes[0]+2pi)."""
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if nodes[mid] <= t:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline void _stencil_interp(double* nodes, double* f0, double* f1,
                                 Py_ssize_t n, double t,
                                 double* out0, double* out1, bint two) noexcept:
    """Interpolate one (or two) periodic node-sampled fields at t."""
    cdef double tn[8]
    cdef double v0[8]
    cdef double v1[8]
    cdef Py_ssize_t n0 = _bracket(nodes, n, t)
    cdef Py_ssize_t k, l, idx, base
    cdef double lk, acc0, acc1, shift
    for k in range(STENCIL):
        idx = n0 - HALF + k
        base = idx
        shift = 0.0
        if base < 0:
            base += n
            shift = -TWO_PI
        elif base >= n:
            base -= n
            shift = TWO_PI
        tn[k] = nodes[base] + shift
        v0[k] = f0[base]
        if two:
            v1[k] = f1[base]
        if t == tn[k]:
            out0[0] = v0[k]
            if two:
                out1[0] = v1[k]
            return
    acc0 = 0.0
    acc1 = 0.0
    for k in range(STENCIL):
        lk = 1.0
        for l in range(STENCIL):
            if l != k:
                lk *= (t - tn[l]) / (tn[k] - tn[l])
        acc0 += lk * v0[k]
        if two:
            acc1 += lk * v1[k]
    out0[0] = acc0
    if two:
        out1[0] = acc1


def cascade(cnp.ndarray[cnp.float64_t, ndim=2] x,
            cnp.ndarray[cnp.float64_t, ndim=2] y,
            cnp.ndarray[cnp.float64_t, ndim=2] w):
    """Revert vorticity from the distorted grid to the uniform grid.

    Same contract as the pure-python kernel: raises ValueError when the
    hybrid abscissae are not strictly increasing along a horizontal line.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] xh = np.empty((n, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wh = np.empty((n, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, n))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] col = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] colw = np.empty(n)
    cdef Py_ssize_t i, j
    cdef double t, t0, dummy

    for i in range(n):
        for j in range(n):
            t0 = y[i, 0]
            t = fmod(TWO_PI * j / n - t0, TWO_PI)
            if t < 0.0:
                t += TWO_PI
            t += t0
            _stencil_interp(&y[i, 0], &x[i, 0], &w[i, 0], n, t,
                            &xh[i, j], &wh[i, j], True)

    for j in range(n):
        for i in range(n):
            col[i] = xh[i, j]
            colw[i] = wh[i, j]
            if i > 0 and col[i] <= col[i - 1]:
                raise ValueError(
                    f"hybrid abscissae not strictly increasing on line {j}")
        if col[0] + TWO_PI <= col[n - 1]:
            raise ValueError(
                f"hybrid abscissae not strictly increasing on line {j}")
        for i in range(n):
            t0 = col[0]
            t = fmod(TWO_PI * i / n - t0, TWO_PI)
            if t < 0.0:
                t += TWO_PI
            t += t0
            _stencil_interp(&col[0], &colw[0], NULL, n, t,
                            &out[i, j], &dummy, False)

    return out
