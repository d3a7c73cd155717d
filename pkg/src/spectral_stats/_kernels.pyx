# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-pixel kernels backing the spectrum pipeline.

Semantics and accumulation order must match `_kernels_py` exactly; the
test suite asserts bit-identical output between the two backends.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def bin_sum(const double[:, ::1] values, const int[:, ::1] bin_index, Py_ssize_t nbins):
    """Sum `values` into `nbins` buckets keyed by `bin_index` (row-major order)."""
    cdef Py_ssize_t ny = values.shape[0]
    cdef Py_ssize_t nx = values.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(nbins, dtype=np.float64)
    cdef double[::1] acc = out
    cdef Py_ssize_t i, j
    cdef int b
    for i in range(ny):
        for j in range(nx):
            b = bin_index[i, j]
            if 0 <= b < nbins:
                acc[b] += values[i, j]
    return out


def convolve3x3_periodic(const double[:, ::1] image, const double[:, ::1] weights):
    """Circular 3x3 convolution: out[y,x] = sum_{dy,dx} w[dy,dx] * f[y-dy, x-dx]."""
    cdef Py_ssize_t n = image.shape[0]
    cdef Py_ssize_t m = image.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] acc = out
    cdef Py_ssize_t y, x, sy, sx
    cdef int dy, dx
    cdef double s, w
    for y in range(n):
        for x in range(m):
            s = 0.0
            for dy in range(-1, 2):
                # y - dy is in [-1, n]; one correction wraps it (cdivision
                # is on, so C's truncating % would mishandle negatives)
                sy = y - dy
                if sy < 0:
                    sy += n
                elif sy >= n:
                    sy -= n
                for dx in range(-1, 2):
                    sx = x - dx
                    if sx < 0:
                        sx += m
                    elif sx >= m:
                        sx -= m
                    w = weights[dy + 1, dx + 1]
                    s += w * image[sy, sx]
            acc[y, x] = s
    return out


def block_mean(const double[:, ::1] image, Py_ssize_t factor):
    """Non-overlapping factor x factor block means (stride == kernel)."""
    cdef Py_ssize_t ny = image.shape[0] // factor
    cdef Py_ssize_t nx = image.shape[1] // factor
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((ny, nx), dtype=np.float64)
    cdef double[:, ::1] acc = out
    cdef Py_ssize_t i, j, a, b
    cdef double s
    cdef double norm = <double>(factor * factor)
    for i in range(ny):
        for j in range(nx):
            s = 0.0
            for a in range(factor):
                for b in range(factor):
                    s += image[i * factor + a, j * factor + b]
            acc[i, j] = s / norm
    return out
