# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel loops: dense kernel matrices and matrix-free evaluation."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log

cnp.import_array()


cdef inline double _profile(double r2, double c2, int half_lambda, double sign) noexcept nogil:
    cdef double q = r2 + c2
    cdef double p = 1.0
    cdef int i
    for i in range(half_lambda):
        p *= q
    return sign * p * 0.5 * log(q)


def kernel_matrix(a, b, double c, int half_lambda, double sign):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], dim = A.shape[1]
    if B.shape[1] != dim:
        raise ValueError("dimension mismatch")
    out = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] K = out
    cdef double c2 = c * c, r2, d
    cdef Py_ssize_t i, j, k
    with nogil:
        for i in range(na):
            for j in range(nb):
                r2 = 0.0
                for k in range(dim):
                    d = A[i, k] - B[j, k]
                    r2 += d * d
                K[i, j] = _profile(r2, c2, half_lambda, sign)
    return out


def kernel_matvec(points, centers, coeffs, double c, int half_lambda, double sign):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] C = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t npts = P.shape[0], nc = C.shape[0], dim = P.shape[1]
    if C.shape[1] != dim or w.shape[0] != nc:
        raise ValueError("dimension mismatch")
    out = np.empty(npts, dtype=np.float64)
    cdef double[::1] s = out
    cdef double c2 = c * c, r2, d, acc
    cdef Py_ssize_t i, j, k
    with nogil:
        for i in range(npts):
            acc = 0.0
            for j in range(nc):
                r2 = 0.0
                for k in range(dim):
                    d = P[i, k] - C[j, k]
                    r2 += d * d
                acc += w[j] * _profile(r2, c2, half_lambda, sign)
            s[i] = acc
    return out
