# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled segment-variance kernel; mirrors _kernels_py.segment_variances."""
import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def segment_variances(profile, Py_ssize_t s, basis):
    """Detrended variance and raw sum of squares for all 2*N_s segments.

    Same contract as the pure-Python fallback: forward segments first,
    then backward segments (counted from the end) in b = 1..N_s order.
    Inputs may be read-only arrays.
    """
    cdef const double[:] y = np.ascontiguousarray(profile, dtype=np.float64)
    cdef const double[:, :] q = np.ascontiguousarray(basis, dtype=np.float64)
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t ns = n // s
    cdef Py_ssize_t ncols = q.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] variances = np.empty(2 * ns, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sumsq = np.empty(2 * ns, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] coeff = np.empty(ncols, dtype=np.float64)
    cdef double[:] c = coeff
    cdef double[:] var_out = variances
    cdef double[:] ss_out = sumsq
    cdef Py_ssize_t seg, b, start, i, j
    cdef double acc, resid, ssr, ss, fit

    if q.shape[0] != s:
        raise ValueError("basis row count must equal the segment length")

    cdef double c0, c1, yi

    for seg in range(2 * ns):
        if seg < ns:
            start = seg * s
        else:
            # backward segment b = seg - ns + 1 counted from the end
            b = seg - ns + 1
            start = n - b * s
        ssr = 0.0
        ss = 0.0
        if ncols == 2:
            # default linear detrend: keep the projections in registers
            c0 = 0.0
            c1 = 0.0
            for i in range(s):
                yi = y[start + i]
                c0 += q[i, 0] * yi
                c1 += q[i, 1] * yi
            for i in range(s):
                yi = y[start + i]
                resid = yi - (q[i, 0] * c0 + q[i, 1] * c1)
                ssr += resid * resid
                ss += yi * yi
        else:
            for j in range(ncols):
                acc = 0.0
                for i in range(s):
                    acc += q[i, j] * y[start + i]
                c[j] = acc
            for i in range(s):
                yi = y[start + i]
                fit = 0.0
                for j in range(ncols):
                    fit += q[i, j] * c[j]
                resid = yi - fit
                ssr += resid * resid
                ss += yi * yi
        var_out[seg] = ssr / s
        ss_out[seg] = ss
    return variances, sumsq
