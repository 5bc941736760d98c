"""Pure-NumPy segment-variance kernel, the fallback when the compiled
extension is unavailable. Must compute exactly the same quantities as
fractalsig._kernels (the Cython version); tests compare the two.
"""
import numpy as np

BACKEND_NAME = "python"


def segment_variances(profile, s, basis):
    """Detrended variance and raw sum of squares for all 2*N_s segments.

    profile is the length-N profile array, s the segment length, basis an
    s x (m+1) orthonormal polynomial basis (columns from a QR of the
    Vandermonde matrix). Segments run forward b = 1..N_s from the start,
    then backward b = 1..N_s counted from the end, in that order.

    Returns (variances, sumsq): each shape (2*N_s,), variances[k] is the
    mean squared residual of the least-squares fit on segment k, sumsq[k]
    the segment's raw sum of squares (used for degeneracy thresholds).
    """
    y = np.asarray(profile, dtype=np.float64)
    n = len(y)
    ns = n // s
    forward = y[:ns * s].reshape(ns, s)
    # backward segment b covers y[n - b*s : n - (b-1)*s]
    backward = y[n - ns * s:].reshape(ns, s)[::-1]
    segments = np.concatenate([forward, backward], axis=0)
    coeffs = segments @ basis
    residual = segments - coeffs @ basis.T
    variances = np.einsum("ij,ij->i", residual, residual) / s
    sumsq = np.einsum("ij,ij->i", segments, segments)
    return variances, sumsq
