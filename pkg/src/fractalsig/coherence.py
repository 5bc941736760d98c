"""Continuous wavelet transform and smoothed wavelet coherence with phase.

The analyzing wavelet is the normalized n-th derivative of a complex
Gaussian, psi_n = C_n d^n/dt^n [exp(-it) exp(-t^2)]. Coherence is the
Cauchy-Schwarz-normalized magnitude of the smoothed cross-spectrum; without
smoothing the ratio is identically 1, so the smoothing operator (scale-
proportional boxcar in time plus a short boxcar across scales) is part of
the definition, not an option.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import gamma

import numpy as np
from scipy.signal import fftconvolve

from .core import validate_signal
from .errors import (BadWindow, DegenerateSmoothing, LengthMismatch, RangeError,
                     ScaleOutOfRange, UnsupportedOrder)

# |psi| at |t| = 8 is ~1e-28 of peak, far below float64 resolution
WAVELET_CUTOFF = 8.0


@lru_cache(maxsize=None)
def _gaussian_derivative_poly(n):
    """Coefficients of p_n in d^n/dt^n [e^{-it-t^2}] = p_n(t) e^{-it-t^2}."""
    coeffs = np.zeros(1, dtype=complex)
    coeffs[0] = 1.0
    for _ in range(n):
        nxt = np.zeros(len(coeffs) + 1, dtype=complex)
        nxt[:-2] += coeffs[1:] * np.arange(1, len(coeffs))  # derivative term
        nxt[:-1] += -1j * coeffs                            # * (-i)
        nxt[1:] += -2.0 * coeffs                            # * (-2t)
        coeffs = nxt
    return coeffs


@lru_cache(maxsize=None)
def _normalization(n):
    """C_n making the energy of p_n(t) e^{-it-t^2} exactly 1.

    Uses the even moments of e^{-2t^2}: integral t^{2m} e^{-2t^2} dt
    = Gamma(m + 1/2) / 2^{m + 1/2}.
    """
    c = _gaussian_derivative_poly(n)
    total = 0.0
    for j in range(len(c)):
        for k in range(len(c)):
            if (j + k) % 2:
                continue
            m = (j + k) // 2
            total += (c[j] * np.conj(c[k])).real * gamma(m + 0.5) / 2.0 ** (m + 0.5)
    return 1.0 / np.sqrt(total)


def _check_order(n):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or not 1 <= n <= 8:
        raise UnsupportedOrder(f"derivative order {n!r} outside [1, 8]")
    return int(n)


def complex_gaussian_wavelet(n, t):
    """Evaluate psi_n(t) = C_n d^n/dt^n [exp(-it) exp(-t^2)].

    Unit energy and (numerically) zero mean for every supported order.
    """
    n = _check_order(n)
    c = _gaussian_derivative_poly(n)
    t = np.asarray(t, dtype=np.float64)
    poly = np.zeros(t.shape, dtype=complex)
    for k in range(len(c) - 1, -1, -1):
        poly = poly * t + c[k]
    return _normalization(n) * poly * np.exp(-1j * t - t * t)


def center_frequency(n):
    """Peak angular frequency of |psi_n^|: (1 + sqrt(1 + 8n)) / 2."""
    n = _check_order(n)
    return (1.0 + np.sqrt(1.0 + 8.0 * n)) / 2.0


def default_scales(n_samples, voices_per_octave=12, smallest=2.0):
    """Logarithmic scale grid, 12 voices per octave, from 2 to N/4."""
    largest = n_samples / 4.0
    if largest < smallest:
        raise ScaleOutOfRange(
            f"signal of {n_samples} samples leaves no room for scales >= {smallest}")
    octaves = np.log2(largest / smallest)
    count = int(np.floor(octaves * voices_per_octave)) + 1
    return smallest * 2.0 ** (np.arange(count) / voices_per_octave)


def cone_of_influence(n_samples):
    """Per-position minimum untrusted scale: min(b, N-1-b) / sqrt(2).

    A coefficient at (a, b) is edge-affected when a exceeds this value
    (e-folding distance sqrt(2)*a of the Gaussian envelope).
    """
    b = np.arange(n_samples)
    return np.minimum(b, n_samples - 1 - b) / np.sqrt(2.0)


@dataclass
class CwtResult:
    """CWT coefficients, scale per row, position per column."""

    scales: np.ndarray
    coefficients: np.ndarray  # complex, shape (len(scales), N)
    coi: np.ndarray


def cwt(signal, scales=None, wavelet_order=2):
    """T(a,b) = a^{-1/2} sum_t x(t) conj(psi((t-b)/a)), zero-padded ends.

    Computed per scale by FFT convolution with the truncated wavelet; the
    truncation point is far below double precision so the result matches
    the direct sum to ~1e-15.
    """
    x = validate_signal(signal, min_length=4)
    n = _check_order(wavelet_order)
    N = len(x)
    if scales is None:
        scales = default_scales(N)
    scales = np.asarray(scales, dtype=np.float64)
    if scales.ndim != 1 or len(scales) < 1:
        raise ScaleOutOfRange("scale grid must be a non-empty 1-D array")
    if np.any(~np.isfinite(scales)) or np.any(scales < 1.0) or np.any(scales > N / 4.0):
        raise ScaleOutOfRange(
            f"scales must lie in [1, N/4] = [1, {N / 4.0}]")
    if np.any(np.diff(scales) <= 0):
        raise ScaleOutOfRange("scales must be strictly increasing")
    out = np.empty((len(scales), N), dtype=complex)
    for i, a in enumerate(scales):
        half = int(np.ceil(WAVELET_CUTOFF * a))
        support = np.arange(-half, half + 1)
        kernel = np.conj(complex_gaussian_wavelet(n, support / a)) / np.sqrt(a)
        # cross-correlation of x with the scaled wavelet
        out[i] = fftconvolve(x, kernel[::-1], mode="same")
    return CwtResult(scales=scales, coefficients=out, coi=cone_of_influence(N))


def smooth_spectrum(matrix, scales, time_window_factor=0.6, scale_window=3):
    """Boxcar-smooth a scale x position matrix.

    Along positions the window is round(time_window_factor * a) at scale a
    (at least 3, forced odd so it stays centered); across scales a
    scale_window-wide boxcar. Truncated edge windows renormalize by the
    samples actually present, so constants are preserved everywhere.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise BadWindow(f"matrix must be 2-D, got shape {matrix.shape}")
    scales = np.asarray(scales, dtype=np.float64)
    if len(scales) != matrix.shape[0]:
        raise BadWindow(
            f"{len(scales)} scales for {matrix.shape[0]} matrix rows")
    if not time_window_factor > 0:
        raise BadWindow(f"time window factor must be positive, got {time_window_factor}")
    if not (isinstance(scale_window, (int, np.integer)) and scale_window >= 1
            and scale_window % 2 == 1):
        raise BadWindow(f"scale window must be an odd integer >= 1, got {scale_window!r}")
    M, N = matrix.shape
    positions = np.arange(N)
    out = np.empty_like(matrix, dtype=complex if np.iscomplexobj(matrix) else float)
    for i, a in enumerate(scales):
        width = max(3, round(time_window_factor * a))
        if width % 2 == 0:
            width += 1
        half = width // 2
        summed = fftconvolve(matrix[i:i + 1], np.ones((1, width)), mode="same", axes=1)[0]
        counts = np.minimum(positions + half, N - 1) - np.maximum(positions - half, 0) + 1
        out[i] = summed / counts
    if scale_window == 1:
        return out
    half = scale_window // 2
    result = np.empty_like(out)
    for i in range(M):
        lo, hi = max(0, i - half), min(M, i + half + 1)
        result[i] = out[lo:hi].mean(axis=0)
    return result


@dataclass
class CoherenceMap:
    """Coherence magnitudes in [0,1] and phases in (-pi, pi] on a scale grid.

    invalid marks cells whose smoothed auto-spectra vanished; those hold NaN.
    """

    scales: np.ndarray
    coherence: np.ndarray
    phase: np.ndarray
    coi: np.ndarray
    time_window_factor: float
    scale_window: int
    invalid: np.ndarray

    def to_dict(self):
        return {
            "scales": self.scales,
            "coherence": self.coherence.reshape(-1),
            "phase": self.phase.reshape(-1),
            "coi": self.coi,
        }

    def long_rows(self):
        """(scale, position, coherence, phase) rows for plotting tools."""
        M, N = self.coherence.shape
        for i in range(M):
            for b in range(N):
                yield (self.scales[i], b, self.coherence[i, b], self.phase[i, b])


def wavelet_coherence(x, y, wavelet_order=2, scales=None,
                      time_window_factor=0.6, scale_window=3):
    """Smoothed-spectrum coherence of two equal-length signals, with phase.

    coherence = |S(Wx conj(Wy))|^2 / (S(|Wx|^2) S(|Wy|^2)); the phase is the
    argument of the smoothed cross-spectrum, the local lead/lag angle.
    Cells where an auto-spectrum vanishes are marked invalid (NaN); if more
    than half the map is invalid the inputs are effectively degenerate.
    """
    x = validate_signal(x, min_length=4, name="x")
    y = validate_signal(y, min_length=4, name="y")
    if len(x) != len(y):
        raise LengthMismatch(f"x has {len(x)} samples, y has {len(y)}")
    wx = cwt(x, scales=scales, wavelet_order=wavelet_order)
    wy = cwt(y, scales=wx.scales, wavelet_order=wavelet_order)
    cross = wx.coefficients * np.conj(wy.coefficients)
    auto_x = (wx.coefficients * np.conj(wx.coefficients)).real
    auto_y = (wy.coefficients * np.conj(wy.coefficients)).real
    s_cross = smooth_spectrum(cross, wx.scales, time_window_factor, scale_window)
    s_xx = smooth_spectrum(auto_x, wx.scales, time_window_factor, scale_window)
    s_yy = smooth_spectrum(auto_y, wx.scales, time_window_factor, scale_window)
    denom = s_xx * s_yy
    invalid = ~(denom > 0)
    coherence = np.full(denom.shape, np.nan)
    phase = np.full(denom.shape, np.nan)
    ok = ~invalid
    coherence[ok] = np.abs(s_cross[ok]) ** 2 / denom[ok]
    phase[ok] = np.angle(s_cross[ok])
    # angle() returns [-pi, pi]; fold the closed lower end onto +pi
    phase[ok & (phase == -np.pi)] = np.pi
    if invalid.mean() > 0.5:
        raise DegenerateSmoothing(
            f"{invalid.mean():.0%} of cells have vanishing auto-spectra")
    return CoherenceMap(scales=wx.scales, coherence=coherence, phase=phase,
                        coi=wx.coi, time_window_factor=time_window_factor,
                        scale_window=scale_window, invalid=invalid)
