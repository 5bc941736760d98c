"""Multifractal detrended fluctuation analysis.

Pipeline: profile -> per-segment detrended variances F^2(b,s) over both
ends of the series (2 N_s segments) -> moment-averaged fluctuation function
F_q(s) -> log-log slopes h(q) -> scaling exponents tau(q) = q h(q) - 1 ->
Legendre singularity spectrum (alpha, f(alpha)) and its width -> Hurst
classification of h(2) against the 0.5 dead band.

The q-th order average uses exponent q/2 on the squared fluctuations, which
is what makes h(2) the classical Hurst exponent; q = 0 takes the
logarithmic average. Zero-variance segments (exactly detrended, e.g. from
locally linear profiles) are excluded with their count recorded, since any
negative moment would blow up on them.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from . import _backend
from .core import Profile, build_profile, validate_signal
from .errors import (DegenerateFit, InsufficientScales, NonUniformGrid, RangeError,
                     SignalTooShort, TooManyDegenerateSegments)

CLASSIFICATIONS = ("anti_correlated", "uncorrelated", "long_range_correlated")

# a segment counts as degenerate when its fit residue is below this many
# digits of its own magnitude (pure rounding residue, not structure)
_DEGENERATE_RTOL = 1e-12


def default_q_grid():
    """Moments -5..5 in steps of 0.25; contains both 0 and 2."""
    return np.linspace(-5.0, 5.0, 41)


def default_s_grid(n):
    """20 logarithmic scales in [16, N/4] (deduplicated after rounding)."""
    if n < 64:
        raise SignalTooShort(f"need at least 64 samples for the default scales, got {n}")
    raw = np.geomspace(16.0, n / 4.0, 20)
    return np.unique(np.round(raw).astype(np.int64))


def validate_q_grid(q):
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or len(q) < 1:
        raise RangeError("moment grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(q)):
        raise RangeError("moment grid contains non-finite values")
    if np.any(np.diff(q) <= 0):
        raise RangeError("moment grid must be strictly increasing")
    if np.max(np.abs(q)) > 10.0:
        raise RangeError("moments must satisfy |q| <= 10")
    if not np.any(np.abs(q - 2.0) < 1e-12):
        raise RangeError("moment grid must contain q = 2 (the Hurst moment)")
    return q


@lru_cache(maxsize=None)
def _detrend_basis(s, m):
    """Orthonormal polynomial basis (degree <= m) on s equispaced points.

    Columns come from a QR factorization of the Vandermonde matrix on
    t in [-1, 1], so projection is numerically stable for every m <= 3.
    """
    t = np.linspace(-1.0, 1.0, s)
    vander = np.vander(t, m + 1, increasing=True)
    basis, _ = np.linalg.qr(vander)
    basis.setflags(write=False)
    return basis


def _profile_values(profile):
    if isinstance(profile, Profile):
        return profile.values
    return validate_signal(profile, min_length=2, name="profile")


def detrended_variance(profile, s, b, m=1, direction="forward"):
    """F^2(b,s): mean squared residual of a degree-m fit on one segment.

    b is 1-based; forward counts segments from the start, backward from the
    end (the mirror pass that uses up the leftover tail).
    """
    y = _profile_values(profile)
    if m < 0:
        raise RangeError(f"detrend order must be >= 0, got {m}")
    if s <= m + 1:
        raise DegenerateFit(f"segment length {s} cannot fit a degree-{m} polynomial")
    n_segments = len(y) // s
    if not 1 <= b <= n_segments:
        raise RangeError(f"segment index {b} outside 1..{n_segments}")
    if direction == "forward":
        segment = y[(b - 1) * s: b * s]
    elif direction == "backward":
        segment = y[len(y) - b * s: len(y) - (b - 1) * s]
    else:
        raise RangeError(f"unknown direction {direction!r}")
    basis = _detrend_basis(int(s), int(m))
    residual = segment - basis @ (basis.T @ segment)
    return float(residual @ residual) / s


@dataclass
class FluctuationTable:
    """F_q(s) surface plus the per-cell excluded-segment counts."""

    q: np.ndarray
    s: np.ndarray
    F: np.ndarray           # shape (len(q), len(s))
    m: int
    excluded: np.ndarray    # same shape, integer counts

    def long_rows(self):
        """(q, s, F, excluded) rows for CSV export."""
        for i, qi in enumerate(self.q):
            for j, sj in enumerate(self.s):
                yield (qi, int(sj), self.F[i, j], int(self.excluded[i, j]))


def fluctuation_function(profile, q_grid=None, s_grid=None, m=1):
    """F_q(s) over the moment and scale grids.

    For q != 0, F_q(s) = {mean over kept segments of [F^2]^{q/2}}^{1/q};
    for q = 0 the logarithmic average exp{mean(ln F^2) / 2}. Raises when
    more than 10% of segments are degenerate at any scale.
    """
    y = _profile_values(profile)
    n = len(y)
    q = validate_q_grid(default_q_grid() if q_grid is None else q_grid)
    s = np.asarray(default_s_grid(n) if s_grid is None else s_grid)
    if s.ndim != 1 or len(s) < 1:
        raise RangeError("scale grid must be a non-empty 1-D array")
    if not np.issubdtype(s.dtype, np.integer):
        if np.any(s != np.round(s)):
            raise RangeError("scales must be integers")
        s = s.astype(np.int64)
    if np.any(np.diff(s) <= 0):
        raise RangeError("scale grid must be strictly increasing")
    if s[0] < m + 2:
        raise DegenerateFit(f"smallest scale {s[0]} cannot fit a degree-{m} polynomial")
    if 4 * s[-1] > n:
        raise SignalTooShort(
            f"largest scale {s[-1]} exceeds N/4 = {n / 4:g} for {n} samples")

    F = np.empty((len(q), len(s)), dtype=np.float64)
    excluded = np.zeros((len(q), len(s)), dtype=np.int64)
    nonzero = q != 0.0
    half_q = q[nonzero, None] / 2.0
    for j, sj in enumerate(s):
        basis = _detrend_basis(int(sj), int(m))
        variances, sumsq = _backend.segment_variances(y, int(sj), basis)
        threshold = (_DEGENERATE_RTOL ** 2) * sumsq / sj
        keep = variances > threshold
        kept = int(keep.sum())
        dropped = len(variances) - kept
        if dropped > 0.10 * len(variances):
            raise TooManyDegenerateSegments(
                f"{dropped} of {len(variances)} segments degenerate at scale {sj}")
        excluded[:, j] = dropped
        log_f2 = np.log(variances[keep])
        # log-domain moment average, stable for strongly negative q
        log_mean = logsumexp(half_q * log_f2[None, :], axis=1) - np.log(kept)
        F[nonzero, j] = np.exp(log_mean / q[nonzero])
        if np.any(~nonzero):
            F[~nonzero, j] = np.exp(log_f2.mean() / 2.0)
    if not np.all(np.isfinite(F)) or np.any(F <= 0):
        raise RangeError("fluctuation function left the positive finite range")
    return FluctuationTable(q=q, s=s, F=F, m=int(m), excluded=excluded)


@dataclass
class HurstFit:
    """Per-moment log-log regression results."""

    q: np.ndarray
    h: np.ndarray
    stderr: np.ndarray
    r_squared: np.ndarray
    fit_range: tuple


def fit_hurst_exponents(table, fit_range=None):
    """OLS slope of ln F_q(s) on ln s per moment: the generalized Hurst h(q)."""
    if fit_range is None:
        fit_range = (int(table.s[0]), int(table.s[-1]))
    lo, hi = fit_range
    selected = (table.s >= lo) & (table.s <= hi)
    if selected.sum() < 4:
        raise InsufficientScales(
            f"only {int(selected.sum())} scales inside [{lo}, {hi}], need 4")
    lx = np.log(table.s[selected].astype(np.float64))
    ly = np.log(table.F[:, selected])
    n = len(lx)
    dx = lx - lx.mean()
    sxx = float(dx @ dx)
    slopes = (ly @ dx) / sxx
    intercepts = ly.mean(axis=1) - slopes * lx.mean()
    residuals = ly - (slopes[:, None] * lx[None, :] + intercepts[:, None])
    ssr = np.einsum("ij,ij->i", residuals, residuals)
    ssr = np.maximum(ssr, 0.0)
    dy = ly - ly.mean(axis=1, keepdims=True)
    syy = np.einsum("ij,ij->i", dy, dy)
    stderr = np.sqrt(ssr / (n - 2) / sxx)
    r_squared = np.where(syy > 0, 1.0 - ssr / np.where(syy > 0, syy, 1.0), 1.0)
    return HurstFit(q=table.q, h=slopes, stderr=stderr, r_squared=r_squared,
                    fit_range=(int(lo), int(hi)))


def scaling_exponents(h, q):
    """tau(q) = q h(q) - 1."""
    h = np.asarray(h, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if h.shape != q.shape:
        raise RangeError(f"h and q shapes differ: {h.shape} vs {q.shape}")
    return q * h - 1.0


def singularity_spectrum(tau, q):
    """Legendre transform by finite differences: alpha, f(alpha), width.

    alpha = dtau/dq via central differences (one-sided at the ends);
    f = q alpha - tau; width = max(alpha) - min(alpha).
    """
    tau = np.asarray(tau, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if len(q) < 5:
        raise RangeError(f"need at least 5 moments for the Legendre transform, got {len(q)}")
    steps = np.diff(q)
    dq = steps.mean()
    if np.max(np.abs(steps - dq)) > 1e-9 * abs(dq):
        raise NonUniformGrid("moment grid must be uniformly spaced")
    alpha = np.gradient(tau, dq)
    f_alpha = q * alpha - tau
    width = float(alpha.max() - alpha.min())
    return alpha, f_alpha, width


def classify_correlation(hurst, dead_band=0.02):
    """Tag H against 0.5: below, inside, or above the dead band."""
    hurst = float(hurst)
    if not np.isfinite(hurst):
        raise RangeError(f"Hurst exponent must be finite, got {hurst}")
    if dead_band < 0:
        raise RangeError(f"dead band must be >= 0, got {dead_band}")
    if abs(hurst - 0.5) <= dead_band:
        return "uncorrelated"
    if hurst > 0.5:
        return "long_range_correlated"
    return "anti_correlated"


@dataclass
class MfdfaConfig:
    """Grids and knobs for the full pipeline; None fields mean defaults."""

    q_grid: np.ndarray = None
    s_grid: np.ndarray = None
    m: int = 1
    fit_range: tuple = None
    dead_band: float = 0.02

    def resolve(self, n):
        q = default_q_grid() if self.q_grid is None else np.asarray(self.q_grid, float)
        s = default_s_grid(n) if self.s_grid is None else np.asarray(self.s_grid)
        fit = self.fit_range if self.fit_range is not None else (int(s[0]), int(s[-1]))
        return q, s, fit

    def describe(self, n):
        q, s, fit = self.resolve(n)
        return {
            "detrend_order": int(self.m),
            "dead_band": float(self.dead_band),
            "q": q,
            "s": s.astype(np.int64),
            "fit_range": [int(fit[0]), int(fit[1])],
        }


@dataclass
class MultifractalSpectrum:
    """Everything the pipeline produces for one signal."""

    q: np.ndarray
    h: np.ndarray
    h_stderr: np.ndarray
    tau: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    width: float
    hurst: float
    classification: str
    config: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "q": self.q,
            "h": self.h,
            "h_stderr": self.h_stderr,
            "tau": self.tau,
            "alpha": self.alpha,
            "f_alpha": self.f_alpha,
            "width": self.width,
            "hurst": self.hurst,
            "classification": self.classification,
            "config": self.config,
        }


def analyze_full(signal, config=None):
    """Run the whole chain on a raw signal; returns (spectrum, table)."""
    if config is None:
        config = MfdfaConfig()
    x = validate_signal(signal, min_length=2)
    q_grid, s_grid, fit_range = config.resolve(len(x))
    profile = build_profile(x)
    table = fluctuation_function(profile, q_grid=q_grid, s_grid=s_grid, m=config.m)
    fit = fit_hurst_exponents(table, fit_range=fit_range)
    tau = scaling_exponents(fit.h, fit.q)
    alpha, f_alpha, width = singularity_spectrum(tau, fit.q)
    hurst_index = int(np.argmin(np.abs(fit.q - 2.0)))
    hurst = float(fit.h[hurst_index])
    spectrum = MultifractalSpectrum(
        q=fit.q, h=fit.h, h_stderr=fit.stderr, tau=tau,
        alpha=alpha, f_alpha=f_alpha, width=width, hurst=hurst,
        classification=classify_correlation(hurst, config.dead_band),
        config=config.describe(len(x)))
    return spectrum, table


def analyze(signal, config=None):
    """Run the whole chain on a raw signal and return its spectrum."""
    return analyze_full(signal, config)[0]
