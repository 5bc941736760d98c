"""Synthetic fractal generators with analytically known exponents.

These stand in for measured data when validating the analyzers: fractional
Gaussian noise (exact circulant-embedding synthesis), its cumulative sum
(fractional Brownian motion), white noise, and the deterministic binomial
multiplicative cascade whose generalized Hurst exponent has a closed form.

Randomness comes from a SplitMix64 stream (Steele, Lea & Flood 2014) with
Box-Muller conversion to normals, pinned here by algorithm rather than by
library so identical seeds give bit-identical output on every platform and
in any reimplementation. Reference outputs for seed 0 appear in the tests.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmbeddingFailure, RangeError, SpecParseError

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def splitmix64(seed, count):
    """First `count` outputs of SplitMix64 seeded with `seed`, as uint64.

    Output i finalizes state seed + (i+1) * 0x9E3779B97F4A7C15 mod 2^64
    with the standard xor-shift-multiply mixer, so the whole stream is
    computed in one vectorized pass.
    """
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(int(seed) & _MASK) + steps * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return z


def uniforms(seed, count):
    """Uniform doubles in (0, 1]: top 53 bits of each word, plus one ulp."""
    z = splitmix64(seed, count)
    return ((z >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0 ** -53


def standard_normals(seed, count):
    """Standard normals via Box-Muller on consecutive uniform pairs."""
    n_pairs = (count + 1) // 2
    u = uniforms(seed, 2 * n_pairs)
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * n_pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def _check_exponent(n, limit):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise RangeError(f"length exponent must be an integer, got {n!r}")
    if not 1 <= n <= limit:
        raise RangeError(f"length exponent {n} outside [1, {limit}]")
    return int(n)


def fgn_autocovariance(hurst, k_max):
    """Analytic gamma(k) = ((k+1)^2H - 2 k^2H + (k-1)^2H) / 2 for k = 0..k_max."""
    k = np.arange(k_max + 1, dtype=np.float64)
    return 0.5 * (np.abs(k + 1) ** (2 * hurst) - 2 * np.abs(k) ** (2 * hurst)
                  + np.abs(k - 1) ** (2 * hurst))


def gen_white_noise(n, seed=0):
    """2^n independent standard normals."""
    return standard_normals(seed, 1 << _check_exponent(n, 24))


def gen_fgn(hurst, n, seed=0):
    """2^n samples of unit-variance fractional Gaussian noise.

    Exact synthesis by circulant embedding of the covariance: the length-2N
    circulant built from gamma(0..N) has a non-negative spectrum for fGn,
    so taking the real part of the weighted inverse FFT of a Hermitian
    Gaussian vector reproduces the target covariance exactly. H = 0.5 is
    plain white noise and skips the embedding.
    """
    if not 0.0 < hurst < 1.0:
        raise RangeError(f"Hurst exponent must be in (0, 1), got {hurst}")
    n = _check_exponent(n, 24)
    length = 1 << n
    if hurst == 0.5:
        return standard_normals(seed, length)
    gamma = fgn_autocovariance(hurst, length)
    circ = np.concatenate([gamma[:length + 1], gamma[length - 1:0:-1]])
    m = 2 * length
    spectrum = np.fft.fft(circ).real
    if spectrum.min() < -1e-9 * spectrum.max():
        raise EmbeddingFailure(
            f"circulant spectrum reaches {spectrum.min():.3e}; "
            "the embedding is not non-negative definite")
    spectrum = np.maximum(spectrum, 0.0)
    g = standard_normals(seed, m)
    z = np.zeros(m, dtype=complex)
    z[0] = g[0]
    z[length] = g[1]
    pairs = g[2:].reshape(length - 1, 2)
    z[1:length] = (pairs[:, 0] + 1j * pairs[:, 1]) / np.sqrt(2.0)
    z[length + 1:] = np.conj(z[1:length][::-1])
    x = np.sqrt(m) * np.fft.ifft(np.sqrt(spectrum) * z)
    return np.ascontiguousarray(x.real[:length])


def gen_fbm(hurst, n, seed=0):
    """Fractional Brownian motion: cumulative sum of fractional Gaussian noise."""
    return np.cumsum(gen_fgn(hurst, n, seed))


def gen_binomial_cascade(a, n, shuffle_seed=None):
    """Deterministic binomial multiplicative cascade of length 2^n.

    Sample k (0-based) carries mass a^(n - z(k)) (1-a)^z(k) with z the
    binary popcount, i.e. n rounds of splitting total mass 1 into fractions
    a and 1-a. An optional shuffle seed applies a deterministic random
    permutation, which preserves the partition function (the value multiset).
    """
    if not 0.5 < a < 1.0:
        raise RangeError(f"cascade weight must be in (0.5, 1), got {a}")
    n = _check_exponent(n, 22)
    k = np.arange(1 << n, dtype=np.uint64)
    ones = np.bitwise_count(k).astype(np.int64)
    values = a ** (n - ones).astype(np.float64) * (1.0 - a) ** ones.astype(np.float64)
    if shuffle_seed is not None:
        order = np.argsort(splitmix64(shuffle_seed, 1 << n), kind="stable")
        values = values[order]
    return values


def analytic_h_binomial(q, a):
    """Closed-form generalized Hurst exponent of the binomial cascade.

    h(q) = 1/q - ln(a^q + (1-a)^q) / (q ln 2); the q = 0 value is the limit,
    taken as the average of q = +-1e-6. Symmetric under a <-> 1-a; h(1) = 1.
    """
    if not 0.0 < a < 1.0:
        raise RangeError(f"cascade weight must be in (0, 1), got {a}")
    q = np.asarray(q, dtype=np.float64)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    out = np.empty_like(q)
    nonzero = q != 0.0
    qnz = q[nonzero]
    out[nonzero] = 1.0 / qnz - np.log(a ** qnz + (1 - a) ** qnz) / (qnz * np.log(2.0))
    if np.any(~nonzero):
        eps = 1e-6
        left = analytic_h_binomial(-eps, a)
        right = analytic_h_binomial(eps, a)
        out[~nonzero] = 0.5 * (left + right)
    return float(out[0]) if scalar else out


def analytic_tau_binomial(q, a):
    """tau(q) = -ln(a^q + (1-a)^q) / ln 2, finite for all q including 0."""
    if not 0.0 < a < 1.0:
        raise RangeError(f"cascade weight must be in (0, 1), got {a}")
    q = np.asarray(q, dtype=np.float64)
    return -np.log(a ** q + (1 - a) ** q) / np.log(2.0)


@dataclass
class GeneratorSpec:
    """Parsed form of a generator string like 'fgn:H=0.7,n=16,seed=42'."""

    kind: str
    hurst: Optional[float] = None
    a: Optional[float] = None
    n: int = 0
    seed: Optional[int] = None

    def label(self):
        """Filesystem-safe name for output files."""
        parts = [self.kind]
        if self.hurst is not None:
            parts.append(f"H{self.hurst:g}")
        if self.a is not None:
            parts.append(f"a{self.a:g}")
        parts.append(f"n{self.n}")
        if self.seed is not None:
            parts.append(f"seed{self.seed}")
        return "_".join(parts)


_SPEC_KEYS = {
    "white": {"n": True, "seed": False},
    "fgn": {"H": True, "n": True, "seed": False},
    "fbm": {"H": True, "n": True, "seed": False},
    "cascade": {"a": True, "n": True, "seed": False},
}

GENERATOR_PREFIXES = tuple(kind + ":" for kind in _SPEC_KEYS)


def parse_generator_spec(text):
    """Parse 'kind:key=value,...' into a GeneratorSpec.

    Recognized kinds: white, fgn, fbm, cascade. Range checks happen at
    generation time; this reports grammar problems only.
    """
    kind, sep, rest = text.partition(":")
    if not sep or kind not in _SPEC_KEYS:
        raise SpecParseError(f"unknown generator kind {kind!r} in {text!r}")
    allowed = _SPEC_KEYS[kind]
    seen = {}
    for token in rest.split(","):
        token = token.strip()
        if not token:
            raise SpecParseError(f"empty parameter in {text!r}")
        key, sep, value = token.partition("=")
        if not sep:
            raise SpecParseError(f"expected key=value, got {token!r}")
        if key not in allowed:
            raise SpecParseError(f"unknown key {key!r} for generator {kind!r}")
        if key in seen:
            raise SpecParseError(f"duplicate key {key!r} in {text!r}")
        seen[key] = value
    for key, required in allowed.items():
        if required and key not in seen:
            raise SpecParseError(f"generator {kind!r} requires {key!r}")
    spec = GeneratorSpec(kind=kind)
    try:
        if "H" in seen:
            spec.hurst = float(seen["H"])
        if "a" in seen:
            spec.a = float(seen["a"])
        spec.n = int(seen["n"])
        if "seed" in seen:
            spec.seed = int(seen["seed"])
    except ValueError as exc:
        bad = str(exc).split(":")[-1].strip()
        raise SpecParseError(f"bad numeric value {bad} in {text!r}") from None
    return spec


def generate(spec, seed_override=None):
    """Produce the signal a GeneratorSpec describes.

    seed_override replaces the spec's seed (and supplies one where the spec
    had none, including a cascade shuffle).
    """
    if isinstance(spec, str):
        spec = parse_generator_spec(spec)
    seed = spec.seed if seed_override is None else seed_override
    if spec.kind == "white":
        return gen_white_noise(spec.n, 0 if seed is None else seed)
    if spec.kind == "fgn":
        return gen_fgn(spec.hurst, spec.n, 0 if seed is None else seed)
    if spec.kind == "fbm":
        return gen_fbm(spec.hurst, spec.n, 0 if seed is None else seed)
    if spec.kind == "cascade":
        return gen_binomial_cascade(spec.a, spec.n, shuffle_seed=seed)
    raise SpecParseError(f"unknown generator kind {spec.kind!r}")
