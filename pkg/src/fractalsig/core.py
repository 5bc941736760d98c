"""Domain types shared by all analyzers: signals, gray images, profiles.

A signal is a 1-D array of finite reals with implicit unit index spacing.
Images are unfolded into signals before any analysis; the profile is the
mean-subtracted cumulative sum that detrending operates on.
"""
from dataclasses import dataclass

import numpy as np

from .errors import RangeError, SignalTooShort

UNFOLD_DIRECTIONS = ("row_major", "column_major", "boustrophedon")


def validate_signal(x, min_length=1, name="signal"):
    """Coerce x to a float64 1-D array, checking finiteness and length."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise RangeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise SignalTooShort(f"{name} has {arr.size} samples, needs at least {min_length}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise RangeError(f"{name} contains a non-finite value at index {bad}")
    return arr


@dataclass
class GrayImage:
    """Single-channel image with its declared source value range."""

    width: int
    height: int
    pixels: np.ndarray  # shape (height, width), float64
    source_min: float
    source_max: float

    def validate(self):
        if self.width < 1 or self.height < 1:
            raise RangeError("image dimensions must be positive")
        if self.pixels.shape != (self.height, self.width):
            raise RangeError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}")
        if not np.all(np.isfinite(self.pixels)):
            raise RangeError("image contains non-finite pixels")
        lo, hi = self.pixels.min(), self.pixels.max()
        if lo < self.source_min or hi > self.source_max:
            raise RangeError(
                f"pixel values [{lo}, {hi}] fall outside declared range "
                f"[{self.source_min}, {self.source_max}]")
        return self


@dataclass
class Profile:
    """Cumulative sum of the mean-subtracted signal, plus the removed mean."""

    values: np.ndarray
    source_mean: float

    def __len__(self):
        return len(self.values)


def unfold_image(image, direction="row_major"):
    """Unfold a 2-D image into a 1-D signal.

    row_major concatenates rows top to bottom; column_major concatenates
    columns left to right; boustrophedon reverses every second row so the
    scan path is continuous.
    """
    if direction not in UNFOLD_DIRECTIONS:
        raise RangeError(f"unknown unfold direction {direction!r}")
    px = image.pixels
    if direction == "row_major":
        out = px.reshape(-1)
    elif direction == "column_major":
        out = px.T.reshape(-1)
    else:
        snake = px.copy()
        snake[1::2] = snake[1::2, ::-1]
        out = snake.reshape(-1)
    return np.ascontiguousarray(out, dtype=np.float64)


def build_profile(signal):
    """Return the profile Y(i) = sum_{k<=i} (x_k - mean(x)).

    The cumulative sum telescopes to zero at the last index, which is what
    makes the detrended-variance scaling meaningful.
    """
    x = validate_signal(signal, min_length=2)
    mean = float(x.mean())
    return Profile(values=np.cumsum(x - mean), source_mean=mean)
