"""Exception hierarchy. Every error raised on purpose derives from FractalSigError."""


class FractalSigError(Exception):
    """Base class for all errors raised by this package."""


class SignalTooShort(FractalSigError):
    """Input sequence has fewer samples than the operation requires."""


class RangeError(FractalSigError):
    """A value is non-finite or outside its documented range."""


class ParseError(FractalSigError):
    """A file could not be parsed; message carries line or byte position."""


class UnsupportedOrder(FractalSigError):
    """Wavelet order outside the supported range."""


class TooManyLevels(FractalSigError):
    """Requested decomposition depth exceeds what the signal length allows."""


class ShapeMismatch(FractalSigError):
    """Coefficient lengths are inconsistent with the recorded original length."""


class ScaleOutOfRange(FractalSigError):
    """A CWT scale lies outside [1, N/4]."""


class LengthMismatch(FractalSigError):
    """Two signals that must share a length do not."""


class BadWindow(FractalSigError):
    """Invalid smoothing window parameters."""


class DegenerateSmoothing(FractalSigError):
    """Smoothed auto-spectra vanish on more than half of the map."""


class DegenerateFit(FractalSigError):
    """Segment too short for the requested detrending order."""


class TooManyDegenerateSegments(FractalSigError):
    """More than 10% of segments have zero variance at some scale."""


class InsufficientScales(FractalSigError):
    """Fewer than 4 scales fall inside the requested fit range."""


class NonUniformGrid(FractalSigError):
    """Moment grid spacing is not uniform, so finite differences are invalid."""


class EmbeddingFailure(FractalSigError):
    """Circulant spectrum went negative; the generator cannot proceed."""


class SpecParseError(FractalSigError):
    """A generator spec string could not be parsed; message names the token."""


class EmptyGroup(FractalSigError):
    """A report group resolved to zero inputs."""
