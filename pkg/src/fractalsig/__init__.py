"""Fractal signal analysis toolkit.

Estimates long-range correlation and multifractality in one-dimensional
signals (or unfolded grayscale images) through multifractal detrended
fluctuation analysis, discrete Daubechies wavelet decomposition, and
smoothed wavelet coherence, with exact synthetic generators for validation.
"""
from ._backend import backend_name
from .coherence import (
    CoherenceMap,
    CwtResult,
    center_frequency,
    complex_gaussian_wavelet,
    cone_of_influence,
    cwt,
    default_scales,
    smooth_spectrum,
    wavelet_coherence,
)
from .core import (
    GrayImage,
    Profile,
    UNFOLD_DIRECTIONS,
    build_profile,
    unfold_image,
    validate_signal,
)
from .dwt import (
    BOUNDARY_MODES,
    DwtDecomposition,
    WaveletFilter,
    daubechies_filters,
    dwt_multilevel,
    extract_fluctuations,
    idwt_multilevel,
    max_levels,
    reconstruct_band,
)
from .errors import (
    BadWindow,
    DegenerateFit,
    DegenerateSmoothing,
    EmbeddingFailure,
    EmptyGroup,
    FractalSigError,
    InsufficientScales,
    LengthMismatch,
    NonUniformGrid,
    ParseError,
    RangeError,
    ScaleOutOfRange,
    ShapeMismatch,
    SignalTooShort,
    SpecParseError,
    TooManyDegenerateSegments,
    TooManyLevels,
    UnsupportedOrder,
)
from .io import load_image_pgm, load_signal_csv, save_signal_csv, save_table_csv
from .mfdfa import (
    FluctuationTable,
    HurstFit,
    MfdfaConfig,
    MultifractalSpectrum,
    analyze,
    analyze_full,
    classify_correlation,
    default_q_grid,
    default_s_grid,
    detrended_variance,
    fit_hurst_exponents,
    fluctuation_function,
    scaling_exponents,
    singularity_spectrum,
)
from .synth import (
    GeneratorSpec,
    analytic_h_binomial,
    analytic_tau_binomial,
    fgn_autocovariance,
    gen_binomial_cascade,
    gen_fbm,
    gen_fgn,
    gen_white_noise,
    generate,
    parse_generator_spec,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY_MODES",
    "BadWindow",
    "CoherenceMap",
    "CwtResult",
    "DegenerateFit",
    "DegenerateSmoothing",
    "DwtDecomposition",
    "EmbeddingFailure",
    "EmptyGroup",
    "FluctuationTable",
    "FractalSigError",
    "GeneratorSpec",
    "GrayImage",
    "HurstFit",
    "InsufficientScales",
    "LengthMismatch",
    "MfdfaConfig",
    "MultifractalSpectrum",
    "NonUniformGrid",
    "ParseError",
    "Profile",
    "RangeError",
    "ScaleOutOfRange",
    "ShapeMismatch",
    "SignalTooShort",
    "SpecParseError",
    "TooManyDegenerateSegments",
    "TooManyLevels",
    "UNFOLD_DIRECTIONS",
    "UnsupportedOrder",
    "WaveletFilter",
    "analyze",
    "analyze_full",
    "analytic_h_binomial",
    "analytic_tau_binomial",
    "backend_name",
    "build_profile",
    "center_frequency",
    "classify_correlation",
    "complex_gaussian_wavelet",
    "cone_of_influence",
    "cwt",
    "daubechies_filters",
    "default_q_grid",
    "default_s_grid",
    "default_scales",
    "detrended_variance",
    "dwt_multilevel",
    "extract_fluctuations",
    "fgn_autocovariance",
    "fit_hurst_exponents",
    "fluctuation_function",
    "gen_binomial_cascade",
    "gen_fbm",
    "gen_fgn",
    "gen_white_noise",
    "generate",
    "idwt_multilevel",
    "load_image_pgm",
    "load_signal_csv",
    "max_levels",
    "parse_generator_spec",
    "reconstruct_band",
    "save_signal_csv",
    "save_table_csv",
    "scaling_exponents",
    "singularity_spectrum",
    "smooth_spectrum",
    "unfold_image",
    "validate_signal",
    "wavelet_coherence",
]
