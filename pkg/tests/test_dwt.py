"""Daubechies filter generation and the multilevel DWT."""
import numpy as np
import pytest

from fractalsig import (
    ShapeMismatch,
    SignalTooShort,
    TooManyLevels,
    UnsupportedOrder,
    daubechies_filters,
    dwt_multilevel,
    extract_fluctuations,
    idwt_multilevel,
    max_levels,
    reconstruct_band,
)
from reference import naive_dwt_step

SQRT2 = np.sqrt(2.0)


def test_haar_pair():
    filt = daubechies_filters(1)
    np.testing.assert_allclose(filt.low_pass, [1 / SQRT2, 1 / SQRT2], atol=1e-15)
    np.testing.assert_allclose(filt.high_pass, [1 / SQRT2, -1 / SQRT2], atol=1e-15)


def test_db2_canonical_taps():
    filt = daubechies_filters(2)
    expected = np.array([1 + np.sqrt(3), 3 + np.sqrt(3),
                         3 - np.sqrt(3), 1 - np.sqrt(3)]) / (4 * SQRT2)
    np.testing.assert_allclose(filt.low_pass, expected, atol=1e-14)


def test_lowpass_sums_to_sqrt2():
    for p in range(1, 11):
        filt = daubechies_filters(p)
        assert abs(filt.low_pass.sum() - SQRT2) <= 1e-12


def test_orthonormality_all_orders():
    for p in range(1, 11):
        h = daubechies_filters(p).low_pass
        for shift in range(p):
            value = float(h[2 * shift:] @ h[:len(h) - 2 * shift])
            target = 1.0 if shift == 0 else 0.0
            assert abs(value - target) <= 1e-12


def test_quadrature_mirror_relation_exact():
    for p in (1, 2, 4, 7, 10):
        filt = daubechies_filters(p)
        k = np.arange(2 * p)
        expected = ((-1.0) ** k) * filt.low_pass[::-1]
        assert np.array_equal(filt.high_pass, expected)


def test_vanishing_moments_p4_raw_sums():
    g = daubechies_filters(4).high_pass
    k = np.arange(8.0)
    for j in range(4):
        assert abs(np.sum(k ** j * g)) <= 1e-10


def test_vanishing_moments_all_orders_scaled():
    # raw k^j sums amplify tap rounding by k^j, so evaluate the same
    # moments on the conditioning-friendly abscissa k/(2p-1) in [0,1]
    for p in range(1, 11):
        g = daubechies_filters(p).high_pass
        t = np.arange(2 * p) / (2 * p - 1.0)
        for j in range(p):
            assert abs(np.sum(t ** j * g)) <= 1e-12


def test_energy_front_loaded():
    for p in range(2, 11):
        h = daubechies_filters(p).low_pass
        assert (h[:p] ** 2).sum() > (h[p:] ** 2).sum()


def test_unsupported_orders():
    for bad in (0, -1, 11, 2.5, "4"):
        with pytest.raises(UnsupportedOrder):
            daubechies_filters(bad)


def test_unit_impulse_haar():
    filt = daubechies_filters(1)
    decomp = dwt_multilevel(np.array([1.0, 0.0, 0.0, 0.0]), filt, 1)
    np.testing.assert_allclose(decomp.approx, [1 / SQRT2, 0.0], atol=1e-15)
    np.testing.assert_allclose(decomp.details[0], [1 / SQRT2, 0.0], atol=1e-15)


def test_constant_signal_kills_details():
    x = np.full(512, 3.75)
    for p in (1, 2, 4):
        filt = daubechies_filters(p)
        for mode in ("periodic", "symmetric"):
            decomp = dwt_multilevel(x, filt, 4, boundary_mode=mode)
            for detail in decomp.details:
                assert np.max(np.abs(detail)) <= 1e-12


def test_perfect_reconstruction_grid():
    rng = np.random.default_rng(21)
    x = rng.normal(size=1024)
    for p in (1, 2, 4):
        filt = daubechies_filters(p)
        for levels in (1, 3, 5):
            for mode in ("periodic", "symmetric"):
                decomp = dwt_multilevel(x, filt, levels, boundary_mode=mode)
                rec = idwt_multilevel(decomp, filt)
                assert len(rec) == len(x)
                err = np.max(np.abs(rec - x)) / np.max(np.abs(x))
                assert err <= 1e-10


def test_perfect_reconstruction_odd_length():
    rng = np.random.default_rng(22)
    x = rng.normal(size=999)
    for mode in ("periodic", "symmetric"):
        decomp = dwt_multilevel(x, daubechies_filters(3), 3, boundary_mode=mode)
        rec = idwt_multilevel(decomp, daubechies_filters(3))
        assert np.max(np.abs(rec - x)) <= 1e-10 * np.max(np.abs(x))


def test_parseval_periodic():
    rng = np.random.default_rng(23)
    x = rng.normal(size=2048)
    for p in (1, 2, 4, 8, 10):
        decomp = dwt_multilevel(x, daubechies_filters(p), 5)
        energy = np.sum(decomp.approx ** 2) + sum(np.sum(d ** 2) for d in decomp.details)
        assert abs(energy - np.sum(x ** 2)) <= 1e-9 * np.sum(x ** 2)


def test_coefficient_counts_halve():
    x = np.zeros(256)
    decomp = dwt_multilevel(x, daubechies_filters(2), 4)
    assert [len(d) for d in decomp.details] == [128, 64, 32, 16]
    assert len(decomp.approx) == 16


def test_analysis_matches_naive_convolution():
    rng = np.random.default_rng(24)
    x = rng.normal(size=129)
    for p in (1, 2, 4):
        filt = daubechies_filters(p)
        for mode in ("periodic", "symmetric"):
            decomp = dwt_multilevel(x, filt, 1, boundary_mode=mode)
            np.testing.assert_allclose(
                decomp.approx, naive_dwt_step(x, filt.low_pass, mode), atol=1e-12)
            np.testing.assert_allclose(
                decomp.details[0], naive_dwt_step(x, filt.high_pass, mode), atol=1e-12)


def test_haar_shift_relation():
    rng = np.random.default_rng(25)
    x = rng.normal(size=64)
    filt = daubechies_filters(1)
    base = dwt_multilevel(x, filt, 1)
    shifted = dwt_multilevel(np.roll(x, 2), filt, 1)
    np.testing.assert_allclose(shifted.approx, np.roll(base.approx, 1), atol=1e-12)
    np.testing.assert_allclose(shifted.details[0], np.roll(base.details[0], 1), atol=1e-12)


def test_zero_coefficients_give_zero_signal():
    x = np.zeros(128)
    filt = daubechies_filters(2)
    decomp = dwt_multilevel(x, filt, 3)
    assert np.max(np.abs(idwt_multilevel(decomp, filt))) == 0.0


def test_band_reconstructions_sum_to_signal():
    rng = np.random.default_rng(26)
    x = rng.normal(size=512)
    for mode in ("periodic", "symmetric"):
        filt = daubechies_filters(4)
        decomp = dwt_multilevel(x, filt, 4, boundary_mode=mode)
        total = reconstruct_band(decomp, filt, "approx")
        for j in range(1, 5):
            total = total + reconstruct_band(decomp, filt, j)
        assert np.max(np.abs(total - x)) <= 1e-9 * np.max(np.abs(x))


def test_dropping_approx_leaves_fluctuations():
    rng = np.random.default_rng(27)
    x = rng.normal(size=256)
    filt = daubechies_filters(2)
    decomp = dwt_multilevel(x, filt, 3)
    approx_only = reconstruct_band(decomp, filt, "approx")
    decomp.approx = np.zeros_like(decomp.approx)
    rest = idwt_multilevel(decomp, filt)
    assert np.max(np.abs(rest - (x - approx_only))) <= 1e-9 * np.max(np.abs(x))


def test_cubic_polynomial_interior_annihilation():
    n = 2048
    t = np.linspace(-1.0, 1.0, n)
    x = 2.0 - t + 3.0 * t ** 2 - 0.5 * t ** 3
    filt = daubechies_filters(4)
    level = 3
    trace = extract_fluctuations(x, filt, level=level, boundary_mode="symmetric")
    margin = 2 * 4 * 2 ** level
    interior = trace[margin:-margin]
    assert np.max(np.abs(interior)) <= 1e-8 * np.max(np.abs(x))


def test_extract_fluctuations_constant_is_zero():
    trace = extract_fluctuations(np.full(512, 2.5), daubechies_filters(4), level=5)
    assert np.max(np.abs(trace)) <= 1e-12


def test_max_levels_and_too_many():
    # level j needs the filter span 2p-1 to fit in the length at that level
    assert max_levels(1024, 4) == 7
    x = np.zeros(1024)
    filt = daubechies_filters(4)
    dwt_multilevel(x, filt, 7)
    with pytest.raises(TooManyLevels):
        dwt_multilevel(x, filt, 8)
    with pytest.raises(TooManyLevels):
        dwt_multilevel(x, filt, 0)


def test_signal_too_short():
    with pytest.raises(SignalTooShort):
        dwt_multilevel(np.zeros(7), daubechies_filters(4), 1)


def test_idwt_shape_mismatch():
    x = np.zeros(128)
    filt = daubechies_filters(2)
    decomp = dwt_multilevel(x, filt, 3)
    decomp.details[1] = decomp.details[1][:-1]
    with pytest.raises(ShapeMismatch):
        idwt_multilevel(decomp, filt)


def test_decomposition_serialization_schema():
    decomp = dwt_multilevel(np.arange(64.0), daubechies_filters(2), 2)
    payload = decomp.to_dict()
    assert list(payload) == ["order", "levels", "boundary_mode",
                             "original_length", "approx", "details"]
    assert payload["order"] == 2
    assert payload["levels"] == 2
    assert payload["original_length"] == 64
    assert len(payload["details"]) == 2
