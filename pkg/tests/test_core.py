"""Unfolding, profile construction, and signal validation."""
import numpy as np
import pytest

from fractalsig import (
    GrayImage,
    RangeError,
    SignalTooShort,
    build_profile,
    unfold_image,
    validate_signal,
)


def make_image(pixels):
    pixels = np.asarray(pixels, dtype=np.float64)
    return GrayImage(width=pixels.shape[1], height=pixels.shape[0],
                     pixels=pixels, source_min=float(pixels.min()),
                     source_max=float(pixels.max()))


def test_unfold_row_major():
    image = make_image([[1, 2], [3, 4]])
    assert unfold_image(image).tolist() == [1, 2, 3, 4]
    assert unfold_image(image, "row_major").tolist() == [1, 2, 3, 4]


def test_unfold_boustrophedon():
    image = make_image([[1, 2], [3, 4]])
    assert unfold_image(image, "boustrophedon").tolist() == [1, 2, 4, 3]


def test_unfold_column_major():
    image = make_image([[1, 2], [3, 4]])
    assert unfold_image(image, "column_major").tolist() == [1, 3, 2, 4]


def test_unfold_single_row_all_directions():
    image = make_image([[5, 6, 7, 8]])
    for direction in ("row_major", "column_major", "boustrophedon"):
        assert unfold_image(image, direction).tolist() == [5, 6, 7, 8]


def test_unfold_preserves_pixel_multiset():
    rng = np.random.default_rng(11)
    image = make_image(rng.normal(size=(7, 5)))
    for direction in ("row_major", "column_major", "boustrophedon"):
        unfolded = unfold_image(image, direction)
        assert sorted(unfolded) == sorted(image.pixels.ravel())


def test_unfold_rejects_unknown_direction():
    image = make_image([[1, 2], [3, 4]])
    with pytest.raises(RangeError):
        unfold_image(image, "diagonal")


def test_image_invariants_enforced():
    with pytest.raises(RangeError):
        GrayImage(width=3, height=2, pixels=np.zeros((2, 2)),
                  source_min=0.0, source_max=1.0).validate()
    with pytest.raises(RangeError):
        GrayImage(width=2, height=1, pixels=np.array([[0.0, np.nan]]),
                  source_min=0.0, source_max=1.0).validate()


def test_profile_constant_signal_is_zero():
    profile = build_profile(np.full(3, 7.25))
    assert profile.values.tolist() == [0.0, 0.0, 0.0]
    assert profile.source_mean == 7.25


def test_profile_hand_example():
    profile = build_profile(np.array([1.0, 2.0, 3.0]))
    assert profile.source_mean == 2.0
    np.testing.assert_allclose(profile.values, [-1.0, -1.0, 0.0], atol=1e-15)


def test_profile_endpoint_telescopes_to_zero():
    rng = np.random.default_rng(3)
    x = rng.normal(size=4096)
    profile = build_profile(x)
    assert abs(profile.values[-1]) <= 1e-9 * len(x) * np.max(np.abs(x))


def test_profile_requires_two_samples():
    with pytest.raises(SignalTooShort):
        build_profile(np.array([1.0]))


def test_profile_is_linear_in_amplitude():
    rng = np.random.default_rng(4)
    x = rng.normal(size=512)
    base = build_profile(x).values
    scaled = build_profile(2.5 * x).values
    np.testing.assert_allclose(scaled, 2.5 * base, rtol=1e-12, atol=1e-12)


def test_profile_of_reversed_signal_mirrors():
    rng = np.random.default_rng(5)
    x = rng.normal(size=257)
    y = build_profile(x).values
    y_rev = build_profile(x[::-1]).values
    expected = np.concatenate([-y[::-1][1:], [0.0]])
    np.testing.assert_allclose(y_rev, expected, atol=1e-9)


def test_validate_signal_rejects_non_finite():
    with pytest.raises(RangeError):
        validate_signal(np.array([1.0, np.inf, 2.0]))
    with pytest.raises(RangeError):
        validate_signal(np.array([np.nan]))


def test_validate_signal_rejects_matrix():
    with pytest.raises(RangeError):
        validate_signal(np.zeros((3, 3)))


def test_validate_signal_min_length():
    with pytest.raises(SignalTooShort):
        validate_signal(np.arange(3.0), min_length=4)
    out = validate_signal([1, 2, 3])
    assert out.dtype == np.float64
    assert out.tolist() == [1.0, 2.0, 3.0]
