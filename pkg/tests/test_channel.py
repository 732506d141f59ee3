import math

import numpy as np
import pytest

from gaed.channel import ChannelParams, ebn0_to_sigma, frame_rng, modulate, transmit, transmit_frame


def test_sigma_examples():
    assert ebn0_to_sigma(10 * math.log10(2), 0.5) == pytest.approx(0.70711, abs=1e-5)
    assert ebn0_to_sigma(0.0, 1.0) == pytest.approx(math.sqrt(0.5))
    assert ChannelParams(3.0, 4 / 7).sigma == pytest.approx(ebn0_to_sigma(3.0, 4 / 7))
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            ebn0_to_sigma(1.0, bad)
        with pytest.raises(ValueError):
            ChannelParams(1.0, bad)


def test_noiseless_llr_signs():
    bits = np.array([0, 1, 1, 0])
    _, llrs = transmit(bits, ChannelParams(3.0, 0.5), np.zeros(4))
    assert np.array_equal(llrs < 0, bits.astype(bool))
    assert np.array_equal(modulate(bits), [1, -1, -1, 1])


def test_frame_rng_is_reproducible():
    a = frame_rng(5, 1, 42).standard_normal(8)
    b = frame_rng(5, 1, 42).standard_normal(8)
    c = frame_rng(5, 1, 43).standard_normal(8)
    d = frame_rng(5, 2, 42).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c) and not np.array_equal(a, d)
    y1, l1 = transmit_frame(np.zeros(8, dtype=np.uint8), ChannelParams(1, 0.5), frame_rng(5, 1, 42))
    assert np.array_equal(y1, 1 + ebn0_to_sigma(1, 0.5) * a)


def test_llr_mean_matches_theory():
    params = ChannelParams(2.0, 0.5)
    sigma = params.sigma
    noise = np.random.default_rng(0).standard_normal(10**6)
    _, llrs = transmit(np.zeros(10**6, dtype=np.uint8), params, noise)
    expect = 2 / sigma**2
    se = (2 / sigma) / math.sqrt(10**6)  # LLR std is 2/sigma
    assert abs(llrs.mean() - expect) < 3 * se


def test_all_one_word_mirrors_all_zero():
    params = ChannelParams(1.0, 0.5)
    noise = np.random.default_rng(1).standard_normal(100)
    _, zero = transmit(np.zeros(100), params, noise)
    _, one = transmit(np.ones(100), params, -noise)
    assert np.allclose(zero, -one)
