"""Tests for batch means and friends."""

import math

import numpy as np
import pytest

from tarstab.stats import (
    agree,
    batch_means,
    binomial_stderr,
    combined_stderr,
    ks_two_sample,
    lane_batch_means,
    mean_and_stderr,
    slope,
)


class TestBatchMeans:
    def test_iid_matches_naive_stderr(self, stream):
        x = stream.generator.standard_normal(100_000)
        mean, se = batch_means(x)
        assert abs(mean) < 4 * se
        assert se == pytest.approx(1 / math.sqrt(len(x)), rel=0.3)

    def test_autocorrelation_inflates_stderr(self, stream):
        g = stream.generator
        e = g.standard_normal(100_000)
        x = np.empty_like(e)
        x[0] = e[0]
        for t in range(1, len(e)):
            x[t] = 0.9 * x[t - 1] + e[t]
        _, se = batch_means(x)
        naive = x.std() / math.sqrt(len(x))
        assert se > 2 * naive

    def test_too_few_batches(self):
        with pytest.raises(ValueError):
            batch_means(np.ones(1000), n_batches=10)

    def test_too_short(self):
        with pytest.raises(ValueError):
            batch_means(np.ones(10))

    def test_lanes_combine(self, stream):
        lanes = stream.generator.standard_normal((4, 10_000)) + 1.0
        mean, se = lane_batch_means(lanes)
        assert mean == pytest.approx(lanes.mean())
        assert se == pytest.approx(1 / math.sqrt(lanes.size), rel=0.3)


class TestHelpers:
    def test_combined(self):
        assert combined_stderr(3.0, 4.0) == 5.0

    def test_agree(self):
        assert agree(1.0, 0.1, 1.3, 0.1, k=4)
        assert not agree(1.0, 0.01, 1.3, 0.01, k=4)

    def test_mean_and_stderr_last_axis(self):
        mean, se = mean_and_stderr(np.array([[1.0, 3.0], [2.0, 2.0]]))
        assert np.allclose(mean, [2.0, 2.0])
        assert np.allclose(se, [1.0, 0.0])

    def test_binomial(self):
        assert binomial_stderr(0.5, 100) == pytest.approx(0.05)

    def test_ks_same_law(self, stream):
        g = stream.generator
        _, pvalue = ks_two_sample(g.standard_normal(2000), g.standard_normal(2000))
        assert pvalue > 1e-3

    def test_slope(self):
        x = np.arange(10.0)
        assert slope(x, 3 * x + 1) == pytest.approx(3.0)
