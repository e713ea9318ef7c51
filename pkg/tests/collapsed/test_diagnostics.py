"""Tests for stationarity and order-1 diagnostics."""

import numpy as np
import pytest

from tarstab.collapsed import (
    order1_frequencies,
    stationarity_diagnostic,
    stationary_power_moment,
)
from tarstab.errors import ConfigError, MomentOrderError
from tarstab.innovations import StudentT
from tarstab.model import arch, tar_arch1
from tarstab.moments import order1_analysis

A1, A2, B1, B2 = 0.3, -0.2, 0.5, 0.7

# (a1, a2, b1, b2) draws for the two-state order-1 chain.
_rng = np.random.default_rng(41)
_a = _rng.uniform(-0.8, 0.8, (20, 2)).round(3)
_b = _rng.uniform(0.4, 1.2, (20, 2)).round(3)
RANDOM_ORDER1 = [(*a.tolist(), *b.tolist()) for a, b in zip(_a, _b)]


class TestStationarityDiagnostic:
    def test_identity_and_agreement(self, stream, gaussian):
        report = stationarity_diagnostic(
            arch([0.5, 0.4]), gaussian, 20_000, 1_000, stream, thin=10, lanes=8
        )
        assert report.identity_gap <= 1e-12
        assert report.ks_distance < 0.1
        assert report.samples == 2000
        assert report.sign_balanced

    def test_needs_enough_steps(self, stream, gaussian):
        with pytest.raises(ConfigError):
            stationarity_diagnostic(arch([0.5]), gaussian, 5_000, 1_000, stream)


class TestOrder1Frequencies:
    def test_matches_closed_form(self, stream, gaussian):
        exact = order1_analysis(A1, A2, B1, B2, gaussian, 2.0)
        freq = order1_frequencies(tar_arch1(A1, A2, B1, B2), gaussian, 64_000, 1_000, stream)
        assert freq.only_two_states
        assert abs(freq.switch_from_minus - exact.p1) < 4 * freq.switch_from_minus_se
        assert abs(freq.switch_from_plus - exact.p2) < 4 * freq.switch_from_plus_se
        assert abs(freq.occupancy_minus - exact.pi_minus) < 4 * freq.occupancy_minus_se + 1e-3

    @pytest.mark.slow
    @pytest.mark.parametrize(("a1", "a2", "b1", "b2"), RANDOM_ORDER1)
    def test_random_parameters(self, stream, gaussian, a1, a2, b1, b2):
        exact = order1_analysis(a1, a2, b1, b2, gaussian, 2.0)
        freq = order1_frequencies(tar_arch1(a1, a2, b1, b2), gaussian, 40_000, 1_000, stream)
        assert abs(freq.switch_from_minus - exact.p1) < 3 * freq.switch_from_minus_se
        assert abs(freq.switch_from_plus - exact.p2) < 3 * freq.switch_from_plus_se

    def test_needs_order1(self, stream, gaussian):
        with pytest.raises(ConfigError):
            order1_frequencies(arch([0.5, 0.5]), gaussian, 10_000, 1_000, stream)


class TestStationaryPowerMoment:
    def test_matches_closed_form(self, stream, gaussian):
        exact = order1_analysis(A1, A2, B1, B2, gaussian, 2.0)
        value, se = stationary_power_moment(
            tar_arch1(A1, A2, B1, B2), gaussian, 2.0, 64_000, 1_000, stream
        )
        assert abs(value - exact.stationary_w_r) < 4 * se + 1e-3

    def test_order_checked(self, stream):
        with pytest.raises(MomentOrderError):
            stationary_power_moment(arch([0.5]), StudentT(3.0), 3.5, 10_000, 1_000, stream)
