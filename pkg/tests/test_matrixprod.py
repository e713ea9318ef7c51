"""Tests for random companion-matrix products."""

import math

import numpy as np
import pytest

from tarstab.collapsed import estimate_lyapunov
from tarstab.errors import ConfigError
from tarstab.matrixprod import (
    CompanionProduct,
    build_B,
    estimate_gamma,
    matrix_moment_rate,
    verify_T_recursion,
)
from tarstab.model import arch

GAUSS_LOG_SQ = -1.270363


class TestBuildB:
    def test_scalar(self):
        assert build_B([2.0], 3.0) == pytest.approx(np.array([[36.0]]))

    def test_zero_coefficients(self):
        assert np.array_equal(build_B([0.0, 0.0], 1.0), [[0.0, 0.0], [1.0, 0.0]])

    def test_companion_layout(self):
        m = build_B([1.0, 2.0, 3.0], 1.0)
        assert m[0] == pytest.approx([1.0, 4.0, 9.0])
        assert np.array_equal(m[1:], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def test_negative_coefficient(self):
        with pytest.raises(ConfigError):
            build_B([-0.1], 1.0)


class TestCompanionProduct:
    def test_entries_stay_nonnegative(self, stream, gaussian):
        product = CompanionProduct([0.5, 0.4, 0.3], replicates=4)
        for _ in range(50):
            product.absorb(gaussian.sample(stream, 4))
        assert np.all(product.matrix >= 0)
        assert product.t == 50

    def test_log_norm_matches_direct_product(self):
        product = CompanionProduct([0.7, 0.2])
        errors = [0.5, -1.2, 2.0]
        direct = np.eye(2)
        for e in errors:
            product.absorb(np.array([e]))
            direct = build_B([0.7, 0.2], e) @ direct
        assert product.log_norm[0] == pytest.approx(math.log(np.linalg.norm(direct)))


class TestEstimateGamma:
    def test_scalar_arch(self, stream, gaussian):
        est = estimate_gamma([1.0], gaussian, 10_000, 8, stream)
        assert abs(est.gamma - GAUSS_LOG_SQ) < 4 * est.stderr + 1e-3

    def test_coefficient_scaling(self, stream, gaussian):
        base = estimate_gamma([1.0], gaussian, 10_000, 4, stream)
        scaled = estimate_gamma([0.5], gaussian, 10_000, 4, stream)
        assert scaled.gamma == pytest.approx(base.gamma + 2 * math.log(0.5), abs=1e-9)

    def test_twice_collapsed_exponent(self, stream, gaussian):
        gamma = estimate_gamma([0.5, 0.5], gaussian, 20_000, 8, stream.child("matrix"))
        lyap = estimate_lyapunov(
            arch([0.5, 0.5]), gaussian, 40_000, 1_000, stream.child("chain"), replicates=8
        )
        combined = math.hypot(gamma.stderr, 2 * lyap.stderr)
        assert abs(gamma.gamma - 2 * lyap.mean_logw) < 4 * combined

    def test_norm_choice(self, stream, gaussian):
        fro = estimate_gamma([0.5, 0.5], gaussian, 10_000, 4, stream)
        row = estimate_gamma([0.5, 0.5], gaussian, 10_000, 4, stream, norm="row")
        assert row.gamma == pytest.approx(fro.gamma, abs=1e-3)
        assert row.to_dict()["norm"] == "row"

    def test_trace(self, stream, gaussian):
        est = estimate_gamma([1.0], gaussian, 10_000, 2, stream, trace=True, trace_points=20)
        assert list(est.trace.columns) == ["t", "gamma_t"]
        assert est.trace["t"].iloc[-1] == 10_000
        assert est.trace["t"].is_monotonic_increasing

    def test_validation(self, stream, gaussian):
        with pytest.raises(ConfigError):
            estimate_gamma([1.0], gaussian, 100, 2, stream)
        with pytest.raises(ConfigError):
            estimate_gamma([1.0], gaussian, 10_000, 2, stream, norm="spectral")


class TestTRecursion:
    @pytest.mark.parametrize("b", [[0.9], [0.5, 0.5], [0.6, 0.3, 0.4]])
    def test_collapsed_chain_tracks_product(self, stream, gaussian, b):
        check = verify_T_recursion(b, gaussian, 1_000, stream)
        assert check.passed


class TestMatrixMomentRate:
    def test_unit_rate_at_tail_index(self, stream, gaussian):
        table = matrix_moment_rate([1.0], gaussian, 2.0, [3, 1, 2], 20_000, stream)
        assert list(table.columns) == ["t", "log_moment", "rate"]
        assert table["t"].tolist() == [1, 2, 3]
        assert np.all(np.abs(table["rate"] - 1.0) < 0.05)

    def test_bad_grid(self, stream, gaussian):
        with pytest.raises(ConfigError):
            matrix_moment_rate([1.0], gaussian, 2.0, [0, 2], 10, stream)
