"""Tests for the order-1 closed forms."""

import math

import numpy as np
import pytest

from tarstab.errors import ConfigError, MomentOrderError
from tarstab.innovations import StudentT
from tarstab.moments import order1_analysis

GAUSS_LOG_ABS = -0.635181


class TestOrder1Analysis:
    def test_symmetric_lyapunov(self, gaussian):
        res = order1_analysis(0.0, 0.0, 1.0, 1.0, gaussian, 2.0)
        assert res.log_rho == pytest.approx(GAUSS_LOG_ABS, abs=1e-6)
        assert res.pi_minus == pytest.approx(0.5)
        assert res.nu_plus == pytest.approx(0.0, abs=1e-12)

    def test_explosive_coefficient(self, gaussian):
        res = order1_analysis(0.0, 0.0, 2.0, 2.0, gaussian, 1.0)
        assert res.log_rho == pytest.approx(0.057966, abs=1e-6)

    def test_second_moment_matrix(self, gaussian):
        res = order1_analysis(0.0, 0.0, 0.9, 0.9, gaussian, 2.0)
        assert res.E == pytest.approx(np.full((2, 2), 0.405), abs=1e-9)
        assert res.cond_4_1 == (True, True)
        assert res.moment_rate == pytest.approx(0.81, abs=1e-9)
        lo, hi = res.gamma_interval
        assert lo == pytest.approx(0.405 / 0.595, abs=1e-9)
        assert hi == pytest.approx(0.595 / 0.405, abs=1e-9)
        assert res.gamma == pytest.approx(1.0, abs=1e-9)
        assert res.lam().values == pytest.approx([1.0, 1.0], abs=1e-9)

    @pytest.mark.parametrize("b", [0.5, 0.7, 0.9, 0.95, 1.05, 1.1, 1.3, 1.5])
    def test_drift_matches_stationary_moment(self, gaussian, b):
        res = order1_analysis(0.0, 0.0, b, b, gaussian, 2.0)
        assert res.drift_condition == res.cond_stationary_w_r
        assert res.stationary_w_r == pytest.approx(b * b, abs=1e-9)

    def test_asymmetric_regimes(self, gaussian):
        res = order1_analysis(0.3, -0.2, 0.5, 0.7, gaussian, 1.0)
        assert res.p1 == pytest.approx(gaussian.sf(0.6))
        assert res.p2 == pytest.approx(gaussian.cdf(0.2 / 0.7))
        assert res.nu_minus == -res.nu_plus
        assert res.nu().values == pytest.approx([res.nu_minus, res.nu_plus])
        assert res.pi_minus + res.pi_plus == pytest.approx(1.0)

    def test_no_lambda_when_drift_fails(self, gaussian):
        res = order1_analysis(0.0, 0.0, 1.2, 1.2, gaussian, 2.0)
        assert res.gamma is None
        with pytest.raises(ConfigError):
            res.lam()

    def test_validation(self, gaussian):
        with pytest.raises(ConfigError):
            order1_analysis(0.0, 0.0, 0.0, 1.0, gaussian, 1.0)
        with pytest.raises(MomentOrderError):
            order1_analysis(0.0, 0.0, 0.5, 0.5, StudentT(df=3.0), 4.0)

    def test_to_dict(self, gaussian):
        doc = order1_analysis(0.1, 0.1, 0.5, 0.5, gaussian, 1.0).to_dict()
        assert {"log_rho", "E", "gamma", "gamma_interval", "moment_rate"} <= set(doc)
        assert set(doc["E"]) == {"E11", "E12", "E21", "E22"}
        assert math.isfinite(doc["log_rho"])
