"""Tests for the tail-index solvers."""

import math

import numpy as np
import pytest

from tarstab.errors import BracketError, PreconditionError
from tarstab.model import arch
from tarstab.moments import GrowthParams, scalar_kappa, solve_kappa

SMALL = GrowthParams(n_max=20, replicates=4, particles=2000, stationary_starts=0)


class TestScalarKappa:
    def test_unit_coefficient(self, gaussian):
        assert scalar_kappa(1.0, gaussian) == pytest.approx(2.0, abs=1e-8)

    def test_half_coefficient_is_a_root(self, gaussian):
        kappa = scalar_kappa(0.5, gaussian)
        assert kappa > 2.0
        assert 0.5**kappa * gaussian.abs_power_moment(kappa) == pytest.approx(1.0, abs=1e-9)

    def test_no_positive_root(self, gaussian):
        with pytest.raises(PreconditionError) as info:
            scalar_kappa(2.0, gaussian)
        assert info.value.log_rho == pytest.approx(0.057966, abs=1e-6)

    def test_bracket_too_short(self, gaussian):
        with pytest.raises(BracketError) as info:
            scalar_kappa(1.0, gaussian, r_max=1.5)
        assert info.value.values[1] < 1


class TestSolveKappa:
    def test_arch1_unit_coefficient(self, stream, gaussian):
        sol = solve_kappa(arch([1.0]), gaussian, (1.0, 3.0), 0.05, SMALL, stream, log_rho=-0.635)
        assert sol.kappa == pytest.approx(2.0, abs=0.05)
        assert sol.monotone
        assert list(sol.history.columns) == ["r", "rate", "stderr"]
        assert abs(sol.rate_at_kappa - 1) < 0.05
        assert sol.to_dict()["bracket"] == [1.0, 3.0]

    @pytest.mark.slow
    def test_arch1_half_coefficient(self, stream, gaussian):
        exact = scalar_kappa(0.5, gaussian)
        sol = solve_kappa(arch([0.5]), gaussian, (6.0, 14.0), 0.05, SMALL, stream)
        assert sol.kappa == pytest.approx(exact, abs=0.05)
        assert sol.monotone
        assert sol.log_rho == pytest.approx(math.log(0.5) - 0.635181, abs=0.02)

    def test_explosive_model_rejected(self, stream, gaussian):
        with pytest.raises(PreconditionError):
            solve_kappa(arch([2.0]), gaussian, (1.0, 3.0), 0.05, SMALL, stream, log_rho=0.058)

    def test_bracket_must_straddle(self, stream, gaussian):
        with pytest.raises(BracketError) as info:
            solve_kappa(arch([1.0]), gaussian, (0.5, 1.0), 0.05, SMALL, stream, log_rho=-0.635)
        assert np.all(np.array(info.value.values) < 1)

    def test_bad_bracket(self, stream, gaussian):
        with pytest.raises(ValueError):
            solve_kappa(arch([1.0]), gaussian, (2.0, 1.0), 0.05, SMALL, stream, log_rho=-0.6)
