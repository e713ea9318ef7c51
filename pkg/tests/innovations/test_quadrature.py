"""Tests for expectation quadrature."""

import math

import pytest

from tarstab.innovations import Gaussian, StudentT, expect


class TestExpect:
    def test_half_line(self):
        assert expect(Gaussian(), lambda u: 1.0, lo=0.0).value == pytest.approx(0.5, abs=1e-10)

    def test_window(self):
        value = expect(Gaussian(), lambda u: 1.0, lo=-1.0, hi=1.0).value
        assert value == pytest.approx(0.682689492, abs=1e-9)

    def test_empty_window(self):
        result = expect(Gaussian(), lambda u: 1.0, lo=1.0, hi=1.0)
        assert result.value == 0.0 and result.abserr == 0.0

    def test_log_singularity(self):
        # E log|1 - e| has an integrable log singularity at e = 1
        value = expect(Gaussian(), lambda u: math.log(abs(1.0 - u)), singular=(1.0,)).value
        assert math.isfinite(value)
        assert value == pytest.approx(Gaussian().log_abs_moment(1.0, -1.0), abs=1e-12)

    def test_error_estimate_small(self):
        result = expect(Gaussian(), lambda u: u * u)
        assert result.value == pytest.approx(1.0, abs=1e-9)
        assert result.abserr < 1e-8

    def test_heavy_tail_infinite_pieces(self):
        d = StudentT(df=5.0)
        assert expect(d, lambda u: u * u).value == pytest.approx(5.0 / 3.0, rel=1e-8)
