"""Tests for the bounded-coefficient representation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tarstab.model import eval_ab, fcar_representation, tar_arch1, tarch_delay1, threshold_bounds

coords = st.floats(-50, 50, allow_nan=False)


class TestFcarRepresentation:
    @given(st.tuples(coords, coords))
    @settings(max_examples=100)
    def test_reconstructs_a_and_b(self, x):
        spec = tarch_delay1([0.5, 0.2], [0.3, 0.6]).with_intercepts(0.4, 1.5)
        coeffs = fcar_representation(spec, x)
        assert coeffs.reconstruct(x) == pytest.approx(eval_ab(spec, x), rel=1e-9, abs=1e-9)

    @given(st.tuples(coords, coords))
    @settings(max_examples=100)
    def test_coefficients_bounded(self, x):
        spec = tarch_delay1([0.5, 0.2], [0.3, 0.6]).with_intercepts(0.4, 1.5)
        coeffs = fcar_representation(spec, x)
        assert np.all(np.abs(coeffs.a) <= 0.6 + 1e-12)
        assert np.all(coeffs.b <= 1.5 + 1e-12)


class TestThresholdBounds:
    def test_max_over_regimes(self):
        a, b = threshold_bounds(tar_arch1(0.3, -0.5, 0.4, 0.2))
        assert np.allclose(a, [0.5])
        assert np.allclose(b, [0.4])
