"""Tests for the collapsed chain on the sphere."""

import math

import numpy as np
import pytest

from tarstab.collapsed import (
    LOG_FLOOR,
    CollapsedChain,
    ErrorBuffer,
    StepCounts,
    clamped_log,
    collapse,
    propagate,
    step,
)
from tarstab.model import SphereState, ar_arch, arch, tar_arch1


class TestStep:
    def test_order1_moves_to_sign_of_z(self):
        spec = arch([1.0])
        assert step(spec, SphereState((1.0,)), 0.5).theta == (1.0,)
        assert step(spec, SphereState((1.0,)), -2.0).theta == (-1.0,)

    def test_shift_and_normalize(self):
        spec = ar_arch([0.5, 0.0], [1.0, 0.0], b0=0.0)
        out = step(spec, SphereState((0.6, 0.8)), 1.0)
        w = math.hypot(0.9, 0.6)
        assert out.theta == pytest.approx((0.9 / w, 0.6 / w))

    def test_degenerate_step_needs_stream(self):
        with pytest.raises(ValueError):
            step(arch([1.0]), SphereState((1.0,)), 0.0)

    def test_degenerate_step_redraws(self, stream, gaussian):
        out = step(arch([1.0]), SphereState((1.0,)), 0.0, dist=gaussian, stream=stream)
        assert out.theta in {(1.0,), (-1.0,)}


class TestCollapse:
    def test_batch(self):
        spec = ar_arch([0.5, 0.0], [1.0, 0.0], b0=0.0)
        thetas = np.array([[0.6, 0.8], [-1.0, 0.0]])
        z, w = collapse(spec, thetas, np.array([1.0, 0.5]))
        assert z == pytest.approx([0.9, 0.0])
        assert w == pytest.approx([math.hypot(0.9, 0.6), 1.0])

    def test_propagate_keeps_degenerate_rows(self):
        spec = arch([1.0])
        counts = StepCounts()
        thetas = np.array([[1.0], [-1.0]])
        new, w = propagate(spec, thetas, np.array([0.0, 3.0]), counts)
        assert np.array_equal(new, [[1.0], [1.0]])
        assert w[0] == 0.0
        assert counts.degenerate == 1


class TestClampedLog:
    def test_floor_and_count(self):
        counts = StepCounts()
        out = clamped_log(np.array([1.0, 0.0, 1e-310]), counts)
        assert out[0] == 0.0
        assert out[1] == LOG_FLOOR and out[2] == LOG_FLOOR
        assert counts.underflow == 2

    def test_counts_merge(self):
        total = StepCounts(1, 2, 3).merge(StepCounts(1, 1, 1))
        assert (total.underflow, total.degenerate, total.restarts) == (2, 3, 4)


class TestErrorBuffer:
    def test_serves_stream_draws_in_order(self, stream, gaussian):
        lanes = stream.spawn(2)
        buf = ErrorBuffer(gaussian, lanes, block=4)
        got = np.stack([buf.next() for _ in range(6)], axis=1)
        fresh = [s.fresh() for s in lanes]
        expected = np.stack(
            [np.concatenate([gaussian.sample(s, 4), gaussian.sample(s, 4)])[:6] for s in fresh]
        )
        assert np.array_equal(got, expected)


class TestCollapsedChain:
    def test_states_stay_on_sphere(self, stream, gaussian):
        chain = CollapsedChain(tar_arch1(0.3, -0.2, 0.5, 0.7), gaussian, stream.spawn(4))
        chain.burn(100)
        assert np.allclose(np.abs(chain.thetas), 1.0)

        chain2 = CollapsedChain(arch([0.4, 0.3, 0.2]), gaussian, stream.spawn(4))
        chain2.burn(500)
        assert np.allclose(np.linalg.norm(chain2.thetas, axis=1), 1.0, atol=1e-12)

    def test_lane_independent_of_lane_count(self, stream, gaussian):
        spec = arch([0.4, 0.3])
        small = CollapsedChain(spec, gaussian, stream.spawn(2)).run(300)
        large = CollapsedChain(spec, gaussian, stream.spawn(5)).run(300)
        assert np.allclose(small, large[:2], rtol=1e-13, atol=0)

    def test_run_shape(self, stream, gaussian):
        chain = CollapsedChain(arch([0.5, 0.5]), gaussian, stream.spawn(3))
        assert chain.run(50, burn_in=10).shape == (3, 50)

    def test_given_starts(self, stream, gaussian):
        starts = np.array([[1.0, 0.0], [0.0, 1.0]])
        chain = CollapsedChain(arch([0.5, 0.5]), gaussian, stream.spawn(2), thetas=starts)
        assert np.array_equal(chain.thetas, starts)
        rec = chain.step()
        assert np.array_equal(rec.prev, starts)
