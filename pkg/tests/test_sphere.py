"""Tests for sphere points, grids and grid functions."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tarstab.sphere import (
    UNIT_TOL,
    GridFunction,
    axial_distance,
    axial_probes,
    hyperplane_distance,
    normalize,
    sphere_grid,
    uniform,
)


class TestNormalize:
    def test_rows(self):
        out = normalize(np.array([[3.0, 4.0], [0.0, -2.0]]))
        assert np.allclose(out, [[0.6, 0.8], [0.0, -1.0]])

    @given(
        st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=5).filter(
            lambda xs: np.linalg.norm(xs) > 1e-3
        )
    )
    @settings(max_examples=50)
    def test_unit_norm(self, xs):
        assert abs(np.linalg.norm(normalize(np.array(xs))) - 1.0) <= UNIT_TOL


class TestUniform:
    def test_shape_and_norm(self, stream):
        pts = uniform(stream, 500, 3)
        assert pts.shape == (500, 3)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)

    def test_roughly_centered(self, stream):
        pts = uniform(stream, 20_000, 2)
        assert np.all(np.abs(pts.mean(axis=0)) < 0.03)


class TestDistances:
    def test_axial(self):
        assert np.allclose(axial_distance(np.array([[0.6, -0.8], [1.0, 0.0]])), [0.6, 0.0])

    def test_hyperplane(self):
        planes = np.array([[1.0, 1.0]])
        theta = np.array([[1.0, 0.0]])
        assert hyperplane_distance(theta, planes)[0] == pytest.approx(1 / np.sqrt(2))

    def test_no_hyperplanes(self):
        assert np.isinf(hyperplane_distance(np.array([[1.0, 0.0]]), np.zeros((0, 2))))[0]


class TestSphereGrid:
    def test_order1_is_the_two_poles(self):
        assert np.array_equal(sphere_grid(1, 50), [[-1.0], [1.0]])

    def test_size_and_norm(self):
        grid = sphere_grid(3, 200)
        assert grid.shape == (200, 3)
        assert np.allclose(np.linalg.norm(grid, axis=1), 1.0)

    def test_deterministic(self):
        assert np.array_equal(sphere_grid(2, 64), sphere_grid(2, 64))

    def test_excludes_axial_planes_and_thresholds(self):
        planes = np.array([[1.0, -1.0]])
        grid = sphere_grid(2, 300, hyperplanes=planes, band=0.05)
        assert np.all(axial_distance(grid) > 0.05)
        assert np.all(hyperplane_distance(grid, planes) > 0.05)

    def test_keep_axial(self):
        grid = sphere_grid(2, 100, exclude_axial=False, band=0.0)
        assert len(grid) == 100


class TestAxialProbes:
    def test_each_plane(self):
        grid = np.array([[0.6, 0.8]])
        probes = axial_probes(grid)
        assert np.allclose(probes, [[0.0, 1.0], [1.0, 0.0]])


class TestGridFunction:
    def test_nearest_point(self):
        grid = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
        fn = GridFunction(grid, np.array([1.0, 2.0, 3.0]))
        thetas = normalize(np.array([[0.9, 0.1], [0.1, 0.9], [-0.8, -0.2]]))
        assert np.array_equal(fn(thetas), [1.0, 2.0, 3.0])

    def test_sup_norm(self):
        fn = GridFunction(np.array([[-1.0], [1.0]]), np.array([-4.0, 2.0]))
        assert fn.sup_norm == 4.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            GridFunction(np.array([[1.0]]), np.array([1.0, 2.0]))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            GridFunction(np.array([[-1.0], [1.0]]), np.array([1.0, np.nan]))
