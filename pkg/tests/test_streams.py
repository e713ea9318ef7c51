"""Tests for named random streams."""

import numpy as np
import pytest

from tarstab.streams import RandomStream


class TestRandomStream:
    def test_same_path_same_draws(self):
        a = RandomStream(7, ("collapsed", "lane", 3))
        b = RandomStream(7, ("collapsed", "lane", 3))
        assert np.array_equal(a.generator.random(5), b.generator.random(5))

    def test_different_seed_differs(self):
        a = RandomStream(7).child("x")
        b = RandomStream(8).child("x")
        assert not np.array_equal(a.generator.random(5), b.generator.random(5))

    def test_child_independent_of_creation_order(self):
        root = RandomStream(11)
        first = root.child("b").generator.random(3)
        root2 = RandomStream(11)
        root2.child("a").generator.random(100)
        second = root2.child("b").generator.random(3)
        assert np.array_equal(first, second)

    def test_siblings_differ(self):
        root = RandomStream(3)
        a, b = root.spawn(2)
        assert not np.array_equal(a.generator.random(4), b.generator.random(4))

    def test_name_and_index_do_not_collide(self):
        root = RandomStream(3)
        assert not np.array_equal(
            root.child(0).generator.random(4), root.child("0").generator.random(4)
        )

    def test_spawn_paths(self):
        lanes = RandomStream(1).spawn(3, name="replicate")
        assert [s.path for s in lanes] == [("replicate", 0), ("replicate", 1), ("replicate", 2)]

    def test_fresh_replays(self):
        s = RandomStream(5, ("growth",))
        used = s.generator.random(10)
        assert np.array_equal(s.fresh().generator.random(10), used)

    def test_record(self):
        s = RandomStream(9).child("moments", "kappa")
        assert s.record() == {"seed": 9, "path": "moments/kappa"}

    def test_negative_seed_rejected(self):
        with pytest.raises(ValueError):
            RandomStream(-1)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            RandomStream(1).child(-2).generator
