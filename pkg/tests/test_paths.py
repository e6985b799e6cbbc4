import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.exceptions import DegenerateSigma, IndexOutOfRange, InvalidShiftIndex, NotAForest, TooLarge
from app.models.degrees import DegreeSequence, validate
from app.models.paths import LatticePath, as_path
from app.services.paths import (
    bridge_statistics,
    cyclic_shift,
    enumerate_bridges,
    enumerate_fp_bridges,
    first_passage_index,
    fp_bridge_count,
    multinomial,
    rotate_array,
    rotate_to_first_passage,
    verify_n_to_one,
    walk_from_children,
)


def test_walk_from_children():
    assert walk_from_children((2, 0, 0)).values.tolist() == [0, 1, 0, -1]
    assert walk_from_children(()).values.tolist() == [0]
    assert walk_from_children((0, 0)).values.tolist() == [0, -1, -2]


def test_cyclic_shift():
    assert cyclic_shift(as_path((-1, 0)), 1) == as_path((0, -1))
    path = as_path((1, -1, -1))
    assert cyclic_shift(path, 0) == path
    assert cyclic_shift(path, 3) == path
    with pytest.raises(IndexOutOfRange):
        cyclic_shift(path, 4)


def test_first_passage_index():
    assert first_passage_index(as_path((0, -1)), -1) == 2
    assert first_passage_index(as_path((1, -1, -1)), -5) == 0
    assert first_passage_index(as_path((-1, -1)), -1) == 1


def test_rotate_to_first_passage_examples():
    assert rotate_to_first_passage(as_path((-1, 0)), 0) == as_path((0, -1))
    assert rotate_to_first_passage(as_path((-1, -1, 1)), 0) == as_path((1, -1, -1))


def test_rotate_to_first_passage_errors():
    with pytest.raises(InvalidShiftIndex):
        rotate_to_first_passage(as_path((-1, 0)), 1)
    with pytest.raises(NotAForest):
        rotate_to_first_passage(as_path((1, -1)), 0)


def test_rotation_of_first_passage_bridge_stays_in_set(ten_trees):
    for bridge in enumerate_fp_bridges(ten_trees):
        assert rotate_to_first_passage(bridge, ten_trees.c - 1).is_first_passage()


def test_rotate_array_matches_path_rotation(mixed_degrees):
    for bridge in enumerate_bridges(mixed_degrees, cap=12)[::97]:
        for j in range(mixed_degrees.c):
            rotated = rotate_array(np.array(bridge.increments), j)
            assert LatticePath.from_array(rotated) == rotate_to_first_passage(bridge, j)


@pytest.mark.parametrize("counts, bridges, fp_bridges", [
    ({0: 3, 1: 2, 3: 1}, 60, 10),
    ({0: 1}, 1, 1),
    ({0: 2, 1: 2}, 6, 3),
])
def test_enumeration_counts(counts, bridges, fp_bridges):
    s = validate(counts)
    assert len(enumerate_bridges(s)) == bridges == multinomial(s)
    assert len(enumerate_fp_bridges(s)) == fp_bridges == fp_bridge_count(s)


def test_enumeration_is_lexicographic(ten_trees):
    bridges = enumerate_bridges(ten_trees)
    assert list(bridges) == sorted(bridges)
    assert all(b.endpoint == -ten_trees.c for b in bridges)


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        enumerate_bridges(validate({0: 6, 2: 5}), cap=10)


@pytest.mark.parametrize("counts, preimages", [
    ({0: 2, 1: 2}, 4),
    ({0: 1}, 1),
    ({0: 3, 1: 2, 3: 1}, 6),
])
def test_verify_n_to_one(counts, preimages):
    result = verify_n_to_one(validate(counts))
    assert result.ok
    assert set(result.preimage_counts.values()) == {preimages}


def test_bridge_statistics():
    stats = bridge_statistics((2, 0, 0), math.sqrt(4 / 3))
    assert stats.sum_sq_increments == 3
    assert stats.mu == pytest.approx(-0.5)
    assert bridge_statistics((0,), 1.0).tau2 == 0.0
    with pytest.raises(DegenerateSigma):
        bridge_statistics((0,), 0.0)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=30))
def test_sum_of_squared_increments_identity(children):
    n = len(children)
    c = n - sum(children)
    stats = bridge_statistics(children, 1.0)
    assert stats.sum_sq_increments == sum(k * k for k in children) - 2 * (n - c) + n


@given(st.dictionaries(st.integers(0, 3), st.integers(0, 3), min_size=1))
def test_bridge_enumeration_is_sorted_and_complete(counts):
    try:
        s = DegreeSequence.validate(counts)
    except ValueError:
        return
    if s.n > 9:
        return
    bridges = enumerate_bridges(s)
    assert list(bridges) == sorted(set(bridges))
    expected = math.factorial(s.n)
    for count in Counter(s.child_vector()).values():
        expected //= math.factorial(count)
    assert len(bridges) == expected
    assert all(Counter(b.children) == Counter(s.child_vector()) for b in bridges)


@given(st.dictionaries(st.integers(0, 3), st.integers(0, 2), min_size=1))
def test_rotation_lands_in_first_passage_set(counts):
    try:
        s = DegreeSequence.validate(counts)
    except ValueError:
        return
    for bridge in enumerate_bridges(s):
        for j in range(s.c):
            assert rotate_to_first_passage(bridge, j).is_first_passage()
