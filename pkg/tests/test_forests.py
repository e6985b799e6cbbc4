import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import ForestWiseError, IndexOutOfRange, NotFirstPassage
from app.core.rng import SeededRng, StreamPurpose
from app.models.degrees import validate
from app.models.forests import PlaneForest, PlaneTree
from app.models.paths import as_path
from app.services.forests import (
    contour_function,
    decode,
    encode,
    enumerate_forests,
    enumerate_trees,
    forest_profile,
    mark_to_child_sequence,
    sort_decreasing,
    tree_diameter,
    tree_metrics,
    verify_marked_maps,
)
from app.services.sampler import ForestSampler, sample_forest

SINGLE = (0,)
EDGE = (1, 0)
PATH3 = (1, 1, 0)


def forest(*trees) -> PlaneForest:
    return PlaneForest.from_children(trees)


def test_plane_tree_validation():
    assert PlaneTree((2, 0, 0)).size == 3
    with pytest.raises(ForestWiseError):
        PlaneTree((0, 0))
    with pytest.raises(ForestWiseError):
        PlaneTree(())


def test_decode_examples():
    assert decode(as_path((1, -1, -1))) == forest((2, 0, 0))
    assert decode(as_path((0, -1, 0, -1))) == forest(EDGE, EDGE)
    assert decode(as_path((-1,))) == forest(SINGLE)


def test_decode_rejects_non_first_passage():
    with pytest.raises(NotFirstPassage):
        decode(as_path((-1, 0, 1, -1)))
    with pytest.raises(NotFirstPassage):
        decode(as_path(()))


def test_encode_examples():
    assert encode(forest(EDGE, EDGE)) == as_path((0, -1, 0, -1))
    assert encode(forest(SINGLE)) == as_path((-1,))
    assert encode(forest((2, 0, 0))) == as_path((1, -1, -1))


def test_number_of_trees_is_c(mixed_degrees):
    for f in enumerate_forests(mixed_degrees, cap=12)[::50]:
        assert len(f.trees) == mixed_degrees.c
        assert f.degree_sequence() == mixed_degrees


def test_sort_decreasing():
    assert sort_decreasing(forest(SINGLE, PATH3)) == forest(PATH3, SINGLE)
    assert sort_decreasing(forest(SINGLE, SINGLE)) == forest(SINGLE, SINGLE)
    assert sort_decreasing(forest(EDGE, SINGLE, EDGE)) == forest(EDGE, EDGE, SINGLE)


def test_mark_to_child_sequence():
    star = forest((2, 0, 0))
    assert mark_to_child_sequence(star, 1) == (2, 0, 0)
    assert mark_to_child_sequence(star, 2) == (0, 0, 2)
    assert mark_to_child_sequence(forest(SINGLE, SINGLE), 2) == (0, 0)
    with pytest.raises(IndexOutOfRange):
        mark_to_child_sequence(star, 4)


@pytest.mark.parametrize("counts, marked, sequences", [
    ({0: 2, 1: 2}, 12, 6),
    ({0: 1}, 1, 1),
    ({0: 3, 1: 2, 3: 1}, 60, 60),
])
def test_verify_marked_maps(counts, marked, sequences):
    result = verify_marked_maps(validate(counts))
    assert result.g_c_to_1 and result.h_n_to_1
    assert (result.marked_forests, result.child_sequences) == (marked, sequences)


@pytest.mark.parametrize("children, size, height, diameter, sigma2", [
    ((2, 0, 0), 3, 1, 2, 4),
    ((1, 1, 0), 3, 2, 2, 2),
    ((0,), 1, 0, 0, 0),
    ((3, 1, 0, 0, 2, 0, 1, 0), 8, 3, 5, 15),
])
def test_tree_metrics(children, size, height, diameter, sigma2):
    metrics = tree_metrics(PlaneTree(children))
    assert (metrics.size, metrics.height, metrics.diameter, metrics.sigma2) == (size, height, diameter, sigma2)
    assert metrics.degree_histogram.n == size


def test_contour_function():
    assert contour_function(PlaneTree((2, 0, 0))).values.tolist() == [0, 1, 0, 1, 0]
    assert contour_function(PlaneTree((0,))).values.tolist() == [0]
    assert contour_function(PlaneTree((1, 1, 0))).values.tolist() == [0, 1, 2, 1, 0]


def test_forest_profile_matches_tree_metrics(mixed_degrees):
    f = ForestSampler(mixed_degrees).sample(SeededRng(5))
    profile = forest_profile(f.children)
    assert profile.sizes.tolist() == list(f.tree_sizes)
    assert profile.heights.tolist() == [tree_metrics(t).height for t in f.trees]
    assert profile.sigma2.tolist() == [tree_metrics(t).sigma2 for t in f.trees]
    assert profile.max_degrees.tolist() == [max(t.children) for t in f.trees]


def test_enumerate_trees_catalan_counts():
    sizes = [t.size for t in enumerate_trees(7)]
    # Catalan numbers C_{k-1}
    assert [sizes.count(k) for k in range(1, 8)] == [1, 1, 2, 5, 14, 42, 132]


def test_enumerate_trees_gives_valid_distinct_trees():
    trees = list(enumerate_trees(6))
    assert len(set(trees)) == len(trees)
    for t in trees:
        assert PlaneTree(t.children) == t


def test_codec_exhaustive_small(ten_trees, three_forests):
    for s in (ten_trees, three_forests):
        for f in enumerate_forests(s):
            assert decode(encode(f)) == f
            assert encode(decode(encode(f))) == encode(f)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_codec_round_trip_on_samples(seed):
    s = validate({0: 520, 1: 180, 2: 200, 3: 60, 5: 40})
    f = ForestSampler(s).sample(SeededRng(seed))
    path = encode(f)
    assert path.is_first_passage()
    assert decode(path) == f
    assert encode(decode(path)) == path
    assert f.n == s.n and sum(f.tree_sizes) == s.n


def test_tree_diameter_of_long_path():
    children = tuple([1] * 99 + [0])
    assert tree_diameter(PlaneTree(children)) == 99
    assert np.max(forest_profile(children).heights) == 99


@pytest.mark.slow
def test_codec_round_trip_ten_thousand_samples():
    s = validate({0: 520, 1: 180, 2: 200, 3: 60, 5: 40})
    for index in range(10_000):
        f = sample_forest(s, SeededRng.for_replicate(17, StreamPurpose.FOREST, index))
        path = encode(f)
        assert path.is_first_passage()
        assert decode(path) == f
