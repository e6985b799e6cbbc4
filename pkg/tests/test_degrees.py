import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.exceptions import DegenerateSigma, EmptySequence, ForestWiseError, NotAForest
from app.models.degrees import DegreeSequence, validate


def test_validate_mixed_sequence(mixed_degrees):
    assert mixed_degrees.n == 12
    assert mixed_degrees.c == 3


def test_validate_single_vertex():
    s = validate({0: 1})
    assert (s.n, s.c) == (1, 1)


@pytest.mark.parametrize("counts, error", [
    ({1: 5}, NotAForest),
    ({0: 1, 3: 1}, NotAForest),
    ({}, EmptySequence),
    ({0: 0}, EmptySequence),
    ({0: -1}, ForestWiseError),
])
def test_validate_rejects(counts, error):
    with pytest.raises(error):
        DegreeSequence.validate(counts)


def test_zero_counts_are_dropped():
    assert DegreeSequence.validate({0: 2, 1: 0, 2: 1}).counts == ((0, 2), (2, 1))


def test_stats(mixed_degrees):
    stats = mixed_degrees.stats()
    assert (stats.n, stats.c, stats.delta, stats.sigma2_s) == (12, 3, 3, 19)
    assert stats.mu_p == pytest.approx(9 / 12)
    assert stats.sigma2_p == pytest.approx(19 / 12)
    assert stats.variance_p == pytest.approx(19 / 12 - (9 / 12) ** 2)


def test_stats_single_vertex():
    stats = validate({0: 1}).stats()
    assert (stats.n, stats.c, stats.delta, stats.sigma2_s, stats.mu_p) == (1, 1, 0, 0, 0.0)


def test_child_vector(ten_trees, mixed_degrees):
    assert ten_trees.child_vector() == (0, 0, 0, 1, 1, 3)
    assert validate({0: 1}).child_vector() == (0,)
    assert mixed_degrees.child_vector() == (0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 2, 3)
    assert tuple(mixed_degrees.child_array().tolist()) == mixed_degrees.child_vector()


def test_regime_diagnostics_binary():
    diagnostics = validate({0: 5050, 2: 4950}).regime_diagnostics()
    assert diagnostics.sigma2_p == pytest.approx(1.98)
    assert diagnostics.c_over_sigma_sqrt_n == pytest.approx(0.7107, abs=1e-4)
    assert diagnostics.delta_over_sqrt_n == pytest.approx(0.02)
    # offspring variance of the {0, 2} law is 1 - c²/n²
    assert diagnostics.variance_p == pytest.approx(1 - 1e-4)
    assert diagnostics.c_over_std_sqrt_n == pytest.approx(1.0, abs=1e-4)


def test_regime_diagnostics_mixed(mixed_degrees):
    assert mixed_degrees.regime_diagnostics().c_over_sigma_sqrt_n == pytest.approx(3 / math.sqrt(19))


def test_regime_diagnostics_degenerate():
    with pytest.raises(DegenerateSigma):
        validate({0: 1}).regime_diagnostics()


def test_json_codec(mixed_degrees):
    assert DegreeSequence.from_json(mixed_degrees.to_json()) == mixed_degrees
    assert DegreeSequence.from_json('{"counts": {"0": 2, "2": 1}}') == validate({0: 2, 2: 1})
    with pytest.raises(ForestWiseError):
        DegreeSequence.from_json('[1, 2]')


@given(st.dictionaries(st.integers(0, 6), st.integers(0, 20), min_size=1))
def test_sum_identity(counts):
    try:
        s = DegreeSequence.validate(counts)
    except ForestWiseError:
        return
    assert s.n >= 1 and s.c >= 1
    assert sum(i * k for i, k in s.counts) == s.n - s.c
