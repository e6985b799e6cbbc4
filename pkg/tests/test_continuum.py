import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import skew

from app.core.exceptions import DomainError, ForestWiseError
from app.core.rng import SeededRng
from app.models.continuum import ExcursionPath, GridPath
from app.services.continuum import (
    cyclic_shift_grid,
    excursion_tree_stats,
    excursions,
    fp_marginal_cdf,
    fp_marginal_density,
    reflect_at_min,
    restrict_to_excursion,
    sample_brownian_bridge,
    sample_fp_bridge,
    sample_normalized_excursion,
)
from app.services.statistics import ks_one_sample, ks_one_sample_threshold


def test_bridge_endpoints(rng):
    path = sample_brownian_bridge(1.5, 64, rng)
    assert path.values[0] == 0.0
    assert path.values[-1] == -1.5
    assert path.m == 64


def test_bridge_marginal_moments():
    generator = SeededRng(17).generator()
    values = np.array([sample_brownian_bridge(1.0, 1024, generator).at(0.5) for _ in range(4000)])
    se_mean = math.sqrt(0.25 / values.size)
    assert abs(values.mean() + 0.5) < 4 * se_mean
    assert abs(values.var() - 0.25) < 4 * 0.25 * math.sqrt(2 / values.size)


def test_standard_bridge_is_symmetric():
    generator = SeededRng(18).generator()
    values = np.array([sample_brownian_bridge(0.0, 256, generator).at(0.5) for _ in range(4000)])
    assert abs(skew(values)) < 4 * math.sqrt(6 / values.size)


def test_bridge_domain():
    with pytest.raises(DomainError):
        sample_brownian_bridge(-1.0, 16, SeededRng(1))
    with pytest.raises(DomainError):
        sample_fp_bridge(0.0, 16, SeededRng(1))


def test_fp_bridge_endpoint_and_minimum():
    generator = SeededRng(19).generator()
    for _ in range(200):
        path = sample_fp_bridge(1.0, 1024, generator)
        assert path.values[-1] == -1.0
        assert path.values[:-1].min() > -1.0 - 0.2


def test_cyclic_shift_grid_keeps_endpoint():
    path = GridPath(np.array([0.0, 1.0, 0.5, 0.0, -1.0]))
    shifted = cyclic_shift_grid(path, 1)
    assert np.allclose(shifted.values, [0.0, -0.5, -1.0, -2.0, -1.0])
    assert cyclic_shift_grid(path, 0).values.tolist() == path.values.tolist()


def test_density_vanishes_below_minus_lambda():
    assert fp_marginal_density(1.0, 0.5, -1.0) == 0.0
    assert fp_marginal_density(1.0, 0.5, -3.0) == 0.0
    assert np.all(fp_marginal_density(1.0, 0.5, np.array([-2.0, -1.5])) == 0.0)


def test_density_domain():
    with pytest.raises(DomainError):
        fp_marginal_density(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        fp_marginal_density(-1.0, 0.5, 0.0)


@pytest.mark.parametrize("lam, s", [(1.0, 0.5), (1.0, 0.25), (2.0, 0.75), (0.5, 0.1)])
def test_density_integrates_to_one(lam, s):
    total, _ = quad(lambda x: fp_marginal_density(lam, s, x), -lam, np.inf, epsabs=1e-10, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_marginal_cdf_is_a_cdf():
    cdf = fp_marginal_cdf(1.0, 0.5)
    grid = np.linspace(-2.0, 10.0, 500)
    values = cdf(grid)
    assert values[0] == 0.0 and values[-1] == pytest.approx(1.0)
    assert np.all(np.diff(values) >= 0)


def test_fp_bridge_marginal_matches_density():
    generator = SeededRng(23).generator()
    values = [sample_fp_bridge(1.0, 1024, generator).at(0.5) for _ in range(3000)]
    threshold = ks_one_sample_threshold(len(values), 1e-3, 0.02)
    assert ks_one_sample(values, fp_marginal_cdf(1.0, 0.5)) < threshold


@pytest.mark.slow
def test_fp_bridge_marginal_matches_density_fine_grid():
    generator = SeededRng(24).generator()
    values = [sample_fp_bridge(1.0, 2 ** 14, generator).at(0.5) for _ in range(20_000)]
    assert ks_one_sample(values, fp_marginal_cdf(1.0, 0.5)) < 0.02


def test_reflect_at_min():
    reflected = reflect_at_min(GridPath(np.array([0.0, 0.5, -0.5, 0.0, -1.0])))
    assert reflected.values.tolist() == [0.0, 0.5, 0.0, 0.5, 0.0]
    rising = GridPath(np.array([0.0, 0.1, 0.4, 0.9]))
    assert reflect_at_min(rising).values.tolist() == rising.values.tolist()
    assert reflect_at_min(GridPath(np.zeros(5))).values.tolist() == [0.0] * 5


def test_excursions_examples():
    two = excursions(GridPath(np.array([0.0, 0.5, 0.0, 0.5, 0.0])), reflected=True)
    assert len(two) == 2
    assert two.lengths == pytest.approx((0.5, 0.5))
    assert two.intervals[0][0] < two.intervals[1][0]
    assert len(excursions(GridPath(np.zeros(9)), reflected=True)) == 0
    bump = excursions(GridPath(np.array([0.0, 1.0, 0.0])), reflected=True)
    assert bump.lengths == pytest.approx((1.0,))


def test_excursion_endpoints_are_interpolated_zeros():
    path = GridPath(np.array([0.0, -0.5, 0.5, -1.0, -2.0]))
    found = excursions(path)
    # reflected values (0, 0, 1, 0, 0): one excursion over (0.25, 0.75)
    assert found.intervals == pytest.approx(((0.25, 0.75),))


def test_open_excursion_at_the_end_is_left_out():
    found = excursions(GridPath(np.array([0.0, 1.0, 0.0, 1.0, 2.0])), reflected=True)
    assert found.lengths == pytest.approx((0.5,))


def test_fp_bridge_excursions_are_ranked():
    generator = SeededRng(29).generator()
    for _ in range(20):
        found = excursions(sample_fp_bridge(1.0, 4096, generator))
        lengths = np.array(found.lengths)
        assert np.all(np.diff(lengths) <= 0)
        assert lengths.sum() <= 1.0 + 1e-12
        assert lengths.sum() > 0.9


def test_excursion_tree_stats():
    assert excursion_tree_stats(ExcursionPath.from_values([0, 1, 0])).height == 1.0
    stats = excursion_tree_stats(ExcursionPath.from_values([0, 0.5, 0.25, 0.75, 0], 0.2, 0.6))
    assert stats.height == 0.75
    assert stats.length == pytest.approx(0.4)
    assert excursion_tree_stats(ExcursionPath.from_values([0, 0, 0])).height == 0.0


def test_restrict_to_excursion():
    path = GridPath(np.array([0.0, 0.5, 0.0, 0.5, 0.0]))
    excursion = restrict_to_excursion(path, (0.5, 1.0))
    assert excursion.times.tolist() == [0.5, 0.75, 1.0]
    assert excursion.values.tolist() == [0.0, 0.5, 0.0]


def test_normalized_excursion(rng):
    e = sample_normalized_excursion(512, rng)
    assert e.values[0] == 0.0 and e.values[-1] == 0.0
    assert e.values.min() >= 0.0 and e.values.max() > 0.0


def test_grid_path_validation():
    with pytest.raises(ForestWiseError):
        GridPath(np.array([0.0, 1.0]))
    with pytest.raises(ForestWiseError):
        GridPath(np.array([1.0, 0.0, 0.0]))
