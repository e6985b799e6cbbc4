"""
Goodness-of-fit statistics and their thresholds.

Statistics come from scipy.stats; thresholds are asymptotic quantiles at the
configured significance plus an optional additive margin for grid error.
"""

import math
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from app.core.exceptions import EmptySample


def _nonempty(sample: Sequence[float], name: str) -> np.ndarray:
    values = np.asarray(sample, dtype=np.float64)
    if values.size == 0:
        raise EmptySample(f"{name} is empty")
    return values


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> float:
    """Sup distance between the empirical CDFs of a and b."""
    return float(stats.ks_2samp(_nonempty(a, "first sample"), _nonempty(b, "second sample")).statistic)


def ks_one_sample(a: Sequence[float], cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Sup distance between the empirical CDF of a and `cdf`."""
    return float(stats.kstest(_nonempty(a, "sample"), cdf).statistic)


def chi_square(observed: Sequence[float], expected: Sequence[float]) -> float:
    """Pearson statistic Σ (o - e)² / e."""
    observed = _nonempty(observed, "observed counts")
    expected = _nonempty(expected, "expected counts")
    return float(stats.chisquare(observed, expected).statistic)


def ks_two_sample_threshold(n: int, m: int, alpha: float, margin: float = 0.0) -> float:
    """Asymptotic (1 - alpha) quantile of the two-sample KS statistic, plus margin."""
    return float(stats.kstwobign.ppf(1.0 - alpha)) * math.sqrt((n + m) / (n * m)) + margin


def ks_one_sample_threshold(n: int, alpha: float, margin: float = 0.0) -> float:
    """Exact (1 - alpha) quantile of the one-sample KS statistic for n draws, plus margin."""
    return float(stats.kstwo.ppf(1.0 - alpha, n)) + margin


def chi_square_threshold(cells: int, alpha: float) -> float:
    """(1 - alpha) quantile of chi-square with cells - 1 degrees of freedom."""
    return float(stats.chi2.ppf(1.0 - alpha, cells - 1))


def binomial_se(p, replicates: int):
    """Standard error of a frequency with success probability p (clipped to [0, 1]); elementwise over arrays."""
    p = np.clip(p, 0.0, 1.0)
    return np.sqrt(p * (1.0 - p) / replicates)


def bound_excess(empirical, bound, replicates: int, se_multiplier: float = 3.0) -> np.ndarray:
    """empirical - (bound + k·SE), SE taken at the bound."""
    empirical = np.asarray(empirical, dtype=np.float64)
    bound = np.asarray(bound, dtype=np.float64)
    return empirical - (bound + se_multiplier * binomial_se(bound, replicates))


def one_sided_ok(empirical: float, bound: float, replicates: int, se_multiplier: float = 3.0) -> bool:
    """empirical <= bound + k·SE, SE taken at the bound."""
    return bool(bound_excess(empirical, bound, replicates, se_multiplier) <= 0.0)


__all__ = [
    "ks_two_sample",
    "ks_one_sample",
    "chi_square",
    "ks_two_sample_threshold",
    "ks_one_sample_threshold",
    "chi_square_threshold",
    "binomial_se",
    "bound_excess",
    "one_sided_ok",
]
