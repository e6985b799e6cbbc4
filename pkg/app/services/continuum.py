"""
Continuum limit objects on a grid.

Brownian bridges are simulated from Gaussian increments on m cells; the
first-passage bridge F^br_λ is obtained by rotating the bridge to -λ at the
first time it comes within ν of its minimum, ν uniform on [0, λ]. Excursions
of the path reflected at its running minimum are read off the piecewise-linear
interpolant.
"""

import math
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import norm

from app.core.exceptions import DomainError, IndexOutOfRange
from app.core.rng import SeededRng
from app.models.continuum import ExcursionList, ExcursionPath, ExcursionStats, GridPath

RngLike = Union[SeededRng, np.random.Generator]

CDF_GRID_POINTS = 2 ** 16 + 1
CDF_UPPER_MARGIN = 12.0


def _generator(rng: RngLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, SeededRng) else rng


def _bridge_values(l: float, m: int, generator: np.random.Generator) -> np.ndarray:
    walk = np.zeros(m + 1)
    np.cumsum(generator.standard_normal(m) * math.sqrt(1.0 / m), out=walk[1:])
    times = np.linspace(0.0, 1.0, m + 1)
    values = walk - times * (walk[-1] + l)
    values[0] = 0.0
    values[-1] = -l
    return values


def sample_brownian_bridge(l: float, m: int, rng: RngLike) -> GridPath:
    """
    Brownian bridge of duration 1 from 0 to -l on the grid k/m.

    Args:
        l: Endpoint depth, l >= 0
        m: Grid cells, m >= 2
        rng: Random stream
    """
    if l < 0:
        raise DomainError(f"bridge depth must be non-negative, got {l}")
    if m < 2:
        raise DomainError(f"grid needs m >= 2, got {m}")
    return GridPath(_bridge_values(l, m, _generator(rng)))


def cyclic_shift_grid(path: GridPath, u: int) -> GridPath:
    """θ_u on grid paths: increments rotated left by u cells."""
    if not 0 <= u <= path.m:
        raise IndexOutOfRange(f"shift {u} outside 0..{path.m}")
    steps = np.roll(np.diff(path.values), -u)
    values = np.zeros(path.m + 1)
    np.cumsum(steps, out=values[1:])
    values[-1] = path.values[-1]
    return GridPath(values)


def sample_fp_bridge(lam: float, m: int, rng: RngLike) -> GridPath:
    """
    First-passage bridge F^br_λ by rotating B^br_λ.

    The bridge is drawn first, then ν ~ Uniform[0, λ] from the same stream;
    U is the first grid index with value <= min + ν.
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if m < 2:
        raise DomainError(f"grid needs m >= 2, got {m}")
    generator = _generator(rng)
    bridge = GridPath(_bridge_values(lam, m, generator))
    nu = generator.uniform(0.0, lam)
    u = int(np.argmax(bridge.values <= bridge.values.min() + nu))
    return cyclic_shift_grid(bridge, u)


def sample_normalized_excursion(m: int, rng: RngLike) -> GridPath:
    """Normalized Brownian excursion: standard bridge rotated at its minimum."""
    bridge = sample_brownian_bridge(0.0, m, rng)
    shifted = cyclic_shift_grid(bridge, int(np.argmin(bridge.values)))
    # the rotation puts the minimum at both ends; clear rounding below zero
    return GridPath(np.maximum(shifted.values, 0.0))


def fp_marginal_density(lam: float, s: float, x):
    """
    Density of F^br_λ(s) at x.

    [p_s(x) - p_s(x + 2λ)] p'_{1-s}(-λ-x) / p'_1(-λ) for x > -λ and 0 otherwise,
    with p_a the centred Gaussian density of variance a.

    Raises:
        DomainError: If s is outside (0, 1) or λ <= 0
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not 0.0 < s < 1.0:
        raise DomainError(f"time must lie in (0, 1), got {s}")
    x = np.asarray(x, dtype=np.float64)
    killed = norm.pdf(x, scale=math.sqrt(s)) - norm.pdf(x + 2.0 * lam, scale=math.sqrt(s))
    depth = lam + x
    # p'_a(-y) = (y / a) p_a(y)
    hitting = depth / (1.0 - s) * norm.pdf(depth, scale=math.sqrt(1.0 - s))
    density = killed * hitting / (lam * norm.pdf(lam))
    density = np.where(x > -lam, density, 0.0)
    return float(density) if density.ndim == 0 else density


@lru_cache(maxsize=32)
def _cdf_table(lam: float, s: float):
    grid = np.linspace(-lam, lam + CDF_UPPER_MARGIN, CDF_GRID_POINTS)
    cdf = cumulative_trapezoid(fp_marginal_density(lam, s, grid), grid, initial=0.0)
    return grid, cdf / cdf[-1]


def fp_marginal_cdf(lam: float, s: float) -> Callable[[np.ndarray], np.ndarray]:
    """CDF of F^br_λ(s) from cumulative quadrature of the density."""
    grid, cdf = _cdf_table(float(lam), float(s))

    def cdf_fn(x):
        return np.interp(x, grid, cdf, left=0.0, right=1.0)

    return cdf_fn


def reflect_at_min(path: GridPath) -> GridPath:
    """Path minus its running minimum."""
    return GridPath(path.values - np.minimum.accumulate(path.values))


def excursions(path: GridPath, reflected: bool = False) -> ExcursionList:
    """
    Maximal intervals on which the (reflected) interpolant is strictly positive.

    Endpoints are the zeros of the piecewise-linear interpolant. A positive
    stretch still open at time 1 is not an excursion and is left out.

    Args:
        path: Grid path
        reflected: Whether `path` is already reflected at its running minimum
    """
    if not reflected:
        path = reflect_at_min(path)
    v = path.values
    h = 1.0 / path.m
    positive = np.concatenate(([False], v > 0, [False])).astype(np.int8)
    edges = np.diff(positive)
    starts = np.flatnonzero(edges == 1)      # first positive index of a run
    stops = np.flatnonzero(edges == -1) - 1  # last positive index of a run
    closed = stops < path.m
    starts, stops = starts[closed], stops[closed]
    if starts.size == 0:
        return ExcursionList(intervals=())

    # starts >= 1 because v[0] = 0
    # zero of the interpolant in the cell entering and leaving each run
    below, above = v[starts - 1], v[starts]
    left = (starts - 1) * h + h * (-below) / (above - below)
    above, below = v[stops], v[stops + 1]
    right = stops * h + h * above / (above - below)
    lengths = right - left
    order = np.lexsort((left, -lengths))
    return ExcursionList(intervals=tuple(zip(left[order].tolist(), right[order].tolist())))


def restrict_to_excursion(path: GridPath, interval) -> ExcursionPath:
    """Coding function of the excursion on `interval`, zero at both ends."""
    left, right = interval
    times = path.times
    inside = (times > left) & (times < right)
    return ExcursionPath(
        left=left,
        right=right,
        times=np.concatenate(([left], times[inside], [right])),
        values=np.concatenate(([0.0], path.values[inside], [0.0])),
    )


def excursion_tree_stats(excursion: ExcursionPath) -> ExcursionStats:
    """Height (max of the coding function) and mass (length) of the coded real tree."""
    height = float(excursion.values.max()) if excursion.values.size else 0.0
    return ExcursionStats(height=max(height, 0.0), length=excursion.right - excursion.left)


__all__ = [
    "sample_brownian_bridge",
    "cyclic_shift_grid",
    "sample_fp_bridge",
    "sample_normalized_excursion",
    "fp_marginal_density",
    "fp_marginal_cdf",
    "reflect_at_min",
    "excursions",
    "restrict_to_excursion",
    "excursion_tree_stats",
]
