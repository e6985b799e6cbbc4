"""
Metric geometry of rescaled trees.

Exact rooted Gromov-Hausdorff distance on small spaces by branch and bound over
correspondences, the coding-function upper bound on the GHP distance between
the real trees coded by two functions, and the discrete coupling bounds between
a rescaled plane tree and the real tree coded by its contour.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.sparse.csgraph import shortest_path

from app.config import settings
from app.core.exceptions import DomainError, TooLarge
from app.models.continuum import GridPath
from app.models.forests import PlaneTree
from app.models.metric import FiniteMetricMeasureSpace
from app.services.forests import contour_function, tree_graph


@dataclass(frozen=True, eq=False)
class CodingFunction:
    """Non-negative piecewise-linear function through (times, values), zero outside."""
    times: np.ndarray
    values: np.ndarray

    @classmethod
    def from_grid_path(cls, path: GridPath) -> "CodingFunction":
        return cls(times=path.times, values=np.asarray(path.values))

    @property
    def support_end(self) -> float:
        """σ_f = sup{t: f(t) > 0}."""
        positive = np.flatnonzero(self.values > 0)
        if positive.size == 0:
            return 0.0
        last = positive[-1]
        return float(self.times[min(last + 1, self.times.size - 1)])

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.times, self.values, left=0.0, right=0.0)


@dataclass(frozen=True)
class CouplingBounds:
    """Hausdorff distance and Prokhorov upper bound between a tree and its contour tree."""
    d_H: float
    d_P_bound: float


def scaled_tree_space(tree: PlaneTree, n_total: int, sigma_p: float) -> FiniteMetricMeasureSpace:
    """
    Vertices of `tree` with graph distance times σ/(2√n_total) and mass 1/n_total each.
    """
    if n_total < tree.size:
        raise DomainError(f"n_total = {n_total} is smaller than the tree ({tree.size})")
    if sigma_p <= 0:
        raise DomainError(f"sigma must be positive, got {sigma_p}")
    scale = sigma_p / (2.0 * math.sqrt(n_total))
    if tree.size == 1:
        distances = np.zeros((1, 1))
    else:
        distances = shortest_path(tree_graph(tree).tocsr(), unweighted=True, directed=False)
    return FiniteMetricMeasureSpace.trusted(
        distance_matrix=distances * scale,
        root=0,
        masses=np.full(tree.size, 1.0 / n_total),
    )


def distortion(a: FiniteMetricMeasureSpace, b: FiniteMetricMeasureSpace,
               pairs: Sequence[Tuple[int, int]]) -> float:
    """max |d_a(x, x') - d_b(y, y')| over pairs (x, y), (x', y') of the relation."""
    xs = np.array([x for x, _ in pairs])
    ys = np.array([y for _, y in pairs])
    return float(np.abs(a.distance_matrix[np.ix_(xs, xs)] - b.distance_matrix[np.ix_(ys, ys)]).max())


class _CorrespondenceSearch:
    """Branch and bound over correspondences that pair the roots."""

    def __init__(self, a: FiniteMetricMeasureSpace, b: FiniteMetricMeasureSpace):
        self.da = a.distance_matrix
        self.db = b.distance_matrix
        self.ra, self.rb = a.root, b.root
        others_a = [x for x in range(a.size) if x != a.root]
        others_b = [y for y in range(b.size) if y != b.root]

        # every point of a needs a partner in b and vice versa; try partners at
        # a similar distance from the root first
        self.decisions: List[Tuple[int, List[int], bool]] = []
        for x in others_a:
            options = sorted(range(b.size), key=lambda y: abs(self.da[x, a.root] - self.db[y, b.root]))
            self.decisions.append((x, options, True))
        for y in others_b:
            options = sorted(range(a.size), key=lambda x: abs(self.da[x, a.root] - self.db[y, b.root]))
            self.decisions.append((y, options, False))

        # pair everything with the other root: a valid correspondence to start from
        start = [(a.root, b.root)] + [(x, b.root) for x in others_a] + [(a.root, y) for y in others_b]
        self.best = distortion(a, b, start)
        self.nodes = 0

    def run(self) -> float:
        self._extend(0, [self.ra], [self.rb], 0.0)
        return self.best

    def _extend(self, depth: int, xs: List[int], ys: List[int], current: float) -> None:
        self.nodes += 1
        if depth == len(self.decisions):
            self.best = current
            return
        point, options, from_a = self.decisions[depth]
        for partner in options:
            x, y = (point, partner) if from_a else (partner, point)
            worst = max(current, float(np.abs(self.da[x, xs] - self.db[y, ys]).max()))
            if worst >= self.best:
                continue
            xs.append(x)
            ys.append(y)
            self._extend(depth + 1, xs, ys, worst)
            xs.pop()
            ys.pop()
            if self.best == 0.0:
                return


def rooted_gh_exact(a: FiniteMetricMeasureSpace, b: FiniteMetricMeasureSpace,
                    cap: Optional[int] = None) -> float:
    """
    Exact rooted Gromov-Hausdorff distance: half the least distortion of a
    correspondence containing the root pair. Masses are ignored.

    Raises:
        TooLarge: If either space has more than `cap` points
    """
    cap = settings.exact_gh_cap if cap is None else cap
    if a.size > cap or b.size > cap:
        raise TooLarge(f"exact GH search is limited to {cap} points, got {a.size} and {b.size}")
    search = _CorrespondenceSearch(a, b)
    best = search.run()
    logger.debug(f"GH search on {a.size}x{b.size} points visited {search.nodes} nodes")
    return best / 2.0


def ghp_coding_bound(f: CodingFunction, g: CodingFunction) -> float:
    """
    6‖f - g‖∞ + |σ_f - σ_g|, the sup norm taken exactly on the merged breakpoints.
    """
    breakpoints = np.union1d(f.times, g.times)
    sup_norm = float(np.abs(f(breakpoints) - g(breakpoints)).max())
    return 6.0 * sup_norm + abs(f.support_end - g.support_end)


def contour_coding_function(tree: PlaneTree, n_total: int, sigma_p: float) -> CodingFunction:
    """Contour of `tree` with time scaled by 1/(2 n_total) and height by σ/(2√n_total)."""
    contour = contour_function(tree)
    steps = contour.n
    return CodingFunction(
        times=np.arange(steps + 1) / (2.0 * n_total),
        values=contour.values * (sigma_p / (2.0 * math.sqrt(n_total))),
    )


def discrete_coupling_bounds(n: int, sigma_p: float) -> CouplingBounds:
    """d_H = σ/(4√n) and d_P <= 1/n + σ/(2√n)."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if sigma_p < 0:
        raise DomainError(f"sigma must be non-negative, got {sigma_p}")
    root_n = math.sqrt(n)
    return CouplingBounds(d_H=sigma_p / (4.0 * root_n), d_P_bound=1.0 / n + sigma_p / (2.0 * root_n))


__all__ = [
    "CodingFunction",
    "CouplingBounds",
    "scaled_tree_space",
    "distortion",
    "rooted_gh_exact",
    "ghp_coding_bound",
    "contour_coding_function",
    "discrete_coupling_bounds",
]
