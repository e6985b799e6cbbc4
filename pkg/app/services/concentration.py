"""
Concentration experiments.

Empirical frequencies of the tail events covered by the closed-form bounds
in app.services.bounds, plus the small-tree height event. Bound checks are
one-sided: a frequency may sit below its bound by any amount.
"""

import math
from functools import partial
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from app.core.exceptions import DomainError, NotATree
from app.core.pool import ReplicatePool
from app.core.rng import SeededRng, StreamPurpose
from app.models.degrees import DegreeSequence
from app.models.report import ExperimentConfig, ExperimentReport
from app.services.bounds import (
    bad_event_bound,
    bad_event_condition,
    height_tail_bound,
    martingale_bound,
    tree_variance_bound,
    variance_tail_bound,
)
from app.services.families import all_degree_sequences, resolve_family
from app.services.forests import forest_profile, tree_ends
from app.services.harness import ReportBuilder
from app.services.sampler import cached_sampler

EXHAUSTIVE_MAX_DEGREE = 5


def _forest_increments(degrees: DegreeSequence, seed: int, index: int) -> np.ndarray:
    generator = SeededRng.for_replicate(seed, StreamPurpose.FOREST, index).generator()
    return cached_sampler(degrees).first_passage_increments(generator)


def _permutation(degrees: DegreeSequence, seed: int, index: int) -> np.ndarray:
    generator = SeededRng.for_replicate(seed, StreamPurpose.PERMUTATION, index).generator()
    return generator.permutation(degrees.child_array())


def _tree_slices(increments: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    ends = tree_ends(increments)
    starts = np.concatenate(([0], ends[:-1]))
    return starts, ends - starts


# Replicate tasks

def tree_height_replicate(degrees: DegreeSequence, seed: int, index: int) -> int:
    """Height of one uniform tree with degree sequence `degrees`."""
    increments = _forest_increments(degrees, seed, index)
    return int(forest_profile((increments + 1).tolist()).heights[0])


def partial_sums_replicate(degrees: DegreeSequence, seed: int, ks: Sequence[int], index: int) -> np.ndarray:
    """S_k = Σ_{i<=k} C_i² at each k for one uniform permutation C of d(s)."""
    squares = np.cumsum(_permutation(degrees, seed, index) ** 2)
    return squares[np.asarray(ks) - 1]


def tree_variance_replicate(degrees: DegreeSequence, seed: int, alphas: Sequence[float],
                            lambdas: Sequence[float], index: int) -> np.ndarray:
    """
    Indicators of {∃T: |T| <= αn, σ²(T) >= λασ²(s)} over the (α, λ) grid.
    """
    increments = _forest_increments(degrees, seed, index)
    starts, sizes = _tree_slices(increments)
    sigma2 = np.add.reduceat((increments + 1) ** 2, starts)
    total = degrees.stats().sigma2_s
    n = degrees.n
    return np.array([
        [bool(np.any((sizes <= a * n) & (sigma2 >= lam * a * total))) for lam in lambdas]
        for a in alphas
    ])


def proportion_replicate(degrees: DegreeSequence, seed: int, windows: Sequence[int], epsilon: float,
                         index: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Deviations of the remaining degree proportions on one uniform permutation.

    For each degree i of s and each window s' in `windows`:
    max_{0<=j<=n-s'} |q - X_j/(n-j)|, X_j the copies of i not among the first
    j entries and q = s^(i)/n. Also flags B^{ε,i}: some x >= log³ n with
    |Y_x - qx| >= εx, Y_x the copies of i among the first x entries.
    """
    perm = _permutation(degrees, seed, index)
    n = degrees.n
    remaining = n - np.arange(n + 1)
    x = np.arange(1, n + 1)
    late = x >= math.log(n) ** 3
    deviations = np.zeros((len(degrees.counts), len(windows)))
    bad = np.zeros(len(degrees.counts), dtype=bool)
    for row, (degree, count) in enumerate(degrees.counts):
        q = count / n
        seen = np.concatenate(([0], np.cumsum(perm == degree)))
        left = count - seen
        for col, window in enumerate(windows):
            stop = n - window + 1
            deviations[row, col] = np.abs(q - left[:stop] / remaining[:stop]).max()
        bad[row] = bool(np.any(np.abs(seen[1:] - q * x)[late] >= epsilon * x[late]))
    return deviations, bad


def largest_tree_degrees_replicate(degrees: DegreeSequence, seed: int, index: int) -> np.ndarray:
    """|p^(i)_1 - p^(i)| for each degree i of s, p_1 the degree proportions of the largest tree."""
    increments = _forest_increments(degrees, seed, index)
    starts, sizes = _tree_slices(increments)
    k = int(np.argmax(sizes))
    children = increments[starts[k]:starts[k] + sizes[k]] + 1
    histogram = np.bincount(children, minlength=degrees.delta + 1)
    present = np.array([i for i, _ in degrees.counts])
    expected = np.array([c for _, c in degrees.counts]) / degrees.n
    return np.abs(histogram[present] / sizes[k] - expected)


def small_trees_replicate(degrees: DegreeSequence, seed: int, betas: Sequence[float], index: int) -> np.ndarray:
    """Indicators of {∃T: |T| < βn, h(T) > β^(1/8)√n} for each β."""
    increments = _forest_increments(degrees, seed, index)
    profile = forest_profile((increments + 1).tolist())
    n = degrees.n
    return np.array([
        bool(np.any((profile.sizes < b * n) & (profile.heights > b ** 0.125 * math.sqrt(n)))) for b in betas
    ])


def _tag(s: DegreeSequence) -> str:
    return f"n{s.n}"


def _sequences(cfg: ExperimentConfig) -> List[DegreeSequence]:
    return [resolve_family(cfg.degree_family, n, cfg.lambda_target) for n in cfg.n_list]


def exp_height_tail(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Survival P(h(T(s)) >= m) of uniform trees against 7exp(-m²/(608σ²(s)1_s²)).

    Raises:
        NotATree: If the family gives a sequence with c(s) != 1
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("height_tail", cfg.model_dump(mode="json"))

    for s in _sequences(cfg):
        if s.c != 1:
            raise NotATree(f"height_tail needs single-tree sequences, got c(s) = {s.c}")
        tag = _tag(s)
        report.parameter(f"degrees_{tag}", str(s))
        logger.info(f"height_tail at n={s.n}: {cfg.replicates} trees")
        try:
            heights = np.array(pool.map(partial(tree_height_replicate, s, cfg.seed), range(cfg.replicates),
                                        desc="trees"))
        except Exception as e:
            logger.error(f"height_tail sampling failed at n={s.n}: {e}")
            raise

        top = max(float(heights.max()) + 1.0, 3.0 * math.sqrt(s.n))
        grid = np.unique(np.round(np.linspace(0.0, top, cfg.height_grid_points)))
        empirical = np.array([np.mean(heights >= m) for m in grid])
        bounds = np.array([height_tail_bound(s, float(m)) for m in grid])
        report.check_bound_grid(f"{tag}_height_tail", empirical, bounds, cfg.replicates, cfg.se_multiplier)
        report.statistic(f"{tag}_height_mean", float(heights.mean()))
        report.statistic(f"{tag}_height_mean_over_sqrt_n", float(heights.mean()) / math.sqrt(s.n))
        report.table(f"height_tail_{tag}", {"m": grid, "empirical": empirical, "bound": bounds})

    return report.build()


def exhaustive_variance_excess(max_n: int, lambdas: Sequence[float],
                               max_degree: int = EXHAUSTIVE_MAX_DEGREE) -> Tuple[float, int]:
    """
    Largest P(S_k >= λ(k/n)S_n) - bound over every child sequence d(s) with
    n(s) <= max_n and a positive child count, every k and every λ >= 2.

    The first k entries of a uniform permutation are a uniform k-subset of
    positions, so each probability is an exact average over subsets.

    Returns:
        (largest excess, number of (s, k, λ) cases)
    """
    worst = -math.inf
    cases = 0
    subsets: Dict[Tuple[int, int], np.ndarray] = {}
    for s in all_degree_sequences(max_n, max_degree):
        if s.delta == 0:
            continue
        children = s.child_array()
        squares = children ** 2
        n = s.n
        total = int(squares.sum())
        for k in range(1, n + 1):
            if (n, k) not in subsets:
                subsets[(n, k)] = np.array(list(combinations(range(n), k)), dtype=np.int64)
            partial_sums = squares[subsets[(n, k)]].sum(axis=1)
            for lam in lambdas:
                probability = float(np.mean(partial_sums * n >= lam * k * total))
                worst = max(worst, probability - variance_tail_bound(children.tolist(), k, lam))
                cases += 1
    return (worst if cases else 0.0), cases


def exp_variance_bound(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    P(S_k >= λ(k/n)S_n) against exp(-(3σ²(c)/16n)(λk/Δ²)), exhaustively for
    small n and by Monte Carlo on the configured family; then the per-tree
    bound (2/α)exp(-3Mλ/16) on sampled forests.
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("variance_bound", cfg.model_dump(mode="json"))
    lambdas = [lam for lam in cfg.lambda_grid if lam >= 2]
    if len(lambdas) < len(cfg.lambda_grid):
        logger.warning("variance_bound: lambda values below 2 are outside the bound and were dropped")

    worst, cases = exhaustive_variance_excess(cfg.exhaustive_max_n, lambdas)
    report.statistic("exhaustive_cases", cases)
    report.check("exhaustive_variance_bound", worst, "exact_excess_tolerance", 0.0, "<=")

    for s in _sequences(cfg):
        tag = _tag(s)
        n = s.n
        report.parameter(f"degrees_{tag}", str(s))
        ks = sorted({min(n, max(1, round(f * n))) for f in cfg.k_fractions})
        logger.info(f"variance_bound at n={n}: k in {ks}")
        try:
            sums = np.array(pool.map(partial(partial_sums_replicate, s, cfg.seed, ks), range(cfg.replicates),
                                     desc="permutations"))
        except Exception as e:
            logger.error(f"variance_bound sampling failed at n={n}: {e}")
            raise

        total = s.stats().sigma2_s
        children = s.child_vector()
        empirical = np.array([[np.mean(sums[:, a] * n >= lam * k * total) for lam in lambdas]
                              for a, k in enumerate(ks)])
        bounds = np.array([[variance_tail_bound(children, k, lam) for lam in lambdas] for k in ks])
        report.check_bound_grid(f"{tag}_variance_bound", empirical, bounds, cfg.replicates, cfg.se_multiplier)
        report.table(f"variance_bound_{tag}", {
            "k": [k for k in ks for _ in lambdas],
            "lambda": [lam for _ in ks for lam in lambdas],
            "empirical": empirical.ravel(),
            "bound": bounds.ravel(),
        })

        tree_lambdas = [lam for lam in lambdas if lam >= 4]
        alphas = [a for a in cfg.alpha_grid if a > s.delta ** 2 / n]
        if not tree_lambdas or not alphas:
            logger.warning(f"variance_bound at n={n}: no (alpha, lambda) pair satisfies the tree bound")
            continue
        try:
            events = np.array(pool.map(partial(tree_variance_replicate, s, cfg.seed, alphas, tree_lambdas),
                                       range(cfg.replicates), desc="forests"))
        except Exception as e:
            logger.error(f"variance_bound forest sampling failed at n={n}: {e}")
            raise
        second_moment = total / n
        tree_empirical = events.mean(axis=0)
        tree_bounds = np.array([[tree_variance_bound(a, lam, second_moment) for lam in tree_lambdas]
                                for a in alphas])
        report.check_bound_grid(f"{tag}_tree_variance_bound", tree_empirical, tree_bounds,
                                cfg.replicates, cfg.se_multiplier)
        report.table(f"tree_variance_bound_{tag}", {
            "alpha": [a for a in alphas for _ in tree_lambdas],
            "lambda": [lam for _ in alphas for lam in tree_lambdas],
            "empirical": tree_empirical.ravel(),
            "bound": tree_bounds.ravel(),
        })

    return report.build()


def exp_degree_concentration(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Concentration of degree proportions.

    Checks the martingale bound exp(-3st²/(3+2t)) and the B^{ε,i} bound n^-3
    on uniform permutations of d(s), and reports how far the degree
    proportions of the largest tree of a sampled forest are from s/n.
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("degree_concentration", cfg.model_dump(mode="json"))
    medians = []

    for s in _sequences(cfg):
        tag = _tag(s)
        n = s.n
        report.parameter(f"degrees_{tag}", str(s))
        windows = [w for w in cfg.s_grid if 0 < w < n]
        if len(windows) < len(cfg.s_grid):
            logger.warning(f"degree_concentration at n={n}: windows >= n dropped")
        loose = [(w, t) for w in windows for t in cfg.t_grid if w * t * t < 0.25]
        if loose:
            logger.warning(f"degree_concentration: (s, t) pairs {loose} have st² < 1/4, "
                           f"where the two-sided bound is close to its limit")
        if not bad_event_condition(n, cfg.epsilon):
            logger.warning(f"degree_concentration: epsilon = {cfg.epsilon} is not above √5/log n at n={n}; "
                           f"n^-3 is reported as a reference only")

        try:
            results = pool.map(partial(proportion_replicate, s, cfg.seed, windows, cfg.epsilon),
                               range(cfg.replicates), desc="permutations")
            largest = np.array(pool.map(partial(largest_tree_degrees_replicate, s, cfg.seed),
                                        range(cfg.replicates), desc="forests"))
        except Exception as e:
            logger.error(f"degree_concentration sampling failed at n={n}: {e}")
            raise

        deviations = np.array([r[0] for r in results])
        bad = np.array([r[1] for r in results])
        degrees = [i for i, _ in s.counts]

        empirical = np.array([[[np.mean(deviations[:, row, col] >= t) for t in cfg.t_grid]
                               for col in range(len(windows))] for row in range(len(degrees))])
        bounds = np.array([[[martingale_bound(w, t) for t in cfg.t_grid] for w in windows]
                           for _ in degrees])
        report.check_bound_grid(f"{tag}_martingale_bound", empirical, bounds, cfg.replicates, cfg.se_multiplier)
        report.table(f"martingale_bound_{tag}", {
            "degree": [i for i in degrees for _ in windows for _ in cfg.t_grid],
            "s": [w for _ in degrees for w in windows for _ in cfg.t_grid],
            "t": [t for _ in degrees for _ in windows for t in cfg.t_grid],
            "empirical": empirical.ravel(),
            "bound": bounds.ravel(),
        })

        bad_frequency = bad.mean(axis=0)
        bad_bound = np.full(len(degrees), bad_event_bound(n, cfg.epsilon, strict=False))
        report.check_bound_grid(f"{tag}_bad_event_bound", bad_frequency, bad_bound,
                                cfg.replicates, cfg.se_multiplier)
        report.table(f"bad_event_{tag}", {"degree": degrees, "frequency": bad_frequency, "bound": bad_bound})

        worst = largest.max(axis=1)
        medians.append(float(np.median(worst)))
        report.statistic(f"{tag}_largest_tree_deviation_median", medians[-1])
        report.statistic(f"{tag}_largest_tree_deviation_q90", float(np.quantile(worst, 0.9)))
        levels = np.array([0.1, 0.25, 0.5, 0.75, 0.9])
        report.table(f"largest_tree_deviation_{tag}", {
            "quantile": levels,
            **{f"degree_{i}": np.quantile(largest[:, row], levels) for row, i in enumerate(degrees)},
        })

    if len(medians) > 1:
        report.check("largest_tree_deviation_shrinks", medians[-1], "largest_tree_deviation_median_first_n",
                     medians[0], "<=")

    return report.build()


def exp_small_tree_heights(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Frequency of {∃T: |T| < βn, h(T) > β^(1/8)√n} over a grid of β.

    The verdict asks the frequency at the smallest β to be below ρ.

    Raises:
        DomainError: If Δ(s) > n^((1-ε)/2) for ε = delta_exponent
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("small_tree_heights", cfg.model_dump(mode="json"))
    betas = sorted(cfg.beta_grid)

    for s in _sequences(cfg):
        tag = _tag(s)
        n = s.n
        if s.delta > n ** ((1.0 - cfg.delta_exponent) / 2.0):
            raise DomainError(f"Δ(s) = {s.delta} exceeds n^((1-ε)/2) at n={n}, ε={cfg.delta_exponent}")
        report.parameter(f"degrees_{tag}", str(s))
        logger.info(f"small_tree_heights at n={n}: beta in {betas}")
        try:
            events = np.array(pool.map(partial(small_trees_replicate, s, cfg.seed, betas), range(cfg.replicates),
                                       desc="forests"))
        except Exception as e:
            logger.error(f"small_tree_heights sampling failed at n={n}: {e}")
            raise

        frequencies = events.mean(axis=0)
        steps = np.diff(frequencies)
        report.statistic(f"{tag}_frequency_monotone", float(np.all(steps >= 0)))
        report.statistic(f"{tag}_frequency_max_decrease", float(max(0.0, -steps.min())) if steps.size else 0.0)
        report.check(f"{tag}_smallest_beta", float(frequencies[0]), "rho", cfg.rho, "<")
        report.table(f"small_tree_heights_{tag}", {"beta": betas, "frequency": frequencies})

    return report.build()


__all__ = [
    "tree_height_replicate",
    "partial_sums_replicate",
    "tree_variance_replicate",
    "proportion_replicate",
    "largest_tree_degrees_replicate",
    "small_trees_replicate",
    "exhaustive_variance_excess",
    "exp_height_tail",
    "exp_variance_bound",
    "exp_degree_concentration",
    "exp_small_tree_heights",
]
