"""
Convergence experiments.

Sampled forests are compared with simulated continuum objects: walk
marginals with the first-passage bridge F^br_λ, ranked tree sizes with ranked
excursion lengths, and the height of the largest tree with the height of the
tree coded by a scaled Brownian excursion. All comparisons are two-sample or
one-sample KS tests on unconditional laws.
"""

import math
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.stats import norm

from app.core.pool import ReplicatePool
from app.core.rng import SeededRng, StreamPurpose
from app.models.degrees import DegreeSequence
from app.models.report import ExperimentConfig, ExperimentReport
from app.services.continuum import (
    excursion_tree_stats,
    excursions,
    fp_marginal_cdf,
    fp_marginal_density,
    reflect_at_min,
    restrict_to_excursion,
    sample_fp_bridge,
    sample_normalized_excursion,
)
from app.services.families import resolve_family, walk_scaling
from app.services.forests import forest_profile, tree_ends
from app.services.ghp import discrete_coupling_bounds
from app.services.harness import ReportBuilder
from app.services.paths import rotate_array
from app.services.sampler import cached_sampler
from app.services.statistics import (
    ks_one_sample,
    ks_one_sample_threshold,
    ks_two_sample,
    ks_two_sample_threshold,
)

DENSITY_POINTS = 200


def _forest_generator(seed: int, index: int) -> np.random.Generator:
    return SeededRng.for_replicate(seed, StreamPurpose.FOREST, index).generator()


def _continuum_rng(seed: int, index: int) -> SeededRng:
    return SeededRng.for_replicate(seed, StreamPurpose.CONTINUUM, index)


def _ranked(sizes: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros(k)
    top = np.sort(sizes)[::-1][:k]
    out[:top.size] = top
    return out


# Replicate tasks. Module level so worker processes can unpickle them.

def walk_replicate(degrees: DegreeSequence, seed: int, indices: Sequence[int],
                   index: int) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Walk values of one sampled forest and of the bridge it was rotated from.

    Returns:
        (first-passage values at `indices`, bridge values at `indices`, endpoint)
    """
    generator = _forest_generator(seed, index)
    sampler = cached_sampler(degrees)
    bridge = sampler.permuted_increments(generator)
    nu = int(generator.integers(0, sampler.c))
    first_passage = rotate_array(bridge, nu)
    fp_walk = np.concatenate(([0], np.cumsum(first_passage)))
    bridge_walk = np.concatenate(([0], np.cumsum(bridge)))
    return fp_walk[list(indices)], bridge_walk[list(indices)], int(fp_walk[-1])


def continuum_walk_replicate(lam: float, m: int, times: Sequence[float], seed: int, index: int) -> np.ndarray:
    path = sample_fp_bridge(lam, m, _continuum_rng(seed, index))
    return np.array([path.at(t) for t in times])


def tree_sizes_replicate(degrees: DegreeSequence, seed: int, ranks: int, index: int) -> Tuple[np.ndarray, int]:
    """Largest `ranks` tree sizes of one sampled forest and the total of all sizes."""
    increments = cached_sampler(degrees).first_passage_increments(_forest_generator(seed, index))
    sizes = np.diff(np.concatenate(([0], tree_ends(increments))))
    return _ranked(sizes, ranks), int(sizes.sum())


def ranked_lengths_replicate(lam: float, m: int, ranks: int, seed: int, purpose: StreamPurpose,
                             index: int) -> Tuple[np.ndarray, float]:
    """Ranked excursion lengths of one F^br_λ draw and their total."""
    path = sample_fp_bridge(lam, m, SeededRng.for_replicate(seed, purpose, index))
    found = excursions(path)
    return found.ranked_lengths(ranks), float(sum(found.lengths))


def largest_tree_replicate(degrees: DegreeSequence, seed: int, index: int) -> Tuple[int, int, int, int]:
    """
    Size, height, maximal degree and walk-excursion height of the largest tree.

    Ties on size go to the earliest tree.
    """
    increments = cached_sampler(degrees).first_passage_increments(_forest_generator(seed, index))
    profile = forest_profile((increments + 1).tolist())
    k = int(np.argmax(profile.sizes))
    start = int(profile.sizes[:k].sum())
    end = start + int(profile.sizes[k])
    walk = np.concatenate(([0], np.cumsum(increments)))
    excursion_height = int(walk[start:end + 1].max() - walk[start])
    return int(profile.sizes[k]), int(profile.heights[k]), int(profile.max_degrees[k]), excursion_height


def largest_excursion_replicate(lam: float, m: int, seed: int, index: int) -> Tuple[float, float, float]:
    """
    Continuum counterpart of largest_tree_replicate.

    Returns:
        (|γ₁|, √|γ₁|·max e for an independent normalized excursion e,
         height of the reflected F^br_λ on γ₁)
    """
    reflected = reflect_at_min(sample_fp_bridge(lam, m, _continuum_rng(seed, index)))
    found = excursions(reflected, reflected=True)
    if not len(found):
        return 0.0, 0.0, 0.0
    interval = found.intervals[0]
    direct = excursion_tree_stats(restrict_to_excursion(reflected, interval))
    excursion = sample_normalized_excursion(m, SeededRng.for_replicate(seed, StreamPurpose.EXCURSION, index))
    return direct.length, math.sqrt(direct.length) * float(excursion.values.max()), direct.height


def _tag(s: DegreeSequence) -> str:
    return f"n{s.n}"


def _sequences(cfg: ExperimentConfig) -> List[DegreeSequence]:
    return [resolve_family(cfg.degree_family, n, cfg.lambda_target) for n in cfg.n_list]


def _record_sequence(report: ReportBuilder, s: DegreeSequence) -> None:
    tag = _tag(s)
    scaling = walk_scaling(s)
    report.parameter(f"degrees_{tag}", str(s))
    report.statistic(f"{tag}_c", s.c)
    report.statistic(f"{tag}_sigma", scaling.sigma)
    report.statistic(f"{tag}_lambda", scaling.lam)


def exp_walk_convergence(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Scaled walk marginals of uniform forests against F^br_λ.

    For each time t < 1: two-sample KS against simulated F^br_λ(t), one-sample
    KS against the exact marginal law of F^br_λ(t), and one-sample KS of the
    pre-rotation bridge against N(-λt, t(1-t)). At every t the scaled endpoint
    must equal -c/(σ√n) exactly.
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("walk_convergence", cfg.model_dump(mode="json"))
    draws = cfg.continuum_draws

    for s in _sequences(cfg):
        tag = _tag(s)
        scaling = walk_scaling(s)
        _record_sequence(report, s)
        logger.info(f"walk_convergence at n={s.n}: {cfg.replicates} forests, {draws} continuum draws")
        indices = [int(math.floor(t * s.n)) for t in cfg.times]

        try:
            forests = pool.map(partial(walk_replicate, s, cfg.seed, indices), range(cfg.replicates), desc="forests")
            continuum = pool.map(
                partial(continuum_walk_replicate, scaling.lam, cfg.grid_m, cfg.times, cfg.seed),
                range(draws),
                desc="bridges",
            )
        except Exception as e:
            logger.error(f"walk_convergence sampling failed at n={s.n}: {e}")
            raise

        fp_values = np.array([r[0] for r in forests], dtype=np.float64) / scaling.scale
        bridge_values = np.array([r[1] for r in forests], dtype=np.float64) / scaling.scale
        endpoints = np.array([r[2] for r in forests])
        continuum_values = np.array(continuum)

        report.check(f"{tag}_endpoint_identity", float(np.abs(endpoints + s.c).max()),
                     "endpoint_tolerance", 0.0, "==")
        two_sample_limit = ks_two_sample_threshold(cfg.replicates, draws, cfg.ks_alpha, cfg.ks_grid_margin)
        one_sample_limit = ks_one_sample_threshold(cfg.replicates, cfg.ks_alpha, cfg.ks_grid_margin)

        rows = {"time": [], "ks_two_sample": [], "ks_exact_marginal": [], "ks_bridge": []}
        for j, t in enumerate(cfg.times):
            if t >= 1.0:
                continue
            two_sample = ks_two_sample(fp_values[:, j], continuum_values[:, j])
            exact = ks_one_sample(fp_values[:, j], fp_marginal_cdf(scaling.lam, t))
            bridge_law = norm(loc=-scaling.lam * t, scale=math.sqrt(t * (1.0 - t)))
            bridge = ks_one_sample(bridge_values[:, j], bridge_law.cdf)

            report.check(f"{tag}_t{t}_two_sample", two_sample, f"ks_two_sample_threshold_{tag}", two_sample_limit, "<")
            report.check(f"{tag}_t{t}_exact_marginal", exact, f"ks_one_sample_threshold_{tag}", one_sample_limit, "<")
            report.check(f"{tag}_t{t}_bridge", bridge, f"ks_one_sample_threshold_{tag}", one_sample_limit, "<")
            for key, value in (("time", t), ("ks_two_sample", two_sample), ("ks_exact_marginal", exact),
                               ("ks_bridge", bridge)):
                rows[key].append(value)

            grid = np.linspace(-scaling.lam, max(3.0, float(fp_values[:, j].max())), DENSITY_POINTS)
            histogram, edges = np.histogram(fp_values[:, j], bins=grid, density=True)
            centres = 0.5 * (edges[1:] + edges[:-1])
            report.table(f"density_{tag}_t{t}", {
                "x": centres,
                "density": fp_marginal_density(scaling.lam, t, centres),
                "empirical": histogram,
            })
        report.table(f"ks_{tag}", rows)

    return report.build()


def exp_tree_sizes(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Ranked normalized tree sizes against ranked excursion lengths of F^br_λ.

    Also checks that tree sizes add up to n in every replicate and that the
    continuum excursion lengths add up to at least `excursion_sum_floor` in a
    fraction `excursion_sum_fraction` of fine-grid draws.
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("tree_sizes", cfg.model_dump(mode="json"))
    draws = cfg.continuum_draws

    for s in _sequences(cfg):
        tag = _tag(s)
        scaling = walk_scaling(s)
        _record_sequence(report, s)
        logger.info(f"tree_sizes at n={s.n}: ranks 1..{cfg.ranks}")

        try:
            forests = pool.map(partial(tree_sizes_replicate, s, cfg.seed, cfg.ranks),
                               range(cfg.replicates), desc="forests")
            continuum = pool.map(
                partial(ranked_lengths_replicate, scaling.lam, cfg.grid_m, cfg.ranks, cfg.seed,
                        StreamPurpose.CONTINUUM),
                range(draws),
                desc="bridges",
            )
            fine = pool.map(
                partial(ranked_lengths_replicate, scaling.lam, cfg.excursion_grid_m, cfg.ranks, cfg.seed,
                        StreamPurpose.EXCURSION),
                range(cfg.excursion_replicates),
                desc="fine bridges",
            )
        except Exception as e:
            logger.error(f"tree_sizes sampling failed at n={s.n}: {e}")
            raise

        sizes = np.array([r[0] for r in forests]) / s.n
        totals = np.array([r[1] for r in forests])
        lengths = np.array([r[0] for r in continuum])
        fine_sums = np.array([r[1] for r in fine])

        report.check(f"{tag}_sizes_sum_to_n", int(np.count_nonzero(totals != s.n)), "allowed_failures", 0, "==")
        limit = ks_two_sample_threshold(cfg.replicates, draws, cfg.ks_alpha, cfg.ks_grid_margin)
        rows = {"rank": [], "ks": [], "forest_mean": [], "continuum_mean": []}
        for l in range(cfg.ranks):
            ks = ks_two_sample(sizes[:, l], lengths[:, l])
            report.check(f"{tag}_rank{l + 1}", ks, f"ks_two_sample_threshold_{tag}", limit, "<")
            rows["rank"].append(l + 1)
            rows["ks"].append(ks)
            rows["forest_mean"].append(float(sizes[:, l].mean()))
            rows["continuum_mean"].append(float(lengths[:, l].mean()))
        report.table(f"ranked_sizes_{tag}", rows)

        covered = float(np.mean(fine_sums >= cfg.excursion_sum_floor))
        report.statistic(f"{tag}_excursion_sum_mean", float(fine_sums.mean()))
        report.check(f"{tag}_excursion_sums", covered, "excursion_sum_fraction", cfg.excursion_sum_fraction, ">=")

        quantiles = np.linspace(0.0, 1.0, 101)
        report.table(f"largest_size_quantiles_{tag}", {
            "quantile": quantiles,
            "forest": np.quantile(sizes[:, 0], quantiles),
            "continuum": np.quantile(lengths[:, 0], quantiles),
        })

    return report.build()


def exp_largest_tree_scaling(cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Rescaled largest tree against the tree coded by a scaled excursion.

    The height h·σ/(2√n) of the largest tree is compared with √|γ₁|·max e,
    e an independent normalized excursion. The height of the largest walk
    excursion, scaled by 1/(σ√n), is compared with the height of the reflected
    F^br_λ on γ₁. Δ/√|T| of the largest tree is reported, and checked to
    shrink when several n are given.
    """
    pool = pool or ReplicatePool()
    report = ReportBuilder("largest_tree_scaling", cfg.model_dump(mode="json"))
    draws = cfg.continuum_draws
    medians = []

    for s in _sequences(cfg):
        tag = _tag(s)
        scaling = walk_scaling(s)
        _record_sequence(report, s)
        logger.info(f"largest_tree_scaling at n={s.n}")

        try:
            forests = pool.map(partial(largest_tree_replicate, s, cfg.seed), range(cfg.replicates), desc="forests")
            continuum = pool.map(partial(largest_excursion_replicate, scaling.lam, cfg.grid_m, cfg.seed),
                                 range(draws), desc="excursions")
        except Exception as e:
            logger.error(f"largest_tree_scaling sampling failed at n={s.n}: {e}")
            raise

        forest = np.array(forests, dtype=np.float64)
        sizes, heights, max_degrees, walk_heights = forest.T
        lengths, coded_heights, direct_heights = np.array(continuum, dtype=np.float64).T

        tree_heights = heights * scaling.sigma / (2.0 * math.sqrt(s.n))
        limit = ks_two_sample_threshold(cfg.replicates, draws, cfg.ks_alpha, cfg.ks_grid_margin)
        report.check(f"{tag}_size", ks_two_sample(sizes / s.n, lengths),
                     f"ks_two_sample_threshold_{tag}", limit, "<")
        report.check(f"{tag}_height", ks_two_sample(tree_heights, coded_heights),
                     f"ks_two_sample_threshold_{tag}", limit, "<")
        report.check(f"{tag}_walk_excursion_height", ks_two_sample(walk_heights / scaling.scale, direct_heights),
                     f"ks_two_sample_threshold_{tag}", limit, "<")

        degree_ratio = max_degrees / np.sqrt(sizes)
        medians.append(float(np.median(degree_ratio)))
        report.statistic(f"{tag}_degree_ratio_median", medians[-1])
        report.statistic(f"{tag}_degree_ratio_q90", float(np.quantile(degree_ratio, 0.9)))
        report.statistic(f"{tag}_degree_ratio_dominated",
                         float(np.all(degree_ratio <= s.delta / np.sqrt(sizes))))

        bounds = discrete_coupling_bounds(s.n, scaling.sigma)
        report.statistic(f"{tag}_coupling_d_H", bounds.d_H)
        report.statistic(f"{tag}_coupling_d_P_bound", bounds.d_P_bound)
        quantiles = np.array([0.1, 0.25, 0.5, 0.75, 0.9])
        realized = np.quantile(sizes, quantiles)
        own = [discrete_coupling_bounds(max(1, int(k)), scaling.sigma) for k in realized]
        report.table(f"coupling_bounds_{tag}", {
            "quantile": quantiles,
            "largest_size": realized,
            "d_H": [b.d_H for b in own],
            "d_P_bound": [b.d_P_bound for b in own],
        })

        levels = np.linspace(0.0, 1.0, 101)
        report.table(f"height_quantiles_{tag}", {
            "quantile": levels,
            "forest": np.quantile(tree_heights, levels),
            "continuum": np.quantile(coded_heights, levels),
        })

    if len(medians) > 1:
        report.parameter("degree_ratio_median_first_n", medians[0])
        report.check("degree_ratio_shrinks", medians[-1], "degree_ratio_median_first_n", medians[0], "<=")

    return report.build()


__all__ = [
    "walk_replicate",
    "continuum_walk_replicate",
    "tree_sizes_replicate",
    "ranked_lengths_replicate",
    "largest_tree_replicate",
    "largest_excursion_replicate",
    "exp_walk_convergence",
    "exp_tree_sizes",
    "exp_largest_tree_scaling",
]
