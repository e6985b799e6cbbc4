"""
Exact uniform sampling of plane forests with a prescribed degree sequence.

A uniform rearrangement of d(s) gives a uniform bridge of Λ(s); rotating it at
the first passage below min + ν, with ν uniform on {0..c-1}, gives a uniform
element of F(s), since the rotation map is exactly n(s)-to-1. No rejection.
"""

from functools import lru_cache
from typing import Union

import numpy as np
from loguru import logger

from app.core.exceptions import NotATree
from app.core.rng import SeededRng
from app.models.degrees import DegreeSequence
from app.models.forests import PlaneForest, PlaneTree
from app.services.forests import decode_array
from app.services.paths import rotate_array

RngLike = Union[SeededRng, np.random.Generator]


def _generator(rng: RngLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, SeededRng) else rng


class ForestSampler:
    """
    Sampler bound to one degree sequence.

    Keeps d(s) as an array so repeated draws only pay for the shuffle and the
    rotation.
    """

    def __init__(self, degrees: DegreeSequence):
        """
        Initialize the sampler.

        Args:
            degrees: Degree sequence to sample forests for
        """
        self.degrees = degrees
        self.c = degrees.c
        self._increments = degrees.child_array() - 1
        logger.debug(f"Forest sampler ready for n={degrees.n}, c={self.c}")

    def permuted_increments(self, rng: RngLike) -> np.ndarray:
        """Increments of a uniform bridge of Λ(s) (Fisher-Yates shuffle of d(s) - 1)."""
        return _generator(rng).permutation(self._increments)

    def first_passage_increments(self, rng: RngLike) -> np.ndarray:
        """Increments of a uniform element of F(s); π is drawn before ν."""
        generator = _generator(rng)
        bridge = generator.permutation(self._increments)
        nu = int(generator.integers(0, self.c))
        return rotate_array(bridge, nu)

    def sample(self, rng: RngLike) -> PlaneForest:
        """Uniform plane forest with degree sequence s."""
        return decode_array(self.first_passage_increments(rng))


@lru_cache(maxsize=16)
def cached_sampler(degrees: DegreeSequence) -> ForestSampler:
    """Sampler for `degrees`, built once per process."""
    return ForestSampler(degrees)


def sample_forest(s: DegreeSequence, rng: RngLike) -> PlaneForest:
    """Uniform random plane forest with degree sequence s."""
    return ForestSampler(s).sample(rng)


def sample_tree(s: DegreeSequence, rng: RngLike) -> PlaneTree:
    """
    Uniform random plane tree with degree sequence s.

    Raises:
        NotATree: If c(s) != 1
    """
    if s.c != 1:
        raise NotATree(f"c(s) = {s.c}; a single tree needs c(s) = 1")
    return sample_forest(s, rng).trees[0]


__all__ = ["ForestSampler", "cached_sampler", "sample_forest", "sample_tree"]
