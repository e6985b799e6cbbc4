"""
Lattice bridges, first-passage bridges and the rotation map.

For a degree sequence s, Λ(s) is the set of walks whose child counts are a
rearrangement of d(s), and F(s) ⊂ Λ(s) the walks that first reach -c(s) at
their last step. The rotation f(b, j) = θ_{t(min b + j)}(b) maps
Λ(s) × {0, ..., c(s)-1} onto F(s), every element of F(s) being hit exactly
n(s) times. Everything here works on integers only.
"""

import math
from collections import Counter
from dataclasses import dataclass
from itertools import accumulate
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from more_itertools import distinct_permutations

from app.config import settings
from app.core.exceptions import (
    DegenerateSigma,
    ForestWiseError,
    IndexOutOfRange,
    InvalidShiftIndex,
    NotAForest,
    TooLarge,
)
from app.models.degrees import DegreeSequence
from app.models.paths import BridgeStats, LatticePath


@dataclass(frozen=True)
class NToOneResult:
    """Preimage count of every first-passage bridge under the rotation map."""
    preimage_counts: Dict[LatticePath, int]
    ok: bool


def walk_from_children(children: Sequence[int]) -> LatticePath:
    """Lukasiewicz walk with increments c_i - 1."""
    if any(k < 0 for k in children):
        raise ForestWiseError("child counts must be non-negative")
    return LatticePath.from_increments(k - 1 for k in children)


def cyclic_shift(path: LatticePath, u: int) -> LatticePath:
    """θ_u: rotate the increments left by u, 0 <= u <= n."""
    if not 0 <= u <= path.n:
        raise IndexOutOfRange(f"shift {u} outside 0..{path.n}")
    steps = path.increments
    return LatticePath(steps[u:] + steps[:u])


def first_passage_index(path: LatticePath, y: int) -> int:
    """
    Smallest j with W(j) <= y.

    Returns 0 when y is below the minimum of the walk, so that θ at the
    returned index leaves the path unchanged.
    """
    for j, value in enumerate(accumulate(path.increments, initial=0)):
        if value <= y:
            return j
    return 0


def rotate_to_first_passage(bridge: LatticePath, j: int) -> LatticePath:
    """
    The rotation map f(b, j) = θ_{t(min(b) + j)}(b).

    Args:
        bridge: Walk ending at -c with c >= 1
        j: Offset in 0..c-1

    Returns:
        The first-passage bridge f(b, j)

    Raises:
        NotAForest: If the walk does not end at a negative level
        InvalidShiftIndex: If j is outside 0..c-1
    """
    c = -bridge.endpoint
    if c < 1:
        raise NotAForest(f"bridge ends at {-c}; rotation needs an endpoint <= -1")
    if not 0 <= j <= c - 1:
        raise InvalidShiftIndex(f"j = {j} outside 0..{c - 1}")
    lowest = min(accumulate(bridge.increments, initial=0))
    return cyclic_shift(bridge, first_passage_index(bridge, lowest + j))


def rotate_array(increments: np.ndarray, j: int) -> np.ndarray:
    """Array form of rotate_to_first_passage for large sampled walks."""
    values = np.concatenate(([0], np.cumsum(increments)))
    u = int(np.argmax(values <= values.min() + j))
    return np.roll(increments, -u)


def multinomial(s: DegreeSequence) -> int:
    """|Λ(s)| = n! / Π s^(i)!."""
    count = math.factorial(s.n)
    for _, k in s.counts:
        count //= math.factorial(k)
    return count


def fp_bridge_count(s: DegreeSequence) -> int:
    """|F(s)| = (c/n) n! / Π s^(i)!."""
    return s.c * multinomial(s) // s.n


def _check_cap(s: DegreeSequence, cap: Optional[int]) -> None:
    cap = settings.enumeration_cap if cap is None else cap
    if s.n > cap:
        raise TooLarge(f"n(s) = {s.n} exceeds the enumeration cap {cap}")


def enumerate_bridges(s: DegreeSequence, cap: Optional[int] = None) -> Tuple[LatticePath, ...]:
    """All of Λ(s), lexicographically ordered on increments."""
    _check_cap(s, cap)
    rearrangements = sorted(distinct_permutations(s.child_vector()))
    return tuple(walk_from_children(perm) for perm in rearrangements)


def enumerate_fp_bridges(s: DegreeSequence, cap: Optional[int] = None) -> Tuple[LatticePath, ...]:
    """All of F(s): bridges with W(j) > -c for every j < n."""
    return tuple(b for b in enumerate_bridges(s, cap) if b.is_first_passage())


def verify_n_to_one(s: DegreeSequence, cap: Optional[int] = None) -> NToOneResult:
    """
    Apply the rotation map to every pair in Λ(s) × {0..c-1} and count preimages.

    Returns:
        NToOneResult with ok = True iff each element of F(s) has exactly n(s) preimages
    """
    bridges = enumerate_bridges(s, cap)
    counts: Counter = Counter(
        rotate_to_first_passage(b, j) for b in bridges for j in range(s.c)
    )
    expected = set(b for b in bridges if b.is_first_passage())
    ok = set(counts) == expected and all(v == s.n for v in counts.values())
    if not ok:
        logger.warning(f"Rotation map is not {s.n}-to-1 on {s}")
    return NToOneResult(preimage_counts=dict(counts), ok=ok)


def bridge_statistics(children: Sequence[int], sigma_p: float) -> BridgeStats:
    """
    Mean and squared scale of the normalized steps (c_i - 1)/(σ√n).

    Args:
        children: Child counts c_1..c_n
        sigma_p: Scaling σ > 0

    Returns:
        BridgeStats with mu = -c/(σ√n), tau2 = (Σ(c_i-1)² - c²/n)/(σ²n)

    Raises:
        DegenerateSigma: If sigma_p <= 0
    """
    n = len(children)
    if n < 1:
        raise ForestWiseError("bridge statistics need at least one step")
    if sigma_p <= 0:
        raise DegenerateSigma(f"sigma must be positive, got {sigma_p}")
    c = n - sum(children)
    sum_sq = sum((k - 1) ** 2 for k in children)
    return BridgeStats(
        mu=-c / (sigma_p * math.sqrt(n)),
        tau2=(sum_sq - c * c / n) / (sigma_p ** 2 * n),
        sum_sq_increments=sum_sq,
    )


__all__ = [
    "NToOneResult",
    "walk_from_children",
    "cyclic_shift",
    "first_passage_index",
    "rotate_to_first_passage",
    "rotate_array",
    "multinomial",
    "fp_bridge_count",
    "enumerate_bridges",
    "enumerate_fp_bridges",
    "verify_n_to_one",
    "bridge_statistics",
]
