"""
Degree-sequence families for the convergence experiments.

Each family maps a size n (and a target λ) to a degree sequence whose number
of trees is close to λ·σ·√n, σ being the offspring standard deviation.
"""

import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator

from loguru import logger

from app.core.exceptions import ConfigurationError, DegenerateSigma, DomainError
from app.models.degrees import DegreeSequence
from app.models.report import DegreeFamily
from app.utils.loaders import load_degree_sequence


@dataclass(frozen=True)
class WalkScaling:
    """Scale σ√n of the Lukasiewicz walk and the realized λ = c/(σ√n)."""
    sigma: float
    scale: float
    lam: float


def walk_scaling(s: DegreeSequence) -> WalkScaling:
    """
    Scaling by the offspring standard deviation, the step deviation of the walk.

    Raises:
        DegenerateSigma: If the offspring variance is zero
    """
    st = s.stats()
    if st.variance_p <= 0:
        raise DegenerateSigma(f"offspring variance of {s} is zero")
    sigma = math.sqrt(st.variance_p)
    scale = sigma * math.sqrt(st.n)
    return WalkScaling(sigma=sigma, scale=scale, lam=st.c / scale)


def _binary_counts(n: int, c: int) -> Dict[int, int]:
    parity = (n + c) % 2
    if parity:
        logger.debug(f"n + c = {n + c} is odd; one vertex gets a single child")
    return {0: (n + c - parity) // 2, 1: parity, 2: (n - c - parity) // 2}


def binary_family(n: int, lam: float) -> DegreeSequence:
    """
    Degrees {0, 1, 2} with c ≈ λ·√(1 - c²/n²)·√n.

    The offspring variance of the {0, 2} law is 1 - c²/n², so one fixed-point
    step from c = λ√n gets c within rounding of the target. s^(1) is 0 or 1
    and absorbs the parity of n + c.

    Args:
        n: Number of vertices, n >= 1
        lam: Target λ > 0
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    c = min(n, max(1, round(lam * math.sqrt(n))))
    c = min(n, max(1, round(lam * math.sqrt(max(0.0, 1.0 - c * c / (n * n))) * math.sqrt(n))))
    if (n + c) % 2:
        logger.warning(f"binary family at n={n}: parity adjusted with one unary vertex (c={c})")
    return DegreeSequence.validate(_binary_counts(n, c))


def single_tree_family(n: int) -> DegreeSequence:
    """Degrees {0, 1, 2} with c = 1: a single binary-ish tree."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return DegreeSequence.validate(_binary_counts(n, 1))


def _geometric_counts(n: int, c: int) -> Dict[int, int]:
    counts: Dict[int, int] = {}
    i = 2
    while n >> (i + 1):
        counts[i] = n >> (i + 1)
        i += 1
    counts[0] = c + sum((i - 1) * k for i, k in counts.items() if i >= 2)
    counts[1] = n - sum(counts.values())
    if counts[1] < 0:
        raise DomainError(f"geometric family has no sequence with n={n}, c={c}")
    return counts


def geometric_family(n: int, lam: float) -> DegreeSequence:
    """
    s^(i) = ⌊n·2^-(i+1)⌋ for i >= 2; s^(0) and s^(1) fix n and c.

    The maximal degree grows like log₂ n. c is set by one fixed-point step
    on the offspring variance, as for the binary family.
    """
    if n < 8:
        raise DomainError(f"geometric family needs n >= 8, got {n}")
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    c = max(1, round(lam * math.sqrt(n)))
    variance = DegreeSequence.validate(_geometric_counts(n, c)).stats().variance_p
    c = max(1, round(lam * math.sqrt(variance * n)))
    return DegreeSequence.validate(_geometric_counts(n, c))


def all_degree_sequences(max_n: int, max_degree: int) -> Iterator[DegreeSequence]:
    """
    Every degree sequence with 1 <= n(s) <= max_n, Δ(s) <= max_degree and c(s) >= 1,
    by n and then lexicographically on (s^(1), ..., s^(Δ)).
    """
    for n in range(1, max_n + 1):
        for upper in product(range(n + 1), repeat=max_degree):
            internal = sum(upper)
            if internal > n or sum(i * k for i, k in enumerate(upper, start=1)) > n - 1:
                continue
            counts = {i: k for i, k in enumerate(upper, start=1)}
            counts[0] = n - internal
            yield DegreeSequence.validate(counts)


def resolve_family(family: DegreeFamily, n: int, lam: float) -> DegreeSequence:
    """
    Degree sequence of `family` at size n.

    File and explicit-count families ignore n and λ.

    Raises:
        ConfigurationError: If the family kind is unknown
    """
    if family.kind == "binary":
        return binary_family(n, lam)
    if family.kind == "geometric":
        return geometric_family(n, lam)
    if family.kind == "single_tree":
        return single_tree_family(n)
    if family.kind == "file":
        return load_degree_sequence(family.path)
    if family.kind == "counts":
        return DegreeSequence.validate(family.counts)
    raise ConfigurationError(f"unknown degree family {family.kind!r}")


__all__ = [
    "WalkScaling",
    "walk_scaling",
    "binary_family",
    "single_tree_family",
    "geometric_family",
    "all_degree_sequences",
    "resolve_family",
]
