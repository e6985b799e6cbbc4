"""
Degree sequences and their derived statistics.

A degree sequence s = (s^(i), i >= 0) counts the vertices with i children.
Counts are stored sparsely since heavy-tailed sequences can have a large
maximal degree with few distinct degrees.
"""

import json
import math
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np

from app.core.exceptions import (
    CountOverflow,
    DegenerateSigma,
    EmptySequence,
    ForestWiseError,
    NotAForest,
)

INT64_MAX = 2 ** 63 - 1


def _checked(value: int, name: str) -> int:
    if abs(value) > INT64_MAX:
        raise CountOverflow(f"{name} = {value} does not fit in 64 bits")
    return value


@dataclass(frozen=True)
class DegreeStats:
    """Derived statistics of a degree sequence."""
    n: int
    c: int
    delta: int
    sigma2_s: int      # sum of i^2 s^(i)
    sigma2_p: float    # sigma2_s / n
    mu_p: float        # (n - c) / n
    variance_p: float  # sigma2_p - mu_p^2, the step variance of the walk


@dataclass(frozen=True)
class RegimeDiagnostics:
    """Scaled quantities entering the convergence hypotheses."""
    n: int
    c_over_sigma_sqrt_n: float
    mu_p: float
    sigma2_p: float
    delta_over_sqrt_n: float
    variance_p: float
    c_over_std_sqrt_n: float


@dataclass(frozen=True)
class DegreeSequence:
    """
    A validated degree sequence.

    Build instances with `DegreeSequence.validate`; the invariants n >= 1 and
    c >= 1 hold for every instance.
    """
    counts: Tuple[Tuple[int, int], ...]

    @classmethod
    def validate(cls, counts: Mapping[int, int]) -> "DegreeSequence":
        """
        Validate raw counts and build a degree sequence.

        Args:
            counts: Map from degree i to count s^(i)

        Returns:
            DegreeSequence with zero counts dropped

        Raises:
            EmptySequence: If n(s) = 0
            NotAForest: If c(s) <= 0
            ForestWiseError: If a degree or count is negative or not an integer
        """
        cleaned: Dict[int, int] = {}
        for degree, count in counts.items():
            degree, count = int(degree), int(count)
            if degree < 0 or count < 0:
                raise ForestWiseError(f"degrees and counts must be non-negative, got {degree}: {count}")
            if count:
                cleaned[degree] = count

        n = _checked(sum(cleaned.values()), "n")
        if n == 0:
            raise EmptySequence("degree sequence has no vertices")
        c = _checked(sum((1 - i) * k for i, k in cleaned.items()), "c")
        if c <= 0:
            raise NotAForest(f"c(s) = {c}; a forest needs c(s) >= 1")

        return cls(counts=tuple(sorted(cleaned.items())))

    @property
    def as_dict(self) -> Dict[int, int]:
        return dict(self.counts)

    def count(self, degree: int) -> int:
        return self.as_dict.get(degree, 0)

    @property
    def n(self) -> int:
        return sum(k for _, k in self.counts)

    @property
    def c(self) -> int:
        return sum((1 - i) * k for i, k in self.counts)

    @property
    def delta(self) -> int:
        return max(i for i, _ in self.counts)

    def stats(self) -> DegreeStats:
        """
        Compute n, c, Δ, Σi²s^(i), σ²(p), μ(p) and the offspring variance.

        Returns:
            DegreeStats for this sequence
        """
        n = self.n
        c = self.c
        sigma2_s = _checked(sum(i * i * k for i, k in self.counts), "sigma2_s")
        _checked(sum(i * k for i, k in self.counts), "sum of degrees")
        sigma2_p = sigma2_s / n
        mu_p = (n - c) / n
        return DegreeStats(
            n=n,
            c=c,
            delta=self.delta,
            sigma2_s=sigma2_s,
            sigma2_p=sigma2_p,
            mu_p=mu_p,
            variance_p=sigma2_p - mu_p * mu_p,
        )

    def child_vector(self) -> Tuple[int, ...]:
        """The weakly increasing vector d(s) holding s^(i) copies of i."""
        return tuple(i for i, k in self.counts for _ in range(k))

    def child_array(self) -> np.ndarray:
        """d(s) as an int64 array."""
        degrees = np.array([i for i, _ in self.counts], dtype=np.int64)
        repeats = np.array([k for _, k in self.counts], dtype=np.int64)
        return np.repeat(degrees, repeats)

    def regime_diagnostics(self) -> RegimeDiagnostics:
        """
        Scaled quantities used to check a family approaches the (λ, σ) regime.

        Raises:
            DegenerateSigma: If σ²(p) = 0
        """
        st = self.stats()
        if st.sigma2_p == 0:
            raise DegenerateSigma("sigma^2(p) = 0: the sequence has no vertex with children")
        sqrt_n = math.sqrt(st.n)
        return RegimeDiagnostics(
            n=st.n,
            c_over_sigma_sqrt_n=st.c / (math.sqrt(st.sigma2_p) * sqrt_n),
            mu_p=st.mu_p,
            sigma2_p=st.sigma2_p,
            delta_over_sqrt_n=st.delta / sqrt_n,
            variance_p=st.variance_p,
            c_over_std_sqrt_n=st.c / (math.sqrt(st.variance_p) * sqrt_n),
        )

    def to_json(self) -> str:
        return json.dumps({"counts": {str(i): k for i, k in self.counts}})

    @classmethod
    def from_json(cls, text: str) -> "DegreeSequence":
        payload = json.loads(text)
        try:
            raw = payload["counts"]
        except (KeyError, TypeError) as e:
            raise ForestWiseError('degree sequence JSON must be an object with a "counts" field') from e
        return cls.validate({int(i): k for i, k in raw.items()})

    def __str__(self) -> str:
        body = ", ".join(f"{i}:{k}" for i, k in self.counts)
        return f"{{{body}}}"


def validate(counts: Mapping[int, int]) -> DegreeSequence:
    """Module-level alias of DegreeSequence.validate."""
    return DegreeSequence.validate(counts)


__all__ = ["DegreeSequence", "DegreeStats", "RegimeDiagnostics", "validate"]
