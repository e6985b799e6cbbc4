"""
Integer-increment lattice paths.

A path is stored as its increment sequence; values W(0) = 0, W(j) = sum of the
first j increments are derived on demand. Bridges, first-passage bridges and
Lukasiewicz paths are all LatticePath instances distinguished by properties of
their values.
"""

import json
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from app.core.exceptions import ForestWiseError


@dataclass(frozen=True, order=True)
class LatticePath:
    """Walk with increments >= -1 on [0, n]."""
    increments: Tuple[int, ...]

    def __post_init__(self):
        if any(step < -1 for step in self.increments):
            raise ForestWiseError(f"increments must be >= -1, got {min(self.increments)}")

    @classmethod
    def from_increments(cls, increments: Iterable[int]) -> "LatticePath":
        return cls(tuple(int(step) for step in increments))

    @classmethod
    def from_array(cls, increments: np.ndarray) -> "LatticePath":
        return cls(tuple(increments.tolist()))

    @property
    def n(self) -> int:
        return len(self.increments)

    @property
    def values(self) -> np.ndarray:
        """W(0), ..., W(n) as int64."""
        out = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.increments, out=out[1:])
        return out

    @property
    def endpoint(self) -> int:
        return sum(self.increments)

    @property
    def children(self) -> Tuple[int, ...]:
        """Child counts c_i = increment_i + 1."""
        return tuple(step + 1 for step in self.increments)

    def degree_counts(self) -> Dict[int, int]:
        """Histogram of child counts; the degree sequence the path realizes."""
        return dict(Counter(self.children))

    def is_first_passage(self) -> bool:
        """W(n) = -c and W(j) > -c for every j < n, with c = -W(n) >= 1."""
        if self.n == 0:
            return False
        values = self.values
        target = values[-1]
        return bool(target <= -1 and values[:-1].min() > target)

    def to_json(self) -> str:
        return json.dumps(list(self.increments))

    @classmethod
    def from_json(cls, text: str) -> "LatticePath":
        return cls.from_increments(json.loads(text))


@dataclass(frozen=True)
class BridgeStats:
    """Centring and scaling statistics of a permuted child sequence."""
    mu: float
    tau2: float
    sum_sq_increments: int


def as_path(steps: Sequence[int]) -> LatticePath:
    """Convenience constructor used by tests and handlers."""
    return LatticePath.from_increments(steps)


__all__ = ["LatticePath", "BridgeStats", "as_path"]
