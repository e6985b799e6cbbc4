"""
Continuum paths on a uniform grid of [0, 1] and their excursions.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.core.exceptions import ForestWiseError


@dataclass(frozen=True, eq=False)
class GridPath:
    """
    Path sampled at times k/m, k = 0..m, read as piecewise linear on [0, 1].

    Holds Brownian bridges, first-passage bridges and their reflections.
    """
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 3:
            raise ForestWiseError("a grid path needs m >= 2 cells")
        if values[0] != 0.0:
            raise ForestWiseError(f"grid paths start at 0, got {values[0]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return self.values.size - 1

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.m + 1)

    def at(self, t: float) -> float:
        """Value of the linear interpolant at time t."""
        return float(np.interp(t, self.times, self.values))

    def to_csv(self) -> str:
        rows = ["time,value"]
        rows.extend(f"{t!r},{v!r}" for t, v in zip(self.times.tolist(), self.values.tolist()))
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class ExcursionList:
    """Excursion intervals (l, r) ranked by decreasing length, ties by earlier l."""
    intervals: Tuple[Tuple[float, float], ...]

    @property
    def lengths(self) -> Tuple[float, ...]:
        return tuple(r - l for l, r in self.intervals)

    def ranked_lengths(self, k: int) -> np.ndarray:
        """First k ranked lengths, zero padded."""
        out = np.zeros(k)
        lengths = self.lengths[:k]
        out[:len(lengths)] = lengths
        return out

    def __len__(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True, eq=False)
class ExcursionPath:
    """Coding function of one excursion: values on [left, right] at the given times."""
    left: float
    right: float
    times: np.ndarray
    values: np.ndarray

    @classmethod
    def from_values(cls, values, left: float = 0.0, right: float = 1.0) -> "ExcursionPath":
        """Excursion sampled uniformly on [left, right]."""
        values = np.asarray(values, dtype=np.float64)
        return cls(left=left, right=right, times=np.linspace(left, right, values.size), values=values)


@dataclass(frozen=True)
class ExcursionStats:
    """Height and mass of the real tree coded by an excursion."""
    height: float
    length: float


__all__ = ["GridPath", "ExcursionList", "ExcursionPath", "ExcursionStats"]
