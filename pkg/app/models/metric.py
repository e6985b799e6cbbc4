"""
Finite rooted measured metric spaces.
"""

from dataclasses import dataclass

import numpy as np

from app.core.exceptions import ForestWiseError

TRIANGLE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteMetricMeasureSpace:
    """Distance matrix, root index and point masses."""
    distance_matrix: np.ndarray
    root: int
    masses: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distance_matrix, dtype=np.float64)
        masses = np.asarray(self.masses, dtype=np.float64)
        size = d.shape[0]
        if d.ndim != 2 or d.shape != (size, size) or size == 0:
            raise ForestWiseError("distance matrix must be square and non-empty")
        if not 0 <= self.root < size:
            raise ForestWiseError(f"root {self.root} outside 0..{size - 1}")
        if masses.shape != (size,) or not np.isfinite(masses).all() or (masses < 0).any():
            raise ForestWiseError("masses must be finite, non-negative, one per point")
        if not np.allclose(d, d.T, atol=0.0, rtol=0.0) or np.any(np.diag(d) != 0):
            raise ForestWiseError("distance matrix must be symmetric with zero diagonal")
        # d[i, k] <= d[i, j] + d[j, k] for all i, j, k
        slack = d[:, None, :] - d[:, :, None] - d[None, :, :]
        if slack.max() > TRIANGLE_TOLERANCE:
            raise ForestWiseError("distance matrix violates the triangle inequality")
        object.__setattr__(self, "distance_matrix", d)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def trusted(cls, distance_matrix: np.ndarray, root: int, masses: np.ndarray) -> "FiniteMetricMeasureSpace":
        """Build from distances known to be a metric (graph distances)."""
        space = object.__new__(cls)
        object.__setattr__(space, "distance_matrix", np.asarray(distance_matrix, dtype=np.float64))
        object.__setattr__(space, "root", root)
        object.__setattr__(space, "masses", np.asarray(masses, dtype=np.float64))
        return space

    @property
    def size(self) -> int:
        return self.distance_matrix.shape[0]

    def to_csv(self) -> str:
        return "\n".join(",".join(repr(float(x)) for x in row) for row in self.distance_matrix) + "\n"


__all__ = ["FiniteMetricMeasureSpace"]
