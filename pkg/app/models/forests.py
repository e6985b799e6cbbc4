"""
Plane trees and plane forests.

Trees are stored as their depth-first child-count arrays, which is exactly the
information the Lukasiewicz path carries. Conversion to explicit adjacency is
left to the metric computations that need it.
"""

import json
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

import numpy as np

from app.core.exceptions import ForestWiseError
from app.models.degrees import DegreeSequence


def is_lukasiewicz_tree(children: Tuple[int, ...]) -> bool:
    """Sum of (c_i - 1) is -1 and every strict prefix sum is >= 0."""
    if not children:
        return False
    walk = np.cumsum(np.asarray(children, dtype=np.int64) - 1)
    return bool(walk[-1] == -1 and (walk[:-1] >= 0).all())


@dataclass(frozen=True, order=True)
class PlaneTree:
    """Rooted plane tree as the child counts k_T(u) of its vertices in DFS order."""
    children: Tuple[int, ...]

    def __post_init__(self):
        if not is_lukasiewicz_tree(self.children):
            raise ForestWiseError(f"{self.children} is not the DFS child sequence of a plane tree")

    @classmethod
    def trusted(cls, children: Tuple[int, ...]) -> "PlaneTree":
        """Build without re-checking; for callers that just decoded a valid walk."""
        tree = object.__new__(cls)
        object.__setattr__(tree, "children", children)
        return tree

    @property
    def size(self) -> int:
        return len(self.children)

    def degree_counts(self) -> Dict[int, int]:
        return dict(Counter(self.children))

    def parents(self) -> np.ndarray:
        """Parent index of each vertex in DFS order; the root has parent -1."""
        parents = np.full(self.size, -1, dtype=np.int64)
        open_slots: List[List[int]] = []  # [vertex, remaining children]
        for v, k in enumerate(self.children):
            if open_slots:
                parents[v] = open_slots[-1][0]
                open_slots[-1][1] -= 1
                if open_slots[-1][1] == 0:
                    open_slots.pop()
            if k:
                open_slots.append([v, k])
        return parents


@dataclass(frozen=True)
class TreeMetrics:
    """Size, height, diameter, degree histogram and Σ k_T(u)² of a tree."""
    size: int
    height: int
    diameter: int
    degree_histogram: DegreeSequence
    sigma2: int


@dataclass(frozen=True)
class PlaneForest:
    """Ordered, non-empty sequence of plane trees."""
    trees: Tuple[PlaneTree, ...]

    def __post_init__(self):
        if not self.trees:
            raise ForestWiseError("a plane forest has at least one tree")

    @classmethod
    def from_children(cls, trees: Iterable[Iterable[int]]) -> "PlaneForest":
        return cls(tuple(PlaneTree(tuple(int(k) for k in t)) for t in trees))

    @property
    def n(self) -> int:
        return sum(t.size for t in self.trees)

    @property
    def children(self) -> Tuple[int, ...]:
        """Concatenated DFS child counts of all trees."""
        return tuple(k for t in self.trees for k in t.children)

    @property
    def tree_sizes(self) -> Tuple[int, ...]:
        return tuple(t.size for t in self.trees)

    def degree_sequence(self) -> DegreeSequence:
        return DegreeSequence.validate(Counter(self.children))

    def to_json(self) -> str:
        return json.dumps({"trees": [list(t.children) for t in self.trees]})

    @classmethod
    def from_json(cls, text: str) -> "PlaneForest":
        payload = json.loads(text)
        try:
            return cls.from_children(payload["trees"])
        except (KeyError, TypeError) as e:
            raise ForestWiseError('forest JSON must be an object with a "trees" field') from e


__all__ = ["PlaneTree", "PlaneForest", "TreeMetrics", "is_lukasiewicz_tree"]
