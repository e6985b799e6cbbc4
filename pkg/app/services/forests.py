"""
Plane forest service: Lukasiewicz codec, marked forests and tree metrics.

A plane forest with degree sequence s corresponds to exactly one path of F(s):
the concatenation of the DFS child counts minus one. Trees end exactly where
the walk reaches a new minimum.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from more_itertools import distinct_permutations
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from app.core.exceptions import IndexOutOfRange, NotFirstPassage
from app.models.degrees import DegreeSequence
from app.models.forests import PlaneForest, PlaneTree, TreeMetrics
from app.models.paths import LatticePath
from app.services.paths import enumerate_fp_bridges


@dataclass(frozen=True)
class MarkedMapsResult:
    """Outcome of checking g (c-to-1) and h (n-to-1) on all marked forests."""
    g_c_to_1: bool
    h_n_to_1: bool
    marked_forests: int
    child_sequences: int


@dataclass(frozen=True, eq=False)
class ForestProfile:
    """Per-tree statistics of a forest, trees in forest order."""
    sizes: np.ndarray
    heights: np.ndarray
    max_degrees: np.ndarray
    sigma2: np.ndarray


def tree_ends(increments: np.ndarray) -> np.ndarray:
    """Indices (exclusive) where each tree ends: the first hits of -1, -2, ..., -c."""
    values = np.concatenate(([0], np.cumsum(increments)))
    running_min = np.minimum.accumulate(values)
    return np.flatnonzero(np.diff(running_min) < 0) + 1


def decode_array(increments: np.ndarray) -> PlaneForest:
    """Decode a first-passage walk known to be valid (sampler output)."""
    children = (increments + 1).tolist()
    trees = []
    start = 0
    for end in tree_ends(increments).tolist():
        trees.append(PlaneTree.trusted(tuple(children[start:end])))
        start = end
    return PlaneForest(tuple(trees))


def decode(path: LatticePath) -> PlaneForest:
    """
    Decode a first-passage bridge into its plane forest.

    Raises:
        NotFirstPassage: If the walk reaches its final level before the last step
    """
    if not path.is_first_passage():
        raise NotFirstPassage(f"path with endpoint {path.endpoint} is not a first-passage bridge")
    return decode_array(np.asarray(path.increments, dtype=np.int64))


def encode(forest: PlaneForest) -> LatticePath:
    """Lukasiewicz path S_F of a forest."""
    return LatticePath.from_increments(k - 1 for k in forest.children)


def sort_decreasing(forest: PlaneForest) -> PlaneForest:
    """F↓: trees by decreasing size, ties lexicographically on child counts, then stable."""
    return PlaneForest(tuple(sorted(forest.trees, key=lambda t: (-t.size, t.children))))


def mark_to_child_sequence(forest: PlaneForest, v: int) -> Tuple[int, ...]:
    """
    The map g: child counts read cyclically from the marked vertex.

    Args:
        forest: Plane forest
        v: Marked vertex, 1-based DFS index
    """
    if not 1 <= v <= forest.n:
        raise IndexOutOfRange(f"mark {v} outside 1..{forest.n}")
    children = forest.children
    return children[v - 1:] + children[:v - 1]


def enumerate_forests(s: DegreeSequence, cap: Optional[int] = None) -> Tuple[PlaneForest, ...]:
    """All plane forests with degree sequence s."""
    return tuple(decode(p) for p in enumerate_fp_bridges(s, cap))


def verify_marked_maps(s: DegreeSequence, cap: Optional[int] = None) -> MarkedMapsResult:
    """
    Check that g: MF(s) -> D(s) is c(s)-to-1 onto and h: MF(s) -> F(s) is n(s)-to-1.
    """
    forests = enumerate_forests(s, cap)
    marked = [(f, v) for f in forests for v in range(1, f.n + 1)]

    g_counts = Counter(mark_to_child_sequence(f, v) for f, v in marked)
    child_sequences = set(distinct_permutations(s.child_vector()))
    g_ok = set(g_counts) == child_sequences and all(k == s.c for k in g_counts.values())

    h_counts = Counter(f for f, _ in marked)
    h_ok = len(h_counts) == len(forests) and all(k == s.n for k in h_counts.values())

    if not (g_ok and h_ok):
        logger.warning(f"Marked-forest maps fail on {s}: g={g_ok}, h={h_ok}")
    return MarkedMapsResult(
        g_c_to_1=g_ok,
        h_n_to_1=h_ok,
        marked_forests=len(marked),
        child_sequences=len(child_sequences),
    )


def forest_profile(children: Sequence[int]) -> ForestProfile:
    """
    Sizes, heights, maximal degrees and Σk² of every tree, in one DFS pass.

    Args:
        children: Concatenated DFS child counts of a forest
    """
    sizes: List[int] = []
    heights: List[int] = []
    max_degrees: List[int] = []
    sigma2: List[int] = []
    remaining: List[int] = []  # unvisited children of each open ancestor
    for k in children:
        if remaining:
            depth = len(remaining)
            remaining[-1] -= 1
        else:
            depth = 0
            sizes.append(0)
            heights.append(0)
            max_degrees.append(0)
            sigma2.append(0)
        sizes[-1] += 1
        sigma2[-1] += k * k
        if depth > heights[-1]:
            heights[-1] = depth
        if k > max_degrees[-1]:
            max_degrees[-1] = k
        if k:
            remaining.append(k)
        else:
            while remaining and remaining[-1] == 0:
                remaining.pop()
    return ForestProfile(
        sizes=np.array(sizes, dtype=np.int64),
        heights=np.array(heights, dtype=np.int64),
        max_degrees=np.array(max_degrees, dtype=np.int64),
        sigma2=np.array(sigma2, dtype=np.int64),
    )


def vertex_depths(tree: PlaneTree) -> np.ndarray:
    """Distance to the root of every vertex, DFS order."""
    depths = np.empty(tree.size, dtype=np.int64)
    remaining: List[int] = []
    for v, k in enumerate(tree.children):
        depths[v] = len(remaining)
        if remaining:
            remaining[-1] -= 1
        if k:
            remaining.append(k)
        else:
            while remaining and remaining[-1] == 0:
                remaining.pop()
    return depths


def tree_graph(tree: PlaneTree) -> coo_matrix:
    """Undirected adjacency of the tree as a sparse matrix."""
    parents = tree.parents()
    child = np.flatnonzero(parents >= 0)
    rows = np.concatenate((child, parents[child]))
    cols = np.concatenate((parents[child], child))
    return coo_matrix((np.ones(rows.size), (rows, cols)), shape=(tree.size, tree.size))


def tree_diameter(tree: PlaneTree) -> int:
    """Exact diameter by two farthest-vertex searches."""
    if tree.size == 1:
        return 0
    graph = tree_graph(tree).tocsr()
    from_root = dijkstra(graph, unweighted=True, indices=0)
    far = int(np.argmax(from_root))
    return int(dijkstra(graph, unweighted=True, indices=far).max())


def tree_metrics(tree: PlaneTree) -> TreeMetrics:
    """Size, height, diameter, degree histogram and σ²(T) = Σ k_T(u)²."""
    return TreeMetrics(
        size=tree.size,
        height=int(vertex_depths(tree).max()),
        diameter=tree_diameter(tree),
        degree_histogram=DegreeSequence.validate(tree.degree_counts()),
        sigma2=sum(k * k for k in tree.children),
    )


def contour_function(tree: PlaneTree) -> LatticePath:
    """
    Contour of the tree: distance to the root of a unit-speed depth-first traversal.

    Returns:
        Path with 2(|T|-1) steps of ±1, starting and ending at 0
    """
    depths = vertex_depths(tree).tolist()
    steps: List[int] = []
    for previous, current in zip(depths, depths[1:]):
        steps.extend([-1] * (previous - current + 1))
        steps.append(1)
    steps.extend([-1] * depths[-1])
    return LatticePath(tuple(steps))


def enumerate_trees(max_size: int) -> Iterator[PlaneTree]:
    """Every plane tree with 1..max_size vertices, by size then lexicographically."""
    def extend(prefix: List[int], level: int, size: int) -> Iterator[Tuple[int, ...]]:
        remaining = size - len(prefix)
        if remaining == 1:
            if level == 0:
                yield tuple(prefix) + (0,)
            return
        # the walk must stay >= 0 and still be able to come down to -1 in the remaining steps
        for k in range(0, remaining):
            after = level + k - 1
            if after < 0 or after > remaining - 2:
                continue
            prefix.append(k)
            yield from extend(prefix, after, size)
            prefix.pop()

    for size in range(1, max_size + 1):
        for children in extend([], 0, size):
            yield PlaneTree.trusted(children)


__all__ = [
    "MarkedMapsResult",
    "ForestProfile",
    "tree_ends",
    "decode",
    "decode_array",
    "encode",
    "sort_decreasing",
    "mark_to_child_sequence",
    "enumerate_forests",
    "verify_marked_maps",
    "forest_profile",
    "vertex_depths",
    "tree_diameter",
    "tree_metrics",
    "contour_function",
    "enumerate_trees",
]
