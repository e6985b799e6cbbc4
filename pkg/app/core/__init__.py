"""
Core infrastructure layer for ForestWise.

Error types, seeded random streams and the replicate worker pool.
"""

from .exceptions import ForestWiseError
from .pool import ReplicatePool
from .rng import SeededRng, StreamPurpose

__all__ = [
    "ForestWiseError",
    "ReplicatePool",
    "SeededRng",
    "StreamPurpose",
]
