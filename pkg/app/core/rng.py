"""
Seeded, splittable random streams.

Each SeededRng names one independent stream of a counter-based Philox
generator. Replicates of an experiment get their own stream from
(seed, purpose, replicate index), so results do not depend on how the
replicates were spread over workers.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

_UINT64 = 2 ** 64
_PURPOSE_SHIFT = 40


class StreamPurpose(IntEnum):
    """Disjoint stream families used inside one experiment."""
    FOREST = 1
    CONTINUUM = 2
    PERMUTATION = 3
    EXCURSION = 4


@dataclass(frozen=True)
class SeededRng:
    """A reproducible random stream identified by (seed, stream_id)."""
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < _UINT64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not 0 <= self.stream_id < _UINT64:
            raise ValueError(f"stream_id must be an unsigned 64-bit integer, got {self.stream_id}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        seed_sequence = np.random.SeedSequence([self.seed, self.stream_id])
        return np.random.Generator(np.random.Philox(seed_sequence))

    @classmethod
    def for_replicate(cls, seed: int, purpose: StreamPurpose, index: int) -> "SeededRng":
        """Stream for replicate `index` of a given purpose."""
        return cls(seed=seed, stream_id=(int(purpose) << _PURPOSE_SHIFT) | index)


__all__ = ["SeededRng", "StreamPurpose"]
