"""
Replicate worker pool.

Monte Carlo replicates are independent tasks keyed by their index. The pool
maps a picklable task over indices either in-process or across worker
processes and always returns results in index order, so every reduction
downstream is deterministic.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from loguru import logger
from tqdm import tqdm

from app.config import settings

T = TypeVar("T")


class ReplicatePool:
    """
    Maps replicate tasks over indices.

    Tasks must be module-level callables (or functools.partial of them)
    so they can be sent to worker processes.
    """

    def __init__(self, workers: Optional[int] = None, chunksize: Optional[int] = None):
        """
        Initialize the pool.

        Args:
            workers: Worker processes (settings.workers if None); 1 runs in-process
            chunksize: Replicates per dispatch (settings.pool_chunksize if None)
        """
        self.workers = workers or settings.workers
        self.chunksize = chunksize or settings.pool_chunksize

    def map(self, task: Callable[[int], T], indices: Iterable[int], desc: str = "replicates") -> List[T]:
        """
        Run `task(i)` for every index and collect the results in index order.

        Args:
            task: Picklable callable taking a replicate index
            indices: Replicate indices
            desc: Progress bar label

        Returns:
            Results ordered as `indices`
        """
        indices = list(indices)
        logger.debug(f"Dispatching {len(indices)} {desc} on {self.workers} worker(s)")

        if self.workers <= 1 or len(indices) <= 1:
            return [task(i) for i in tqdm(indices, desc=desc, leave=False, disable=len(indices) < 100)]

        try:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                results = executor.map(task, indices, chunksize=self.chunksize)
                return list(tqdm(results, total=len(indices), desc=desc, leave=False))
        except Exception as e:
            logger.error(f"Replicate pool failed while running {desc}: {e}")
            raise


__all__ = ["ReplicatePool"]
