"""
Handler for the `verify` command: the exhaustive small-n suite.
"""

from loguru import logger

from app.core.pool import ReplicatePool
from app.services.verification import verify_suite
from app.utils.loaders import write_report


def verify_command(max_n: int, max_degree: int, out_dir: str, workers: int) -> int:
    """
    Run the exhaustive suite and write its report.

    Returns:
        0 if every check passed, 1 otherwise
    """
    report = verify_suite(max_n=max_n, max_degree=max_degree, pool=ReplicatePool(workers=workers))
    write_report(report, out_dir)
    if not report.passed:
        logger.error(f"Verification failed: {report.failed()}")
        return 1
    logger.info("All exhaustive checks passed")
    return 0
