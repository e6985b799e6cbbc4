"""
Exhaustive small-n verification suite.

For every degree sequence with n(s) <= max_n and Δ(s) <= max_degree, checks
the bridge counting formulas, the n-to-1 property of the rotation map, the
Lukasiewicz codec in both directions and the marked-forest maps. All checks
are exact.
"""

from dataclasses import dataclass
from functools import partial
from typing import List, Optional

from loguru import logger

from app.core.pool import ReplicatePool
from app.models.degrees import DegreeSequence
from app.models.report import ExperimentReport
from app.services.families import all_degree_sequences
from app.services.forests import decode, encode, verify_marked_maps
from app.services.harness import ReportBuilder
from app.services.paths import enumerate_bridges, fp_bridge_count, multinomial, verify_n_to_one


@dataclass(frozen=True)
class SequenceCheck:
    """Outcome of every exact check on one degree sequence."""
    degrees: str
    n: int
    c: int
    bridges: int
    fp_bridges: int
    counting_ok: bool
    n_to_one_ok: bool
    codec_ok: bool
    marked_maps_ok: bool


def check_sequence(sequences: List[DegreeSequence], index: int, cap: Optional[int] = None) -> SequenceCheck:
    """Run all exact checks on sequences[index]."""
    s = sequences[index]
    bridges = enumerate_bridges(s, cap)
    fp_bridges = [b for b in bridges if b.is_first_passage()]
    counting_ok = len(bridges) == multinomial(s) and len(fp_bridges) == fp_bridge_count(s)

    codec_ok = True
    for path in fp_bridges:
        forest = decode(path)
        if encode(forest) != path or decode(encode(forest)) != forest or forest.degree_sequence() != s:
            codec_ok = False
            break

    marked = verify_marked_maps(s, cap)
    return SequenceCheck(
        degrees=str(s),
        n=s.n,
        c=s.c,
        bridges=len(bridges),
        fp_bridges=len(fp_bridges),
        counting_ok=counting_ok,
        n_to_one_ok=verify_n_to_one(s, cap).ok,
        codec_ok=codec_ok,
        marked_maps_ok=marked.g_c_to_1 and marked.h_n_to_1,
    )


def verify_suite(max_n: int = 8, max_degree: int = 5, cap: Optional[int] = None,
                 pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Exhaustive counting, n-to-1, codec and marked-map checks.

    Args:
        max_n: Largest n(s)
        max_degree: Largest Δ(s)
        cap: Enumeration cap passed to the enumerators (settings default if None)
        pool: Worker pool (a default one if None)

    Returns:
        ExperimentReport with one verdict per check family
    """
    sequences = list(all_degree_sequences(max_n, max_degree))
    logger.info(f"Verifying {len(sequences)} degree sequences with n <= {max_n}, Δ <= {max_degree}")
    pool = pool or ReplicatePool()
    try:
        results = pool.map(partial(check_sequence, sequences, cap=cap), range(len(sequences)), desc="sequences")
    except Exception as e:
        logger.error(f"Verification suite failed: {e}")
        raise

    report = ReportBuilder("verify", {"max_n": max_n, "max_degree": max_degree, "sequences": len(sequences)})
    for key, attribute in (("counting", "counting_ok"), ("n_to_one", "n_to_one_ok"),
                           ("codec", "codec_ok"), ("marked_maps", "marked_maps_ok")):
        failures = [r.degrees for r in results if not getattr(r, attribute)]
        if failures:
            logger.warning(f"{key} fails on {len(failures)} sequences, first {failures[0]}")
        report.check(key, len(failures), "allowed_failures", 0, "==")
    report.statistic("bridges_enumerated", sum(r.bridges for r in results))
    report.statistic("forests_enumerated", sum(r.fp_bridges for r in results))
    report.table("sequences", {
        "degrees": [f'"{r.degrees}"' for r in results],
        "n": [r.n for r in results],
        "c": [r.c for r in results],
        "bridges": [r.bridges for r in results],
        "fp_bridges": [r.fp_bridges for r in results],
        "counting_ok": [r.counting_ok for r in results],
        "n_to_one_ok": [r.n_to_one_ok for r in results],
        "codec_ok": [r.codec_ok for r in results],
        "marked_maps_ok": [r.marked_maps_ok for r in results],
    })
    return report.build()


__all__ = ["SequenceCheck", "check_sequence", "verify_suite"]
