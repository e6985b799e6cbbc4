"""
Handler for the `enumerate` command.

Lists every bridge, first-passage bridge or forest of a small degree sequence.
"""

import click
from loguru import logger

from app.core.exceptions import ConfigurationError
from app.services.forests import enumerate_forests
from app.services.paths import enumerate_bridges, enumerate_fp_bridges, fp_bridge_count, multinomial
from app.utils.loaders import load_degree_sequence

KINDS = ("forests", "bridges", "fp-bridges")


def enumerate_command(degrees_path: str, kind: str) -> int:
    """
    Print every object of the requested kind as JSON lines, in lexicographic order.

    Args:
        degrees_path: Degree sequence JSON file
        kind: One of "forests", "bridges", "fp-bridges"

    Returns:
        Process exit code
    """
    degrees = load_degree_sequence(degrees_path)
    if kind == "forests":
        items = enumerate_forests(degrees)
    elif kind == "bridges":
        items = enumerate_bridges(degrees)
    elif kind == "fp-bridges":
        items = enumerate_fp_bridges(degrees)
    else:
        raise ConfigurationError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")

    logger.info(
        f"{degrees}: |Λ(s)| = {multinomial(degrees)}, |F(s)| = {fp_bridge_count(degrees)}, "
        f"printing {len(items)} {kind}"
    )
    for item in items:
        click.echo(item.to_json())
    return 0
