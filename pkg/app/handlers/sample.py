"""
Handler for the `sample` command.

Draws uniform plane forests for a degree-sequence file and writes them to
stdout as JSON lines.
"""

import click
from loguru import logger

from app.core.rng import SeededRng, StreamPurpose
from app.services.sampler import ForestSampler
from app.utils.loaders import load_degree_sequence


def sample_command(degrees_path: str, seed: int, count: int) -> int:
    """
    Print `count` uniform forests, one JSON object per line.

    Forest i uses stream i of the seed, so a prefix of a longer run is
    reproduced by a shorter one.

    Args:
        degrees_path: Degree sequence JSON file
        seed: Unsigned 64-bit seed
        count: Number of forests

    Returns:
        Process exit code
    """
    degrees = load_degree_sequence(degrees_path)
    sampler = ForestSampler(degrees)
    logger.info(f"Sampling {count} forests for {degrees} with seed {seed}")
    for i in range(count):
        forest = sampler.sample(SeededRng.for_replicate(seed, StreamPurpose.FOREST, i))
        click.echo(forest.to_json())
    return 0
