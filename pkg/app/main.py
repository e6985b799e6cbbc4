"""
Main application entry point for the ForestWise CLI.

This module configures logging and exposes the `sample`, `enumerate`,
`verify` and `experiment` commands. Machine output goes to stdout, logs to
stderr.
"""

import sys
from typing import Callable, Optional

import click
from loguru import logger

from app.config import settings
from app.core.exceptions import ForestWiseError
from app.handlers import enumerate_command, experiment_command, sample_command, verify_command
from app.handlers.enumeration import KINDS
from app.services.experiments import EXPERIMENTS

EXIT_FAILED_VERDICTS = 1
EXIT_DOMAIN_ERROR = 2

UINT64 = click.IntRange(0, 2 ** 64 - 1)


class ForestWiseApp:
    """
    Main application class for ForestWise.

    Sets up the log sinks once and runs command handlers, turning domain
    errors into exit codes.
    """

    def __init__(self, log_level: Optional[str] = None):
        """
        Initialize the ForestWise application.

        Args:
            log_level: Overrides settings.log_level
        """
        level = (log_level or settings.log_level).upper()

        # Configure logging
        logger.remove()  # Remove default handler
        logger.add(
            sys.stderr,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
            level=level
        )

        # Add file logging if configured
        if settings.log_file_path:
            logger.add(
                settings.log_file_path,
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
                level=level,
                rotation="1 day",
                retention="30 days",
                compression="gz"
            )

        logger.debug("ForestWise application initialized")

    def run(self, handler: Callable[..., int], **kwargs) -> int:
        """
        Run a command handler.

        Returns:
            The handler's exit code, or 2 if it raised a ForestWiseError
        """
        try:
            return handler(**kwargs)
        except ForestWiseError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return EXIT_DOMAIN_ERROR
        except Exception as e:
            logger.error(f"Unexpected error in {handler.__name__}: {e}")
            raise


@click.group()
@click.option("--log-level", default=None, help="Overrides LOG_LEVEL")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """ForestWise: uniform random plane forests and their continuum limits."""
    ctx.obj = ForestWiseApp(log_level)


@cli.command()
@click.option("--degrees", "degrees_path", required=True, type=click.Path(dir_okay=False),
              help="Degree sequence JSON file")
@click.option("--seed", type=UINT64, default=None, help="Unsigned 64-bit seed")
@click.option("--count", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_obj
def sample(app: ForestWiseApp, degrees_path: str, seed: Optional[int], count: int) -> None:
    """Print uniform random forests as JSON lines."""
    seed = settings.default_seed if seed is None else seed
    sys.exit(app.run(sample_command, degrees_path=degrees_path, seed=seed, count=count))


@cli.command(name="enumerate")
@click.option("--degrees", "degrees_path", required=True, type=click.Path(dir_okay=False),
              help="Degree sequence JSON file")
@click.option("--kind", type=click.Choice(KINDS), default="forests", show_default=True)
@click.pass_obj
def enumerate_(app: ForestWiseApp, degrees_path: str, kind: str) -> None:
    """Print every forest or bridge of a small degree sequence."""
    sys.exit(app.run(enumerate_command, degrees_path=degrees_path, kind=kind))


@cli.command()
@click.option("--max-n", type=click.IntRange(1, 10), default=8, show_default=True)
@click.option("--max-degree", type=click.IntRange(1, 10), default=5, show_default=True)
@click.option("--out", "out_dir", default=None, help="Report directory")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Overrides WORKERS")
@click.pass_obj
def verify(app: ForestWiseApp, max_n: int, max_degree: int, out_dir: Optional[str],
           workers: Optional[int]) -> None:
    """Run the exhaustive small-n checks."""
    sys.exit(app.run(
        verify_command,
        max_n=max_n,
        max_degree=max_degree,
        out_dir=out_dir or settings.output_dir,
        workers=workers or settings.workers,
    ))


@cli.command()
@click.argument("name", type=click.Choice(sorted(EXPERIMENTS)))
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="Experiment config JSON (see docs/config_schema.md)")
@click.option("--seed", type=UINT64, default=None, help="Overrides the config seed")
@click.option("--out", "out_dir", default=None, help="Overrides the config output directory")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Overrides WORKERS")
@click.pass_obj
def experiment(app: ForestWiseApp, name: str, config_path: Optional[str], seed: Optional[int],
               out_dir: Optional[str], workers: Optional[int]) -> None:
    """Run one experiment and write report.json and its tables."""
    sys.exit(app.run(
        experiment_command,
        name=name,
        config_path=config_path,
        seed=seed,
        out_dir=out_dir,
        workers=workers or settings.workers,
    ))


def main() -> None:
    """Console entry point."""
    cli()


if __name__ == "__main__":
    main()
