"""
Command handlers for the ForestWise CLI.

One module per subcommand; each handler returns the process exit code.
"""

from .enumeration import enumerate_command
from .experiment import experiment_command
from .sample import sample_command
from .verify import verify_command

__all__ = [
    "enumerate_command",
    "experiment_command",
    "sample_command",
    "verify_command",
]
