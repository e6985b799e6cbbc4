"""
Utility modules for ForestWise.

File loaders, report writers and CSV helpers.
"""

from .loaders import load_degree_sequence, load_experiment_config, write_report
from .tables import table_csv

__all__ = [
    "load_degree_sequence",
    "load_experiment_config",
    "write_report",
    "table_csv",
]
