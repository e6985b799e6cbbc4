"""CSV blobs for report tables."""

from typing import Mapping, Sequence


def _cell(value) -> str:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def table_csv(columns: Mapping[str, Sequence]) -> str:
    """
    Render equal-length columns as CSV with a header row.

    Args:
        columns: Column name to values, in output order
    """
    names = list(columns)
    lengths = {len(columns[name]) for name in names}
    if len(lengths) > 1:
        raise ValueError(f"table columns differ in length: {sorted(lengths)}")
    rows = [",".join(names)]
    rows.extend(",".join(_cell(v) for v in row) for row in zip(*(columns[name] for name in names)))
    return "\n".join(rows) + "\n"


__all__ = ["table_csv"]
