"""CSV emission shared by all output modes: LF endings, 17 significant digits."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    return format(float(value), ".17g")


def write_columns(path, header, columns) -> Path:
    """Write equal-length ``columns`` under ``header``; booleans become 0/1."""
    path = Path(path)
    lengths = {len(c) for c in columns}
    if len(lengths) > 1:
        raise ValueError(f"column lengths differ: {sorted(lengths)}")
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])
    return path
