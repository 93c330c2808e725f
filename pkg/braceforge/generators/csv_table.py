"""CSV export of the circle multiplication table."""

import csv
from pathlib import Path

import numpy as np

from braceforge.algebra.brace import BraceTable


def write_circle_csv(A: BraceTable, path: str | Path) -> None:
    """Rows are a, columns are b, entries are the index of a o b."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["a\\b", *range(A.order)])
        everything = np.arange(A.order)
        for a in range(A.order):
            writer.writerow([a, *A.circle_array(a, everything).tolist()])
