"""Plain-text emission of matrices and result tables.

Matrix format: first line the agent count n, then n rows of n numbers,
space-separated. Numbers are printed with 17 significant digits so a
write-then-read round trip reproduces every float bit-identically.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .networks import WeightMatrix, as_weight_matrix

__all__ = ["emit_matrix", "read_matrix", "emit_table", "format_number"]


def format_number(value) -> str:
    """Render a float with full round-trip precision."""
    return f"{float(value):.17g}"


def emit_matrix(W, path) -> None:
    """Write a weight matrix in the plain-text format."""
    wm = as_weight_matrix(W)
    lines = [str(wm.n)]
    for row in wm.w:
        lines.append(" ".join(format_number(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path) -> WeightMatrix:
    """Read a weight matrix written by emit_matrix."""
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ValueError(f"empty matrix file {path}")
    n = int(text[0])
    if len(text) != n + 1:
        raise ValueError(f"matrix file {path} announces {n} rows, has {len(text) - 1}")
    rows = [[float(v) for v in line.split()] for line in text[1:]]
    w = np.asarray(rows, dtype=float)
    if w.shape != (n, n):
        raise ValueError(f"matrix file {path} rows have inconsistent lengths")
    return WeightMatrix.from_array(w)


def emit_table(records, path) -> None:
    """Write a list of dict records as CSV with a header row.

    Floats are printed with full round-trip precision; other values are
    written as-is.
    """
    records = list(records)
    if not records:
        raise ValueError("cannot emit an empty table")
    fieldnames = list(records[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for rec in records:
            row = {}
            for key in fieldnames:
                value = rec[key]
                if isinstance(value, float) or isinstance(value, np.floating):
                    row[key] = format_number(value)
                else:
                    row[key] = value
            writer.writerow(row)
