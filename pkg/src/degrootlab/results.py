"""Shared result container for recipe and scenario runs."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .serialize import emit_matrix, emit_table

__all__ = ["RunResult", "write_result"]


@dataclass(frozen=True)
class RunResult:
    """Printable lines plus tables and matrices to write to disk."""

    name: str
    lines: tuple[str, ...] = ()
    tables: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)


def write_result(result: RunResult, out_dir) -> list[Path]:
    """Write every table (CSV) and matrix (plain text) under out_dir.

    File names are <name>_<table>.csv and <name>_<matrix>.txt; returns
    the written paths in a deterministic order.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for table_name, records in result.tables.items():
        path = out / f"{result.name}_{table_name}.csv"
        emit_table(records, path)
        written.append(path)
    for matrix_name, matrix in result.matrices.items():
        path = out / f"{result.name}_{matrix_name}.txt"
        emit_matrix(matrix, path)
        written.append(path)
    return written
