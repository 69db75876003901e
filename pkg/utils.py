"""
Utility functions for the gtrans CLI and reports.
"""
import hashlib
import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
from loguru import logger

from fpmod import PresentedModule, radical_layers


def setup_logging(level: str = "INFO"):
    """
    Route loguru output to stderr at the given level.

    Args:
        level: Log level name
    """
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format="{time:HH:mm:ss} | {level: <8} | {message}")


def digest_text(text: str) -> str:
    """
    SHA-256 hex digest of a text.

    Args:
        text: Text to hash

    Returns:
        Hex digest
    """
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def digest_file(file_path: str) -> str:
    """SHA-256 hex digest of a file's contents."""
    return hashlib.sha256(Path(file_path).read_bytes()).hexdigest()


def format_matrix(matrix: Any) -> str:
    """
    Render a residue matrix one row per line.

    Args:
        matrix: FpMatrix or integer array

    Returns:
        Rows of space-separated residues, "(empty)" for a matrix with no entries
    """
    a = matrix.ints if hasattr(matrix, "ints") else np.asarray(matrix, dtype=np.int64)
    if a.size == 0:
        return f"(empty {a.shape[0]}x{a.shape[1] if a.ndim > 1 else 0})"
    width = max(len(str(int(x))) for x in a.reshape(-1))
    return "\n".join(" ".join(f"{int(x):>{width}}" for x in row) for row in a)


def format_table(table: Sequence[int], start: int = 1, label: str = "Ext") -> str:
    """
    One-line rendering of an indexed dimension table.

    Args:
        table: Dimensions indexed from ``start``
        start: Index of the first entry
        label: Prefix for each entry

    Returns:
        Text like "Ext^1=0 Ext^2=1"
    """
    return " ".join(f"{label}^{i}={v}" for i, v in enumerate(table, start))


def describe_module(m: PresentedModule) -> Dict[str, Any]:
    """
    Summary of a module for reports.

    Args:
        m: Module

    Returns:
        Dictionary with name, dimension, presentation size, side and radical layers
    """
    info = m.describe()
    info["ring"] = m.algebra.base.name
    info["radical_layers"] = list(radical_layers(m))
    return info


def create_summary_stats(tables: List[Sequence[int]]) -> Dict[str, Any]:
    """
    Summary statistics over a list of dimension tables.

    Args:
        tables: Dimension tables of equal meaning (e.g. Ext tables of a sweep)

    Returns:
        Dictionary with count, number of all-zero tables and maximum entry
    """
    if not tables:
        return {"count": 0, "all_zero": 0, "max_entry": 0}
    return {
        "count": len(tables),
        "all_zero": sum(1 for t in tables if not any(t)),
        "max_entry": max((max(t) for t in tables if len(t)), default=0),
    }
