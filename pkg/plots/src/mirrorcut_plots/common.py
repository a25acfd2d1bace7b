"""Shared CSV reading, schema checks, and figure plumbing."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from . import style


class SchemaError(Exception):
    """Input CSV does not match the documented schema."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: figure id, input CSV path(s), output image path."""

    figure_id: str
    inputs: tuple
    output: str
    labels: dict = field(default_factory=dict)


def read_records(path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a record CSV as named float columns, checking the schema first."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    columns = {}
    for col in required:
        pos = header.index(col)
        try:
            columns[col] = np.array([float(row[pos]) for row in rows])
        except (ValueError, IndexError):
            raise SchemaError(f"{path}: column {col!r} holds non-numeric data") from None
    return columns


def read_heatmap(path) -> np.ndarray:
    """Load a square heatmap CSV (header n,m1..mM; one labelled row per n)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    m = len(rows)
    expected = ["n"] + [f"m{j}" for j in range(1, m + 1)]
    if header != expected:
        raise SchemaError(f"{path}: heatmap header must be {expected}, got {header}")
    try:
        values = np.array([[float(tok) for tok in row[1:]] for row in rows])
    except ValueError:
        raise SchemaError(f"{path}: heatmap holds non-numeric data") from None
    if values.shape != (m, m):
        raise SchemaError(f"{path}: heatmap must be square, got {values.shape}")
    return values


def save(fig, path) -> None:
    """Write the rendered figure with fixed metadata."""
    fig.savefig(path, metadata=style.IMAGE_METADATA)


def input_output_parser(description: str, n_inputs: int = 1) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    if n_inputs == 1:
        parser.add_argument("--in", dest="inputs", nargs=1, required=True,
                            metavar="CSV", help="input CSV path")
    else:
        parser.add_argument("--in", dest="inputs", nargs=n_inputs, required=True,
                            metavar="CSV", help=f"{n_inputs} input CSV paths")
    parser.add_argument("--out", dest="output", required=True, help="output image path")
    return parser


def run_script(render, spec: FigureSpec) -> int:
    """Render one figure; schema problems exit 2, I/O problems exit 3."""
    try:
        render(spec)
    except SchemaError as err:
        print(f"{spec.figure_id}: schema error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"{spec.figure_id}: i/o error: {err}", file=sys.stderr)
        return 3
    return 0
