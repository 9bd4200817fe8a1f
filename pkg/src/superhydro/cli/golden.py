"""Access to the golden data files.

The directory can be overridden with the ``SUPERHYDRO_DATA`` environment
variable.
"""
from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

ENV_VAR = "SUPERHYDRO_DATA"


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("superhydro") / "data"))


def read_data(name: str) -> str:
    return (data_dir() / name).read_text(encoding="utf-8")


def read_labelled(name: str) -> dict:
    """Read ``label: expression`` lines (comments start with ``#``)."""
    from .parser import parse

    out = {}
    for lineno, line in enumerate(read_data(name).splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, _, body = line.partition(":")
        if not body:
            raise ValueError(f"{name}:{lineno}: expected 'label: expression'")
        out[label.strip()] = parse(body)
    return out


def read_table(name: str = "brackets.txt") -> dict:
    """{(row, col): text} for the supercommutator table."""
    from ..superalgebra import GENERATORS

    out = {}
    for line in read_data(name).splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        row, _, cells = line.partition("|")
        vals = cells.split()
        if len(vals) != len(GENERATORS):
            raise ValueError(f"row {row.strip()} has {len(vals)} entries")
        for col, v in zip(GENERATORS, vals):
            out[(row.strip(), col)] = v
    return out
