"""Reading the harness's commented-header CSV format."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

import numpy as np


class TableError(ValueError):
    """Malformed, empty, or missing input file; the message names the path."""


@dataclass(frozen=True)
class Table:
    path: Path
    header: Dict[str, str]
    columns: List[str]
    data: np.ndarray  # (n_rows, n_columns)

    def col(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise TableError(f"{self.path}: missing column {name!r} "
                             f"(has {self.columns})")
        return self.data[:, self.columns.index(name)]

    def header_float(self, key: str) -> float:
        if key not in self.header:
            raise TableError(f"{self.path}: header lacks {key!r}")
        try:
            return float(self.header[key])
        except ValueError:
            raise TableError(f"{self.path}: header {key!r} is not numeric: "
                             f"{self.header[key]!r}") from None


def read_table(path) -> Table:
    path = Path(path)
    if not path.is_file():
        raise TableError(f"{path}: no such file")
    header: Dict[str, str] = {}
    columns: List[str] = []
    rows: List[List[float]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].partition("=")
                if sep:
                    header[key.strip()] = value.strip()
                continue
            if not columns:
                columns = [c.strip() for c in line.split(",")]
                continue
            fields = line.split(",")
            if len(fields) != len(columns):
                raise TableError(f"{path}:{lineno}: expected "
                                 f"{len(columns)} fields, got {len(fields)}")
            try:
                rows.append([float(x) for x in fields])
            except ValueError:
                raise TableError(
                    f"{path}:{lineno}: non-numeric field in {line!r}") from None
    if not columns:
        raise TableError(f"{path}: empty file (no column row)")
    if not rows:
        raise TableError(f"{path}: no data rows")
    return Table(path=path, header=header, columns=columns,
                 data=np.asarray(rows))
