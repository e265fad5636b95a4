"""Result-CSV reading and per-kind schema validation.

The CSV contract: '#'-prefixed metadata lines, then one header row, then
numeric data rows.  Each figure kind requires an exact column header.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

KINDS = ("rate-vs-E", "rate-vs-a", "fidelity-vs-time")

EXPECTED_COLUMNS = {
    "rate-vs-E": ("E_meV", "rate_ps_inv"),
    "rate-vs-a": (
        "a_nm",
        "tau1_inv_ps_inv",
        "uncorrelated_rate_ps_inv",
        "fD_minus",
        "fD_plus",
    ),
    "fidelity-vs-time": ("t_ps", "fidelity", "trace_dev", "min_eig", "purity"),
}


class SchemaError(Exception):
    """Input file does not match the figure kind's CSV contract."""


@dataclass(frozen=True)
class ResultTable:
    path: Path
    metadata: tuple[str, ...]  # '#'-stripped metadata lines
    columns: tuple[str, ...]
    data: np.ndarray  # shape (rows, columns)

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def metadata_value(self, key: str) -> str | None:
        prefix = f"{key} = "
        for line in self.metadata:
            if line.startswith(prefix):
                return line.removeprefix(prefix)
        return None


def read_result_csv(path: str | Path) -> ResultTable:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    metadata: list[str] = []
    header: tuple[str, ...] | None = None
    rows: list[list[float]] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            if header is not None:
                raise SchemaError(f"{path}:{lineno}: metadata after the header row")
            metadata.append(line.lstrip("#").strip())
            continue
        if header is None:
            header = tuple(cell.strip() for cell in line.split(","))
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise SchemaError(
                f"{path}:{lineno}: expected {len(header)} cells, found {len(cells)}"
            )
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: non-numeric cell ({exc})") from exc
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return ResultTable(
        path=path, metadata=tuple(metadata), columns=header, data=np.array(rows)
    )


def validate_kind(table: ResultTable, kind: str) -> ResultTable:
    if kind not in EXPECTED_COLUMNS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of {KINDS}")
    expected = EXPECTED_COLUMNS[kind]
    if table.columns != expected:
        raise SchemaError(
            f"{table.path}: column mismatch for kind {kind!r}: "
            f"expected {','.join(expected)} but found {','.join(table.columns)}"
        )
    return table
