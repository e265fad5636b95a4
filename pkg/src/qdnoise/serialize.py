"""JSON matrix documents and CSV result files with metadata headers."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .bath import CorrelationSet
from .model import ArrayGeometry, MaterialParams


def complex_array_to_pairs(arr: np.ndarray) -> dict:
    """Encode a complex array as {shape, data} with row-major [re, im] pairs."""
    arr = np.asarray(arr, dtype=complex)
    flat = arr.reshape(-1)
    return {
        "shape": list(arr.shape),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def pairs_to_complex_array(doc: dict) -> np.ndarray:
    shape = tuple(int(s) for s in doc["shape"])
    data = np.array([complex(re, im) for re, im in doc["data"]], dtype=complex)
    if data.size != int(np.prod(shape)):
        raise ValueError(f"matrix document data length {data.size} does not match shape {shape}")
    return data.reshape(shape)


def correlation_set_to_json_dict(cset: CorrelationSet) -> dict:
    return {
        "kind": "correlation-set",
        "geometry": asdict(cset.geometry),
        "materials": asdict(cset.materials),
        "temperature": cset.temperature,
        "matrices": {
            name: complex_array_to_pairs(getattr(cset, name))
            for name in ("gamma_plus", "gamma_minus", "delta_plus", "delta_minus")
        },
    }


def correlation_set_from_json_dict(doc: dict) -> CorrelationSet:
    if doc.get("kind") != "correlation-set":
        raise ValueError(f"expected kind 'correlation-set', got {doc.get('kind')!r}")
    return CorrelationSet(
        geometry=ArrayGeometry(**doc["geometry"]),
        materials=MaterialParams(**doc["materials"]),
        temperature=float(doc["temperature"]),
        **{name: pairs_to_complex_array(doc["matrices"][name]) for name in doc["matrices"]},
    )


def dump_correlation_set(cset: CorrelationSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(correlation_set_to_json_dict(cset), indent=1) + "\n")


def load_correlation_set(path: str | Path) -> CorrelationSet:
    return correlation_set_from_json_dict(json.loads(Path(path).read_text()))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_csv(
    path: str | Path,
    columns: tuple[str, ...],
    rows,
    metadata: dict,
    *,
    tool_line: str,
) -> None:
    """Write a result CSV with '#'-prefixed metadata lines.

    The version line is kept on its own so byte-level reproducibility checks
    can exclude it; everything else is a pure function of the metadata and
    the rows.
    """
    lines = [f"# {tool_line}", f"# version = {__version__}"]
    for key in sorted(metadata):
        value = metadata[key]
        if isinstance(value, (dict, list)):
            value = canonical_json(value)
        lines.append(f"# {key} = {value}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _format_cell(cell) -> str:
    if isinstance(cell, (float, np.floating)):
        return repr(float(cell))
    return str(cell)
