"""Deterministic figure rendering for the three result kinds."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_result_csv, validate_kind

# Stable ids and searchable text inside the SVG payload (no timestamps).
matplotlib.rcParams["svg.hashsalt"] = "figgen"
matplotlib.rcParams["svg.fonttype"] = "none"

_DEFAULT_SCALES = {
    "rate-vs-E": ("linear", "log"),
    "rate-vs-a": ("linear", "log"),
    "fidelity-vs-time": ("log", "linear"),
}


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str  # base path; .svg and .png are written
    x_scale: str | None = None
    y_scale: str | None = None


@dataclass
class RenderResult:
    written: list[Path] = field(default_factory=list)
    minima_count: int | None = None


def count_local_minima(values: np.ndarray) -> int:
    v = np.asarray(values, dtype=float)
    return int(np.sum((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])))


def _footnote(fig, tables):
    lines = []
    for table in tables[:1]:
        for entry in table.metadata:
            if len(lines) >= 3:
                break
            lines.append(entry if len(entry) < 110 else entry[:107] + "...")
    if lines:
        fig.text(0.01, 0.01, "\n".join(lines), fontsize=5, family="monospace", va="bottom")


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure kind to <output>.svg and <output>.png."""
    if not spec.inputs:
        raise SchemaError("at least one input CSV is required")
    if spec.kind != "fidelity-vs-time" and len(spec.inputs) != 1:
        raise SchemaError(f"kind {spec.kind!r} takes exactly one input CSV")
    tables = [validate_kind(read_result_csv(p), spec.kind) for p in spec.inputs]

    x_scale, y_scale = _DEFAULT_SCALES[spec.kind]
    x_scale = spec.x_scale or x_scale
    y_scale = spec.y_scale or y_scale

    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=150)
    result = RenderResult()

    if spec.kind == "rate-vs-E":
        t = tables[0]
        ax.plot(t.column("E_meV"), t.column("rate_ps_inv"), color="tab:blue")
        ax.set_xlabel("level splitting E (meV)")
        ax.set_ylabel("scattering rate (1/ps)")
        ax.set_title("Single-dot carrier-phonon scattering rate")
    elif spec.kind == "rate-vs-a":
        t = tables[0]
        rate = t.column("tau1_inv_ps_inv")
        floor = max(rate[rate > 0].min(), 1e-300) if np.any(rate > 0) else 1e-300
        ax.plot(t.column("a_nm"), np.maximum(rate, floor), color="tab:blue", label="dimer singlet")
        ax.plot(
            t.column("a_nm"),
            t.column("uncorrelated_rate_ps_inv"),
            color="tab:gray",
            linestyle="--",
            label="uncorrelated dots",
        )
        result.minima_count = count_local_minima(rate)
        ax.set_xlabel("inter-dot spacing a (nm)")
        ax.set_ylabel("decoherence rate (1/ps)")
        ax.set_title(f"Encoded decoherence rate vs spacing ({result.minima_count} minima)")
        ax.legend(loc="lower right", fontsize=8)
    else:  # fidelity-vs-time
        for table in tables:
            label = table.metadata_value("case") or table.path.stem
            mask = table.column("t_ps") > 0
            ax.plot(table.column("t_ps")[mask], table.column("fidelity")[mask], label=label)
        ax.set_xlabel("time (ps)")
        ax.set_ylabel("fidelity")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title("Encoded-state fidelity")
        ax.legend(loc="lower left", fontsize=8)

    ax.set_xscale(x_scale)
    ax.set_yscale(y_scale)
    ax.grid(True, which="both", alpha=0.25)
    _footnote(fig, tables)
    fig.tight_layout(rect=(0, 0.04, 1, 1))

    base = Path(spec.output)
    base.parent.mkdir(parents=True, exist_ok=True)
    svg = base.with_suffix(".svg")
    png = base.with_suffix(".png")
    fig.savefig(svg, metadata={"Date": None})
    fig.savefig(png, metadata={"Software": "figgen"})
    plt.close(fig)
    result.written = [svg, png]
    return result
