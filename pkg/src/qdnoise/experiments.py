"""Experiment drivers: the three figure reproductions plus matrix utilities.

Each driver is a pure function of its config; sweep points may be dispatched
to a process pool, but rows are always written in parameter order so output
bytes depend only on (config, seed).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bath import CorrelationSet, gamma_matrix, single_dot_rate
from .config import ExperimentConfig
from .constants import HBAR
from .errors import ConfigError, NumericsError
from .lindblad import TrajectoryRecord, evolve
from .model import ArrayGeometry
from .register import (
    DimerPartition,
    carrier_hamiltonian,
    correlation_factor_fD,
    lamb_shift_hamiltonian,
    singlet_dimer_state,
    state_norm_check,
    tau1_inverse,
)
from .serialize import dump_correlation_set, write_csv

OUTPUT_DIR_ENV = "QDNOISE_OUT_DIR"

FIG3_CASES = (("A", 0.25), ("B", 0.5), ("C", 1.0))
FIG3_SHORT_CASE_T_MAX = 2000.0  # ps; cases A and B decay long before this


@dataclass
class SweepRecord:
    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)


def resolve_output_dir(config: ExperimentConfig, override: str | None) -> Path:
    out = override or os.environ.get(OUTPUT_DIR_ENV) or config.output_dir
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _map_points(worker, payloads, threads: int):
    if threads <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, payloads, chunksize=max(1, len(payloads) // (4 * threads))))


def _fig1_point(payload) -> tuple:
    config, energy = payload
    rate = single_dot_rate(
        energy,
        config.geometry,
        config.materials,
        config.temperature,
        rtol=config.integrator.quadrature_rtol,
    )
    return (energy, rate)


def run_fig1(config: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> SweepRecord:
    """Single-dot scattering rate vs level splitting E."""
    if config.sweep is None:
        raise ConfigError("fig1 requires a sweep over E")
    energies = config.sweep.values()
    lo = config.materials.lo_phonon_energy
    if energies[0] <= 0 or energies[-1] >= lo:
        raise ConfigError(
            f"sweep: fig1 E range must stay inside (0, {lo}) meV, got [{energies[0]}, {energies[-1]}]"
        )
    rows = _map_points(_fig1_point, [(config, e) for e in energies], threads)
    record = SweepRecord(
        columns=("E_meV", "rate_ps_inv"),
        rows=rows,
        metadata={"config": config.to_dict(), "seed": config.seed},
    )
    if out_dir is not None:
        write_csv(
            Path(out_dir) / "fig1_rate_vs_E.csv",
            record.columns,
            record.rows,
            record.metadata,
            tool_line="qdnoise fig1 single-dot rate vs splitting",
        )
    return record


def _fig2_point(payload) -> tuple:
    config, spacing = payload
    geometry = ArrayGeometry(
        n_dots=config.geometry.n_dots,
        well_width=config.geometry.well_width,
        splitting=config.geometry.splitting,
        spacing=spacing,
    )
    rtol = config.integrator.quadrature_rtol
    g_plus = gamma_matrix("+", geometry, config.materials, config.temperature, rtol=rtol)
    g_minus = gamma_matrix("-", geometry, config.materials, config.temperature, rtol=rtol)
    partition = config.initial_state.partition()
    psi = singlet_dimer_state(partition)
    rate = tau1_inverse(psi, g_plus, g_minus)
    uncorrelated = geometry.n_dots * (g_plus[0, 0].real + g_minus[0, 0].real) / (2.0 * HBAR)
    fd_minus = correlation_factor_fD(g_minus, partition)
    fd_plus = correlation_factor_fD(g_plus, partition) if g_plus[0, 0] != 0 else fd_minus
    return (spacing, rate, uncorrelated, fd_minus, fd_plus)


def run_fig2(config: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> SweepRecord:
    """Dimer-singlet decoherence rate vs inter-dot spacing for the array."""
    if config.sweep is None:
        raise ConfigError("fig2 requires a sweep over the spacing a")
    if config.initial_state.kind != "dimer-singlet":
        raise ConfigError("fig2 is defined for the dimer-singlet encoding")
    spacings = config.sweep.values()
    if spacings[0] <= 0:
        raise ConfigError(f"sweep: fig2 spacings must be positive, got start = {spacings[0]}")
    rows = _map_points(_fig2_point, [(config, a) for a in spacings], threads)
    record = SweepRecord(
        columns=("a_nm", "tau1_inv_ps_inv", "uncorrelated_rate_ps_inv", "fD_minus", "fD_plus"),
        rows=rows,
        metadata={"config": config.to_dict(), "seed": config.seed},
    )
    if out_dir is not None:
        write_csv(
            Path(out_dir) / "fig2_rate_vs_a.csv",
            record.columns,
            record.rows,
            record.metadata,
            tool_line="qdnoise fig2 dimer-singlet decoherence rate vs spacing",
        )
    return record


def initial_state_vector(config: ExperimentConfig) -> np.ndarray:
    spec = config.initial_state
    if spec.kind == "dimer-singlet":
        return singlet_dimer_state(spec.partition())
    amps = np.array([complex(re, im) for re, im in spec.amplitudes], dtype=complex)
    if amps.size != 2**config.geometry.n_dots:
        raise ConfigError(
            f"initial_state.amplitudes: expected {2**config.geometry.n_dots} entries, got {amps.size}"
        )
    return state_norm_check(amps)


def _time_grid(t_max: float, n_points: int) -> np.ndarray:
    grid = np.geomspace(1e-2, t_max, n_points - 1)
    return np.concatenate([[0.0], grid])


def trajectory_for_device(
    config: ExperimentConfig,
    geometry: ArrayGeometry,
    cset: CorrelationSet | None = None,
    t_max: float | None = None,
) -> TrajectoryRecord:
    """Evolve the configured initial state for one device realization."""
    if cset is None:
        cset = CorrelationSet.compute(
            geometry,
            config.materials,
            config.temperature,
            cutoff_multiplier=config.integrator.cutoff_multiplier,
            rtol=config.integrator.quadrature_rtol,
        )
    psi = initial_state_vector(config)
    rho0 = np.outer(psi, psi.conj())
    h_c = carrier_hamiltonian(geometry.splitting, geometry.n_dots)
    dh_c = lamb_shift_hamiltonian(cset.delta_plus, cset.delta_minus)
    grid = _time_grid(t_max or config.integrator.t_max_ps, config.integrator.n_points)
    return evolve(
        rho0,
        grid,
        h_c,
        dh_c,
        cset.gamma_plus,
        cset.gamma_minus,
        reference_state=psi,
        method=config.integrator.method,
        rtol=config.integrator.rtol,
    )


def run_fig3(
    config: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1
) -> dict[str, TrajectoryRecord]:
    """Fidelity vs time at the three spacings A, B, C (C at the resonant abar).

    Lamb-shift terms are included.  A failing case is reported after the
    other cases have completed and been written.
    """
    abar = config.resonant_spacing()
    results: dict[str, TrajectoryRecord] = {}
    failures: dict[str, Exception] = {}
    for label, fraction in FIG3_CASES:
        spacing = fraction * abar
        geometry = ArrayGeometry(
            n_dots=config.geometry.n_dots,
            well_width=config.geometry.well_width,
            splitting=config.geometry.splitting,
            spacing=spacing,
        )
        t_max = config.integrator.t_max_ps
        if label != "C":
            t_max = min(t_max, FIG3_SHORT_CASE_T_MAX)
        try:
            record = trajectory_for_device(config, geometry, t_max=t_max)
        except (NumericsError, ValueError) as exc:
            failures[label] = exc
            continue
        record.metadata.update({"case": label, "spacing_nm": spacing, "abar_nm": abar})
        results[label] = record
        if out_dir is not None:
            write_csv(
                Path(out_dir) / f"fig3_fidelity_case{label}.csv",
                TrajectoryRecord.COLUMNS,
                list(record.rows()),
                {
                    "config": config.to_dict(),
                    "seed": config.seed,
                    "case": label,
                    "spacing_nm": spacing,
                    "abar_nm": abar,
                },
                tool_line=f"qdnoise fig3 fidelity trajectory, case {label}",
            )
    if failures:
        detail = "; ".join(f"case {k}: {v}" for k, v in failures.items())
        raise NumericsError(f"fig3 case failure(s): {detail}")
    return results


def run_gamma_dump(config: ExperimentConfig, out_dir: str | Path) -> Path:
    """Compute and save the CorrelationSet for the configured device."""
    cset = CorrelationSet.compute(
        config.geometry,
        config.materials,
        config.temperature,
        cutoff_multiplier=config.integrator.cutoff_multiplier,
        rtol=config.integrator.quadrature_rtol,
    )
    path = Path(out_dir) / "correlation_set.json"
    dump_correlation_set(cset, path)
    return path


def run_evolve(
    config: ExperimentConfig,
    out_dir: str | Path,
    matrices: CorrelationSet | None = None,
) -> TrajectoryRecord:
    """Evolve the configured initial state, optionally on saved/synthetic matrices."""
    geometry = matrices.geometry if matrices is not None else config.geometry
    if matrices is not None and matrices.geometry.n_dots != config.geometry.n_dots:
        raise ConfigError(
            f"matrices are for {matrices.geometry.n_dots} dots but config has "
            f"{config.geometry.n_dots}"
        )
    record = trajectory_for_device(config, geometry, cset=matrices)
    write_csv(
        Path(out_dir) / "evolve_trajectory.csv",
        TrajectoryRecord.COLUMNS,
        list(record.rows()),
        {"config": config.to_dict(), "seed": config.seed},
        tool_line="qdnoise evolve trajectory",
    )
    return record
