"""Experiment configuration: JSON documents with validated, echoed defaults."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .model import ArrayGeometry, MaterialParams, shell_wavevector, validate_device
from .register import DimerPartition

EXPERIMENT_IDS = ("fig1-rate-vs-E", "fig2-rate-vs-a", "fig3-fidelity")

_DEFAULT_SWEEPS = {
    "fig1-rate-vs-E": {"start": 1.0, "stop": 10.0, "step": 0.25},
    "fig2-rate-vs-a": {"start": 0.5, "stop": 14.0, "step": 0.05},
}


@dataclass(frozen=True)
class SweepSpec:
    start: float
    stop: float
    step: float

    def values(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + k * self.step for k in range(n)]


@dataclass(frozen=True)
class IntegratorSettings:
    """Time integration plus quadrature knobs, echoed into every artifact."""

    method: str = "spectral"
    rtol: float = 1e-9
    t_max_ps: float = 1e6
    n_points: int = 200
    quadrature_rtol: float = 1e-8
    cutoff_multiplier: float = 10.0


@dataclass(frozen=True)
class InitialStateSpec:
    kind: str = "dimer-singlet"
    pairs: tuple[tuple[int, int], ...] = ((1, 2), (3, 4))
    amplitudes: tuple[tuple[float, float], ...] | None = None

    def partition(self) -> DimerPartition:
        return DimerPartition(self.pairs)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str | None
    materials: MaterialParams = field(default_factory=MaterialParams)
    geometry: ArrayGeometry = field(
        default_factory=lambda: ArrayGeometry(n_dots=4, well_width=4.0, splitting=5.0, spacing=4.2267)
    )
    temperature: float = 10.0
    sweep: SweepSpec | None = None
    initial_state: InitialStateSpec = field(default_factory=InitialStateSpec)
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    output_dir: str = "out"
    seed: int = 1234

    def resonant_spacing(self) -> float:
        """abar = 2 pi / qbar for the configured device."""
        return 2.0 * math.pi / shell_wavevector(self.geometry.splitting, self.materials.sound_speed)

    def to_dict(self) -> dict:
        doc = {
            "experiment": self.experiment,
            "materials": {
                "sound_speed": self.materials.sound_speed,
                "mass_density": self.materials.mass_density,
                "deformation_potential": self.materials.deformation_potential,
                "effective_mass_ratio": self.materials.effective_mass_ratio,
                "lo_phonon_energy": self.materials.lo_phonon_energy,
            },
            "geometry": {
                "n_dots": self.geometry.n_dots,
                "well_width": self.geometry.well_width,
                "splitting": self.geometry.splitting,
                "spacing": self.geometry.spacing,
            },
            "temperature": self.temperature,
            "initial_state": {
                "kind": self.initial_state.kind,
                "pairs": [list(p) for p in self.initial_state.pairs],
                "amplitudes": [list(a) for a in self.initial_state.amplitudes]
                if self.initial_state.amplitudes is not None
                else None,
            },
            "integrator": {
                "method": self.integrator.method,
                "rtol": self.integrator.rtol,
                "t_max_ps": self.integrator.t_max_ps,
                "n_points": self.integrator.n_points,
                "quadrature_rtol": self.integrator.quadrature_rtol,
                "cutoff_multiplier": self.integrator.cutoff_multiplier,
            },
            "output_dir": self.output_dir,
            "seed": self.seed,
        }
        if self.sweep is not None:
            doc["sweep"] = {"start": self.sweep.start, "stop": self.sweep.stop, "step": self.sweep.step}
        else:
            doc["sweep"] = None
        return doc


def _reject_unknown(doc: dict, allowed: set[str], where: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")


def _get_number(doc: dict, key: str, where: str, default=None):
    if key not in doc or doc[key] is None:
        if default is None:
            raise ConfigError(f"{where}.{key}: required")
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return value


def config_from_dict(doc: dict, *, require_experiment: bool = True) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError(f"config root must be an object, got {type(doc).__name__}")
    _reject_unknown(
        doc,
        {
            "experiment",
            "materials",
            "geometry",
            "temperature",
            "sweep",
            "initial_state",
            "integrator",
            "output_dir",
            "seed",
        },
        "config",
    )

    experiment = doc.get("experiment")
    if experiment is not None and experiment not in EXPERIMENT_IDS:
        raise ConfigError(f"experiment: must be one of {EXPERIMENT_IDS}, got {experiment!r}")
    if require_experiment and experiment is None:
        raise ConfigError("experiment: required (one of " + ", ".join(EXPERIMENT_IDS) + ")")

    mat_doc = doc.get("materials") or {}
    _reject_unknown(
        mat_doc,
        {"sound_speed", "mass_density", "deformation_potential", "effective_mass_ratio", "lo_phonon_energy"},
        "materials",
    )
    defaults = MaterialParams()
    try:
        materials = MaterialParams(
            sound_speed=_get_number(mat_doc, "sound_speed", "materials", defaults.sound_speed),
            mass_density=_get_number(mat_doc, "mass_density", "materials", defaults.mass_density),
            deformation_potential=_get_number(
                mat_doc, "deformation_potential", "materials", defaults.deformation_potential
            ),
            effective_mass_ratio=_get_number(
                mat_doc, "effective_mass_ratio", "materials", defaults.effective_mass_ratio
            ),
            lo_phonon_energy=_get_number(
                mat_doc, "lo_phonon_energy", "materials", defaults.lo_phonon_energy
            ),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    geo_doc = doc.get("geometry") or {}
    _reject_unknown(geo_doc, {"n_dots", "well_width", "splitting", "spacing"}, "geometry")
    n_dots = geo_doc.get("n_dots", 4)
    if isinstance(n_dots, bool) or not isinstance(n_dots, int):
        raise ConfigError(f"geometry.n_dots: expected an integer, got {n_dots!r}")
    default_spacing = 2.0 * math.pi / shell_wavevector(
        _get_number(geo_doc, "splitting", "geometry", 5.0), materials.sound_speed
    )
    try:
        geometry = ArrayGeometry(
            n_dots=n_dots,
            well_width=_get_number(geo_doc, "well_width", "geometry", 4.0),
            splitting=_get_number(geo_doc, "splitting", "geometry", 5.0),
            spacing=_get_number(geo_doc, "spacing", "geometry", default_spacing),
        )
        validate_device(geometry, materials)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    temperature = _get_number(doc, "temperature", "config", 10.0)
    if temperature < 0:
        raise ConfigError(f"temperature: must be >= 0, got {temperature}")

    sweep_doc = doc.get("sweep")
    if sweep_doc is None and experiment in _DEFAULT_SWEEPS:
        sweep_doc = _DEFAULT_SWEEPS[experiment]
    sweep = None
    if sweep_doc is not None:
        _reject_unknown(sweep_doc, {"start", "stop", "step"}, "sweep")
        sweep = SweepSpec(
            start=_get_number(sweep_doc, "start", "sweep"),
            stop=_get_number(sweep_doc, "stop", "sweep"),
            step=_get_number(sweep_doc, "step", "sweep"),
        )
        if sweep.step <= 0 or sweep.stop < sweep.start:
            raise ConfigError(
                f"sweep: needs step > 0 and stop >= start, got {sweep_doc!r}"
            )

    init_doc = doc.get("initial_state") or {}
    _reject_unknown(init_doc, {"kind", "pairs", "amplitudes"}, "initial_state")
    kind = init_doc.get("kind", "dimer-singlet")
    if kind not in ("dimer-singlet", "amplitudes"):
        raise ConfigError(
            f"initial_state.kind: must be 'dimer-singlet' or 'amplitudes', got {kind!r}"
        )
    pairs_doc = init_doc.get("pairs")
    if pairs_doc is None:
        pairs = tuple((2 * k + 1, 2 * k + 2) for k in range(geometry.n_dots // 2)) or ((1, 2),)
    else:
        try:
            pairs = tuple(tuple(int(x) for x in p) for p in pairs_doc)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"initial_state.pairs: expected a list of index pairs, got {pairs_doc!r}") from exc
    amplitudes = None
    if init_doc.get("amplitudes") is not None:
        try:
            amplitudes = tuple((float(re), float(im)) for re, im in init_doc["amplitudes"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                "initial_state.amplitudes: expected a list of [re, im] pairs"
            ) from exc
    if kind == "amplitudes" and amplitudes is None:
        raise ConfigError("initial_state.amplitudes: required when kind = 'amplitudes'")
    if kind == "dimer-singlet":
        if geometry.n_dots % 2 != 0:
            raise ConfigError(
                f"initial_state: dimer-singlet needs an even dot count, geometry.n_dots = {geometry.n_dots}"
            )
        try:
            partition = DimerPartition(pairs)
        except ValueError as exc:
            raise ConfigError(f"initial_state.pairs: {exc}") from exc
        if partition.n_qubits != geometry.n_dots:
            raise ConfigError(
                f"initial_state.pairs: covers {partition.n_qubits} qubits but geometry.n_dots = {geometry.n_dots}"
            )
    initial_state = InitialStateSpec(kind=kind, pairs=pairs, amplitudes=amplitudes)

    integ_doc = doc.get("integrator") or {}
    _reject_unknown(
        integ_doc,
        {"method", "rtol", "t_max_ps", "n_points", "quadrature_rtol", "cutoff_multiplier"},
        "integrator",
    )
    method = integ_doc.get("method", "spectral")
    if method not in ("spectral", "adaptive-step"):
        raise ConfigError(
            f"integrator.method: must be 'spectral' or 'adaptive-step', got {method!r}"
        )
    n_points = integ_doc.get("n_points", 200)
    if isinstance(n_points, bool) or not isinstance(n_points, int) or n_points < 2:
        raise ConfigError(f"integrator.n_points: expected an integer >= 2, got {n_points!r}")
    integrator = IntegratorSettings(
        method=method,
        rtol=_get_number(integ_doc, "rtol", "integrator", 1e-9),
        t_max_ps=_get_number(integ_doc, "t_max_ps", "integrator", 1e6),
        n_points=n_points,
        quadrature_rtol=_get_number(integ_doc, "quadrature_rtol", "integrator", 1e-8),
        cutoff_multiplier=_get_number(integ_doc, "cutoff_multiplier", "integrator", 10.0),
    )
    if integrator.rtol <= 0 or integrator.quadrature_rtol <= 0:
        raise ConfigError("integrator: rtol and quadrature_rtol must be > 0")
    if integrator.cutoff_multiplier < 5:
        raise ConfigError(
            f"integrator.cutoff_multiplier: must be >= 5, got {integrator.cutoff_multiplier}"
        )
    if integrator.t_max_ps <= 0:
        raise ConfigError(f"integrator.t_max_ps: must be > 0, got {integrator.t_max_ps}")

    output_dir = doc.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError(f"output_dir: expected a non-empty string, got {output_dir!r}")
    seed = doc.get("seed", 1234)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed: expected a nonnegative integer, got {seed!r}")

    return ExperimentConfig(
        experiment=experiment,
        materials=materials,
        geometry=geometry,
        temperature=temperature,
        sweep=sweep,
        initial_state=initial_state,
        integrator=integrator,
        output_dir=output_dir,
        seed=seed,
    )


def parse_config(path: str | Path, *, require_experiment: bool = True) -> ExperimentConfig:
    """Load, validate, and materialize defaults for a JSON config file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    try:
        return config_from_dict(doc, require_experiment=require_experiment)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def default_config(experiment: str | None) -> ExperimentConfig:
    return config_from_dict({"experiment": experiment}, require_experiment=False)
