"""qdnoise: phonon-induced decoherence in stacked quantum-dot qubit arrays.

First-principles bath correlation matrices from device geometry, a
Born-Markov Lindblad engine for the register density matrix, and the
dimer-singlet encoding whose decoherence rate vanishes at tuned spacing.
"""

__version__ = "0.1.0"

from .bath import (
    CorrelationSet,
    angular_overlap_integral,
    delta_matrix,
    gamma_bruteforce_oracle,
    gamma_matrix,
    single_dot_rate,
)
from .constants import HBAR, KB
from .errors import ConfigError, EvolutionError, NumericsError, QdnoiseError
from .lindblad import (
    TrajectoryRecord,
    build_superoperator,
    evolve,
    liouvillian_apply,
    validate_density_matrix,
)
from .model import (
    ArrayGeometry,
    MaterialParams,
    Wavevector,
    bose_occupation,
    coupling_g,
    deformation_amplitude,
    inplane_form_factor,
    oscillator_length,
    shell_wavevector,
    validate_device,
    well_form_factor,
)
from .register import (
    DimerPartition,
    carrier_hamiltonian,
    collective_spin,
    correlation_factor_fD,
    effective_hamiltonian,
    lamb_shift_hamiltonian,
    pauli_local,
    singlet_dimer_state,
    tau1_inverse,
    total_spin_variance,
)

__all__ = [
    "__version__",
    "HBAR",
    "KB",
    "ArrayGeometry",
    "MaterialParams",
    "Wavevector",
    "CorrelationSet",
    "DimerPartition",
    "TrajectoryRecord",
    "ConfigError",
    "EvolutionError",
    "NumericsError",
    "QdnoiseError",
    "angular_overlap_integral",
    "bose_occupation",
    "build_superoperator",
    "carrier_hamiltonian",
    "collective_spin",
    "correlation_factor_fD",
    "coupling_g",
    "deformation_amplitude",
    "delta_matrix",
    "effective_hamiltonian",
    "evolve",
    "gamma_bruteforce_oracle",
    "gamma_matrix",
    "inplane_form_factor",
    "lamb_shift_hamiltonian",
    "liouvillian_apply",
    "oscillator_length",
    "pauli_local",
    "shell_wavevector",
    "single_dot_rate",
    "singlet_dimer_state",
    "tau1_inverse",
    "total_spin_variance",
    "validate_density_matrix",
    "validate_device",
    "well_form_factor",
]
