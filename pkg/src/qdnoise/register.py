"""Spin-1/2 register operators, dimer-singlet states, and decoherence rates.

Dense 2^N matrices throughout with a hard cap N <= 10; qubit 1 is the most
significant bit of the basis index and sigma^z |1> = +|1>.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .constants import HBAR

MAX_QUBITS = 10

_SIGMA = {
    "+": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),  # |1><0|
    "-": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),  # |0><1|
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
}
_FLIP = {"+": "-", "-": "+", "z": "z"}


def _check_n(n_qubits: int) -> None:
    if not (isinstance(n_qubits, int) and 1 <= n_qubits <= MAX_QUBITS):
        raise ValueError(f"n_qubits must be an integer in 1..{MAX_QUBITS}, got {n_qubits!r}")


@functools.lru_cache(maxsize=256)
def pauli_local(index: int, kind: str, n_qubits: int) -> np.ndarray:
    """sigma_i^kind acting on qubit `index` (1-based) of an N-qubit register."""
    _check_n(n_qubits)
    if kind not in _SIGMA:
        raise ValueError(f"kind must be one of '+', '-', 'z', got {kind!r}")
    if not 1 <= index <= n_qubits:
        raise ValueError(f"qubit index must be in 1..{n_qubits}, got {index}")
    out = np.array([[1.0 + 0.0j]])
    for slot in range(1, n_qubits + 1):
        out = np.kron(out, _SIGMA[kind] if slot == index else np.eye(2, dtype=complex))
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=64)
def collective_spin(kind: str, n_qubits: int) -> np.ndarray:
    """S^kind = sum_i sigma_i^kind."""
    out = sum(pauli_local(i, kind, n_qubits) for i in range(1, n_qubits + 1))
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=32)
def total_spin_casimir(n_qubits: int) -> np.ndarray:
    """Global sl(2) Casimir J^2 = S^- S^+ + (S^z/2)(S^z/2 + 1)."""
    sz_half = collective_spin("z", n_qubits) / 2.0
    out = collective_spin("-", n_qubits) @ collective_spin("+", n_qubits) + sz_half @ (
        sz_half + np.eye(2**n_qubits)
    )
    out.setflags(write=False)
    return out


def carrier_hamiltonian(splitting: float, n_qubits: int) -> np.ndarray:
    """Free register Hamiltonian (E/2) S^z, so each qubit is split by E."""
    return (splitting / 2.0) * collective_spin("z", n_qubits)


def _two_site_product(i: int, op_i: np.ndarray, j: int, op_j: np.ndarray, n_qubits: int) -> np.ndarray:
    """kron chain for sigma_i sigma_j without a full 2^N matmul."""
    out = np.array([[1.0 + 0.0j]])
    for slot in range(1, n_qubits + 1):
        if slot == i == j:
            factor = op_i @ op_j
        elif slot == i:
            factor = op_i
        elif slot == j:
            factor = op_j
        else:
            factor = np.eye(2, dtype=complex)
        out = np.kron(out, factor)
    return out


def _require_hermitian(name: str, matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {matrix.shape}")
    scale = np.linalg.norm(matrix) or 1.0
    if np.linalg.norm(matrix - matrix.conj().T) > 1e-10 * scale:
        raise ValueError(f"{name} must be Hermitian")
    return matrix


def _bilinear_hamiltonian(coeff_plus: np.ndarray, coeff_minus: np.ndarray) -> np.ndarray:
    """sum_eta sum_{ii'} C^(eta)_{ii'} sigma_i^{-eta} sigma_{i'}^{eta}."""
    n = coeff_plus.shape[0]
    _check_n(n)
    if coeff_minus.shape != coeff_plus.shape:
        raise ValueError("coefficient matrices must share one shape")
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cp = coeff_plus[i - 1, j - 1]
            cm = coeff_minus[i - 1, j - 1]
            if cp != 0.0:
                out += cp * _two_site_product(i, _SIGMA["-"], j, _SIGMA["+"], n)
            if cm != 0.0:
                out += cm * _two_site_product(i, _SIGMA["+"], j, _SIGMA["-"], n)
    return out


def effective_hamiltonian(gamma_plus: np.ndarray, gamma_minus: np.ndarray) -> np.ndarray:
    """H_eff: the short-time decay generator, positive for PSD Gamma inputs."""
    gp = _require_hermitian("gamma_plus", gamma_plus)
    gm = _require_hermitian("gamma_minus", gamma_minus)
    return _bilinear_hamiltonian(gp, gm)


def lamb_shift_hamiltonian(delta_plus: np.ndarray, delta_minus: np.ndarray) -> np.ndarray:
    """Coherent bath-induced renormalization of the register Hamiltonian."""
    dp = _require_hermitian("delta_plus", delta_plus)
    dm = _require_hermitian("delta_minus", delta_minus)
    return _bilinear_hamiltonian(dp, dm)


@dataclass(frozen=True)
class DimerPartition:
    """Disjoint pairing of the qubits 1..N (N even), e.g. ((1,2),(3,4))."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(tuple(int(x) for x in p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ValueError("partition must contain at least one pair")
        if any(len(p) != 2 for p in pairs):
            raise ValueError(f"each entry must be an index pair, got {pairs!r}")
        seen = [i for p in pairs for i in p]
        n = 2 * len(pairs)
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError(
                f"pairs must cover 1..{n} with each index exactly once, got {pairs!r}"
            )
        _check_n(n)

    @property
    def n_qubits(self) -> int:
        return 2 * len(self.pairs)


def singlet_dimer_state(partition: DimerPartition) -> np.ndarray:
    """Normalized tensor product of two-qubit singlets (|01> - |10>)/sqrt(2).

    The result is a global-spin singlet: S^z, S^+ and S^- all annihilate it.
    """
    n = partition.n_qubits
    dim = 2**n
    state = np.zeros(dim, dtype=complex)
    amp = 1.0 / math.sqrt(2.0 ** len(partition.pairs))
    for choice in product((0, 1), repeat=len(partition.pairs)):
        index = 0
        sign = 1.0
        for (i, j), first_down in zip(partition.pairs, choice):
            # first_down = 0 places |0_i 1_j> (+), 1 places |1_i 0_j> (-)
            bits = (0, 1) if first_down == 0 else (1, 0)
            if first_down:
                sign = -sign
            index |= bits[0] << (n - i)
            index |= bits[1] << (n - j)
        state[index] = sign * amp
    return state


def state_norm_check(psi: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError(f"state norm deviates from 1 by more than {tol}")
    return psi


def total_spin_variance(psi: np.ndarray) -> float:
    """Var(J^2) in the state psi; zero iff psi is a total-spin eigenstate."""
    psi = state_norm_check(psi)
    n = int(round(math.log2(psi.size)))
    j2 = total_spin_casimir(n)
    j2psi = j2 @ psi
    mean = np.vdot(psi, j2psi).real
    return float(np.vdot(j2psi, j2psi).real - mean**2)


def tau1_inverse(psi: np.ndarray, gamma_plus: np.ndarray, gamma_minus: np.ndarray) -> float:
    """First-order decoherence rate <psi| H_eff |psi> / hbar, ps^-1.

    Only valid (and only accepted) for total-spin eigenstates; the Lamb-shift
    matrices play no role at this order.
    """
    psi = state_norm_check(psi)
    variance = total_spin_variance(psi)
    if variance > 1e-8:
        raise ValueError(
            "tau1_inverse requires a total-spin eigenstate: "
            f"Var(J^2) = {variance:.3e} exceeds 1e-8"
        )
    h_eff = effective_hamiltonian(gamma_plus, gamma_minus)
    return float(np.vdot(psi, h_eff @ psi).real) / HBAR


def correlation_factor_fD(gamma: np.ndarray, partition: DimerPartition) -> float:
    """Multi-qubit correlation factor f_D = 1 - (2/N) Re sum_D Gamma_ii' / Gamma_11.

    1 for diagonal Gamma (independent decay), 0 for constant Gamma (the
    point-like register whose singlets are noiseless).
    """
    gamma = np.asarray(gamma, dtype=complex)
    n = partition.n_qubits
    if gamma.shape != (n, n):
        raise ValueError(f"gamma shape {gamma.shape} does not match partition on {n} qubits")
    g11 = gamma[0, 0]
    if g11 == 0:
        raise ValueError("Gamma_11 must be nonzero")
    acc = sum(gamma[i - 1, j - 1] for i, j in partition.pairs)
    return float(1.0 - (2.0 / n) * (acc / g11).real)
