"""Liouvillian construction and density-matrix evolution.

Two backends: embedded adaptive Runge-Kutta stepping (DOP853) for short and
medium times, and dense-superoperator eigendecomposition for the long-time
fidelity curves.  Both integrate in the rotating frame of the free register
Hamiltonian H_c = (E/2) S^z, which is exact because every generator term is
S^z-balanced; fidelities are reported against S^z-eigenstate references,
for which the frame change drops out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .constants import HBAR
from .errors import EvolutionError
from .register import collective_spin, pauli_local, state_norm_check

MAX_SPECTRAL_QUBITS = 5  # 4^N <= 1024 for the dense superoperator

_MONITOR_TOL = 1e-9


def _n_qubits_of(matrix: np.ndarray) -> int:
    dim = matrix.shape[0]
    n = int(round(math.log2(dim)))
    if 2**n != dim or matrix.shape != (dim, dim):
        raise ValueError(f"operator shape {matrix.shape} is not a 2^N x 2^N square")
    return n


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check the Hermiticity / unit-trace / positivity invariants of rho."""
    rho = np.asarray(rho, dtype=complex)
    _n_qubits_of(rho)
    scale = np.linalg.norm(rho) or 1.0
    if np.linalg.norm(rho - rho.conj().T) > 1e-10 * scale:
        raise ValueError("density matrix must be Hermitian to 1e-10")
    if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
        raise ValueError("density matrix trace must be 1 to 1e-10")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-9:
        raise ValueError("density matrix must be positive semidefinite to 1e-9")
    return rho


def liouvillian_apply(
    rho: np.ndarray,
    h_carrier: np.ndarray,
    lamb_shift: np.ndarray,
    gamma_plus: np.ndarray,
    gamma_minus: np.ndarray,
) -> np.ndarray:
    """Right-hand side d(rho)/dt of the master equation, ps^-1 units of rho.

    (i/hbar) [rho, H_c + dH_c]
      + (1/hbar) sum_eta sum_ii' Gamma^(eta)_ii'
            ( [s_i^eta rho, s_i'^(-eta)] + [s_i^eta, rho s_i'^(-eta)] )
    """
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits_of(rho)
    for name, mat in (("h_carrier", h_carrier), ("lamb_shift", lamb_shift)):
        if np.asarray(mat).shape != rho.shape:
            raise ValueError(f"{name} shape does not match rho")
    h_total = np.asarray(h_carrier, dtype=complex) + np.asarray(lamb_shift, dtype=complex)
    out = (1j / HBAR) * (rho @ h_total - h_total @ rho)
    for eta, gam in (("+", gamma_plus), ("-", gamma_minus)):
        gam = np.asarray(gam, dtype=complex)
        if gam.shape != (n, n):
            raise ValueError(f"gamma^({eta}) must be {n} x {n}, got {gam.shape}")
        for i in range(1, n + 1):
            s_i = pauli_local(i, eta, n)
            for j in range(1, n + 1):
                g = gam[i - 1, j - 1]
                if g == 0.0:
                    continue
                s_j_dag = pauli_local(j, "-" if eta == "+" else "+", n)
                sandwich = s_i @ rho @ s_j_dag
                ks = s_j_dag @ s_i
                out += (g / HBAR) * (2.0 * sandwich - ks @ rho - rho @ ks)
    return out


def build_superoperator(
    h_carrier: np.ndarray,
    lamb_shift: np.ndarray,
    gamma_plus: np.ndarray,
    gamma_minus: np.ndarray,
) -> np.ndarray:
    """Column-stacking matrix representation of the Liouvillian, 4^N x 4^N.

    vec(rho) stacks columns; applying the result to vec(rho) agrees with
    liouvillian_apply to machine precision.  Dense path only: N <= 5.
    """
    h_carrier = np.asarray(h_carrier, dtype=complex)
    n = _n_qubits_of(h_carrier)
    if n > MAX_SPECTRAL_QUBITS:
        raise ValueError(
            f"dense superoperator capped at N = {MAX_SPECTRAL_QUBITS} "
            f"(got N = {n}); use the adaptive stepping path instead"
        )
    dim = 2**n
    eye = np.eye(dim, dtype=complex)
    h_total = h_carrier + np.asarray(lamb_shift, dtype=complex)
    # vec(A rho B) = (B^T kron A) vec(rho)
    sup = (1j / HBAR) * (np.kron(h_total.T, eye) - np.kron(eye, h_total))
    for eta, gam in (("+", gamma_plus), ("-", gamma_minus)):
        gam = np.asarray(gam, dtype=complex)
        for i in range(1, n + 1):
            s_i = pauli_local(i, eta, n)
            for j in range(1, n + 1):
                g = gam[i - 1, j - 1]
                if g == 0.0:
                    continue
                s_j_dag = pauli_local(j, "-" if eta == "+" else "+", n)
                ks = s_j_dag @ s_i
                sup += (g / HBAR) * (
                    2.0 * np.kron(s_j_dag.T, s_i) - np.kron(eye, ks) - np.kron(ks.T, eye)
                )
    return sup


@dataclass
class TrajectoryRecord:
    """Sampled evolution: fidelity against a reference plus sanity monitors."""

    times: np.ndarray
    fidelity: np.ndarray
    trace_dev: np.ndarray
    min_eig: np.ndarray
    purity: np.ndarray
    metadata: dict = field(default_factory=dict)

    def rows(self):
        return zip(self.times, self.fidelity, self.trace_dev, self.min_eig, self.purity)

    COLUMNS = ("t_ps", "fidelity", "trace_dev", "min_eig", "purity")


def _check_sz_eigenstate(psi: np.ndarray, n: int) -> None:
    szpsi = collective_spin("z", n) @ psi
    m = np.vdot(psi, szpsi).real
    if np.linalg.norm(szpsi - m * psi) > 1e-9:
        raise ValueError(
            "reference state must be an S^z eigenstate for frame-independent fidelity"
        )


def _monitor(t: float, rho: np.ndarray, reference: np.ndarray) -> tuple[float, float, float, float]:
    trace_dev = abs(np.trace(rho) - 1.0)
    herm_dev = np.linalg.norm(rho - rho.conj().T)
    if trace_dev > _MONITOR_TOL or herm_dev > _MONITOR_TOL:
        raise EvolutionError(
            f"trajectory monitor breach at t = {t} ps: "
            f"trace_dev = {trace_dev:.3e}, hermiticity_dev = {herm_dev:.3e}"
        )
    herm = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm).min())
    if min_eig < -_MONITOR_TOL:
        raise EvolutionError(
            f"trajectory monitor breach at t = {t} ps: min eigenvalue = {min_eig:.3e}"
        )
    fid = float(np.vdot(reference, herm @ reference).real)
    if not -_MONITOR_TOL <= fid <= 1.0 + _MONITOR_TOL:
        raise EvolutionError(f"fidelity {fid!r} outside [0, 1] at t = {t} ps")
    purity = float(np.trace(herm @ herm).real)
    return float(trace_dev), min_eig, fid, purity


def evolve(
    rho0: np.ndarray,
    t_grid: np.ndarray,
    h_carrier: np.ndarray,
    lamb_shift: np.ndarray,
    gamma_plus: np.ndarray,
    gamma_minus: np.ndarray,
    reference_state: np.ndarray,
    method: str = "adaptive-step",
    rtol: float = 1e-9,
) -> TrajectoryRecord:
    """Evolve rho0 on t_grid (ps) and record fidelity against reference_state.

    method 'adaptive-step' uses an embedded adaptive RK (DOP853); 'spectral'
    diagonalizes the dense superoperator and is the only practical route to
    microsecond horizons.  The integration happens in the rotating frame of
    h_carrier, which must commute with S^z (it does for (E/2) S^z); the
    reference must be an S^z eigenstate so lab- and rotating-frame fidelities
    coincide.
    """
    rho0 = validate_density_matrix(rho0)
    n = _n_qubits_of(rho0)
    reference = state_norm_check(np.asarray(reference_state, dtype=complex))
    if reference.size != rho0.shape[0]:
        raise ValueError("reference state dimension does not match rho0")
    _check_sz_eigenstate(reference, n)

    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or np.any(np.diff(t_grid) <= 0) or t_grid[0] < 0:
        raise ValueError("t_grid must be a strictly increasing 1-D array of times >= 0")

    # Rotating frame of h_carrier: valid because every remaining generator
    # term is S^z-balanced; enforced here rather than assumed.
    sz = collective_spin("z", n)
    for name, mat in (("h_carrier", h_carrier), ("lamb_shift", lamb_shift)):
        mat = np.asarray(mat, dtype=complex)
        comm = sz @ mat - mat @ sz
        if np.linalg.norm(comm) > 1e-9 * max(np.linalg.norm(mat), 1.0):
            raise ValueError(f"{name} must commute with S^z for the rotating-frame engine")
    zero_h = np.zeros_like(rho0)

    if method == "spectral":
        rhos = _evolve_spectral(rho0, t_grid, zero_h, lamb_shift, gamma_plus, gamma_minus, n)
    elif method == "adaptive-step":
        rhos = _evolve_adaptive(rho0, t_grid, zero_h, lamb_shift, gamma_plus, gamma_minus, n, rtol)
    else:
        raise ValueError(f"method must be 'adaptive-step' or 'spectral', got {method!r}")

    cols = np.array([_monitor(t, rho, reference) for t, rho in zip(t_grid, rhos)])
    return TrajectoryRecord(
        times=t_grid.copy(),
        fidelity=cols[:, 2],
        trace_dev=cols[:, 0],
        min_eig=cols[:, 1],
        purity=cols[:, 3],
        metadata={"method": method, "rtol": rtol, "n_qubits": n},
    )


def _evolve_adaptive(rho0, t_grid, h_rot, lamb_shift, gamma_plus, gamma_minus, n, rtol):
    dim = rho0.shape[0]
    if n <= MAX_SPECTRAL_QUBITS:
        sup = build_superoperator(h_rot, lamb_shift, gamma_plus, gamma_minus)

        def rhs(_t, y):
            return sup @ y

    else:

        def rhs(_t, y):
            rho = y.reshape(dim, dim, order="F")
            return liouvillian_apply(rho, h_rot, lamb_shift, gamma_plus, gamma_minus).ravel(
                order="F"
            )

    t0 = 0.0
    t_end = float(t_grid[-1])
    y0 = rho0.ravel(order="F")
    if t_end == 0.0:
        return [rho0]
    sol = solve_ivp(
        rhs,
        (t0, t_end),
        y0,
        method="DOP853",
        t_eval=t_grid,
        rtol=rtol,
        atol=rtol * 1e-3,
        dense_output=False,
    )
    if not sol.success:
        raise EvolutionError(f"adaptive integration failed: {sol.message}")
    return [sol.y[:, k].reshape(dim, dim, order="F") for k in range(sol.y.shape[1])]


def _evolve_spectral(rho0, t_grid, h_rot, lamb_shift, gamma_plus, gamma_minus, n):
    if n > MAX_SPECTRAL_QUBITS:
        raise ValueError(
            f"spectral evolution capped at N = {MAX_SPECTRAL_QUBITS}; "
            "use method='adaptive-step'"
        )
    dim = rho0.shape[0]
    sup = build_superoperator(h_rot, lamb_shift, gamma_plus, gamma_minus)
    eigvals, eigvecs = np.linalg.eig(sup)
    y0 = rho0.ravel(order="F")
    coeffs = np.linalg.solve(eigvecs, y0)

    recon = eigvecs @ coeffs
    recon_err = np.linalg.norm(recon - y0)
    if recon_err > 1e-10:
        raise EvolutionError(
            "spectral backend: eigenbasis reconstruction of the initial state "
            f"failed (residual {recon_err:.3e}); the superoperator is too "
            "defective for eigen-evolution"
        )
    # Dissipativity guard: a positive real part beyond roundoff means the
    # generator is not a valid Lindbladian.
    tol = 1e-10 * max(np.abs(eigvals).max(), 1.0)
    if eigvals.real.max() > tol:
        raise EvolutionError(
            f"superoperator has eigenvalue with positive real part {eigvals.real.max():.3e}"
        )
    out = []
    clipped = np.minimum(eigvals.real, 0.0) + 1j * eigvals.imag
    for t in t_grid:
        y_t = eigvecs @ (np.exp(clipped * t) * coeffs)
        out.append(y_t.reshape(dim, dim, order="F"))
    return out
