"""Liouvillian and evolution engine: structure, backends, monitors."""

import numpy as np
import pytest

from qdnoise import (
    ArrayGeometry,
    build_superoperator,
    bose_occupation,
    carrier_hamiltonian,
    collective_spin,
    evolve,
    gamma_matrix,
    lamb_shift_hamiltonian,
    liouvillian_apply,
    singlet_dimer_state,
    tau1_inverse,
    validate_density_matrix,
)
from qdnoise import DimerPartition
from qdnoise.constants import HBAR

from conftest import random_psd_equal_diagonal


def _vec(rho):
    return rho.ravel(order="F")


def _random_rho(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def _random_generator_inputs(rng, n):
    gp = 1e-3 * random_psd_equal_diagonal(rng, n)
    gm = 3e-3 * random_psd_equal_diagonal(rng, n)
    dp = 1e-3 * (random_psd_equal_diagonal(rng, n) - 0.4 * np.eye(n))
    dm = 2e-3 * random_psd_equal_diagonal(rng, n)
    hc = carrier_hamiltonian(5.0, n)
    dh = lamb_shift_hamiltonian(dp, dm)
    return hc, dh, gp, gm


def test_liouvillian_is_traceless():
    rng = np.random.default_rng(7)
    hc, dh, gp, gm = _random_generator_inputs(rng, 2)
    for _ in range(5):
        rho = _random_rho(rng, 4)
        out = liouvillian_apply(rho, hc, dh, gp, gm)
        assert abs(np.trace(out)) < 1e-14


def test_liouvillian_stationary_eigenprojector():
    hc = carrier_hamiltonian(5.0, 2)
    zero2 = np.zeros((2, 2))
    zero4 = np.zeros((4, 4))
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0  # |00><00| is an H_c eigenprojector
    out = liouvillian_apply(rho, hc, zero4, zero2, zero2)
    assert np.linalg.norm(out) < 1e-16


def test_liouvillian_rate_convention_anchor():
    """Single qubit, T = 0: d rho_11 / dt = -2 Gamma-_11 / hbar."""
    gamma = 0.0066
    rho = np.diag([0.0, 1.0]).astype(complex)
    out = liouvillian_apply(
        rho,
        carrier_hamiltonian(5.0, 1),
        np.zeros((2, 2)),
        np.zeros((1, 1)),
        np.array([[gamma]]),
    )
    assert out[1, 1].real == pytest.approx(-2.0 * gamma / HBAR, rel=1e-14)


def test_liouvillian_dimension_mismatch():
    with pytest.raises(ValueError):
        liouvillian_apply(np.eye(4) / 4, np.eye(2), np.eye(4), np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        liouvillian_apply(np.eye(4) / 4, np.eye(4), np.eye(4), np.eye(3), np.eye(2))


def test_superoperator_matches_apply():
    rng = np.random.default_rng(11)
    hc, dh, gp, gm = _random_generator_inputs(rng, 3)
    sup = build_superoperator(hc, dh, gp, gm)
    for _ in range(3):
        rho = _random_rho(rng, 8)
        direct = liouvillian_apply(rho, hc, dh, gp, gm)
        via_sup = (sup @ _vec(rho)).reshape(8, 8, order="F")
        assert np.linalg.norm(direct - via_sup) <= 1e-12 * np.linalg.norm(direct)


def test_superoperator_dissipativity_and_trace_dual():
    rng = np.random.default_rng(13)
    hc, dh, gp, gm = _random_generator_inputs(rng, 2)
    sup = build_superoperator(hc, dh, gp, gm)
    eigvals = np.linalg.eigvals(sup)
    assert eigvals.real.max() <= 1e-10
    left = sup.conj().T @ _vec(np.eye(4, dtype=complex))
    assert np.linalg.norm(left) < 1e-12


def test_superoperator_singlet_kernel_for_constant_matrices(partition4):
    psi = singlet_dimer_state(partition4)
    rho = np.outer(psi, psi.conj())
    const_g = np.full((4, 4), 0.005, dtype=complex)
    const_d = np.full((4, 4), 0.003, dtype=complex)
    sup = build_superoperator(
        carrier_hamiltonian(5.0, 4), lamb_shift_hamiltonian(const_d, const_d), const_g, const_g
    )
    residual = np.linalg.norm(sup @ _vec(rho))
    assert residual < 1e-9


def test_superoperator_size_cap():
    n = 6
    dim = 2**n
    with pytest.raises(ValueError, match="stepping"):
        build_superoperator(
            np.zeros((dim, dim)), np.zeros((dim, dim)), np.zeros((n, n)), np.zeros((n, n))
        )


def test_density_matrix_validation():
    with pytest.raises(ValueError, match="Hermitian"):
        validate_density_matrix(np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(ValueError, match="trace"):
        validate_density_matrix(np.eye(2))
    with pytest.raises(ValueError, match="positive"):
        validate_density_matrix(np.diag([1.5, -0.5]))


def test_evolve_free_evolution_preserves_fidelity():
    psi = np.array([0, 1], dtype=complex)  # S^z eigenstate
    rho0 = np.outer(psi, psi.conj())
    zero1 = np.zeros((1, 1))
    zero2 = np.zeros((2, 2))
    rec = evolve(
        rho0,
        np.linspace(0.0, 50.0, 21),
        carrier_hamiltonian(5.0, 1),
        zero2,
        zero1,
        zero1,
        psi,
        method="adaptive-step",
    )
    assert np.all(np.abs(rec.fidelity - 1.0) < 1e-9)
    assert np.all(rec.purity > 1.0 - 1e-9)


def test_evolve_short_time_slope_is_twice_tau1(gaas, abar, partition4):
    """Initial |dF/dt| = 2 * tau1_inverse for <sigma> = 0 states.

    The dissipator convention is anchored by the 2 Gamma / hbar single-qubit
    decay; with that normalization the fidelity slope of a dimer singlet is
    exactly twice <H_eff>/hbar (the rate tau1_inverse reports).
    """
    geo = ArrayGeometry(n_dots=4, well_width=4.0, splitting=5.0, spacing=0.5 * abar)
    gp = gamma_matrix("+", geo, gaas, 10.0)
    gm = gamma_matrix("-", geo, gaas, 10.0)
    psi = singlet_dimer_state(partition4)
    analytic = tau1_inverse(psi, gp, gm)
    rho0 = np.outer(psi, psi.conj())
    t_grid = np.linspace(0.0, 1e-3 / analytic, 12)
    rec = evolve(
        rho0,
        t_grid,
        carrier_hamiltonian(5.0, 4),
        np.zeros((16, 16)),
        gp,
        gm,
        psi,
        method="adaptive-step",
    )
    coeffs = np.polyfit(rec.times, rec.fidelity, 2)
    slope = -coeffs[1]
    assert slope == pytest.approx(2.0 * analytic, rel=0.02)


def test_evolve_backends_agree_on_decade_grid(cset4, partition4):
    psi = singlet_dimer_state(partition4)
    rho0 = np.outer(psi, psi.conj())
    hc = carrier_hamiltonian(5.0, 4)
    dh = lamb_shift_hamiltonian(cset4.delta_plus, cset4.delta_minus)
    grid = np.concatenate([[0.0], np.geomspace(0.1, 1000.0, 40)])
    kwargs = dict(reference_state=psi)
    rec_a = evolve(rho0, grid, hc, dh, cset4.gamma_plus, cset4.gamma_minus, method="adaptive-step", rtol=1e-10, **kwargs)
    rec_s = evolve(rho0, grid, hc, dh, cset4.gamma_plus, cset4.gamma_minus, method="spectral", **kwargs)
    assert np.max(np.abs(rec_a.fidelity - rec_s.fidelity)) <= 1e-6


def test_evolve_thermal_fixed_point(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    gp = gamma_matrix("+", geo, gaas, 10.0)
    gm = gamma_matrix("-", geo, gaas, 10.0)
    n = bose_occupation(5.0, 10.0)
    psi1 = np.array([0, 1], dtype=complex)
    rho0 = np.outer(psi1, psi1.conj())
    rate = 2.0 * (gp[0, 0].real + gm[0, 0].real) / HBAR
    grid = np.linspace(0.0, 20.0 / rate, 30)
    rec = evolve(
        rho0, grid, carrier_hamiltonian(5.0, 1), np.zeros((2, 2)), gp, gm, psi1,
        method="spectral",
    )
    p1 = rec.fidelity[-1]
    assert p1 == pytest.approx(n / (2 * n + 1), abs=1e-6)
    # detailed-balance population ratio
    assert p1 / (1 - p1) == pytest.approx(np.exp(-5.0 / (0.08617 * 10.0)), rel=1e-4)


def test_evolve_monitor_columns_within_bounds(cset4, partition4):
    psi = singlet_dimer_state(partition4)
    rho0 = np.outer(psi, psi.conj())
    hc = carrier_hamiltonian(5.0, 4)
    dh = lamb_shift_hamiltonian(cset4.delta_plus, cset4.delta_minus)
    grid = np.concatenate([[0.0], np.geomspace(1.0, 1e5, 50)])
    rec = evolve(rho0, grid, hc, dh, cset4.gamma_plus, cset4.gamma_minus, psi, method="spectral")
    assert rec.trace_dev.max() < 1e-9
    assert rec.min_eig.min() > -1e-9
    assert np.all((rec.fidelity >= -1e-9) & (rec.fidelity <= 1.0 + 1e-9))
    assert np.all(np.diff(rec.times) > 0)


def test_evolve_input_validation(partition4):
    psi = singlet_dimer_state(partition4)
    rho0 = np.outer(psi, psi.conj())
    hc = carrier_hamiltonian(5.0, 4)
    z4 = np.zeros((4, 4))
    z16 = np.zeros((16, 16))
    with pytest.raises(ValueError, match="t_grid"):
        evolve(rho0, np.array([1.0, 0.5]), hc, z16, z4, z4, psi)
    with pytest.raises(ValueError, match="method"):
        evolve(rho0, np.array([0.0, 1.0]), hc, z16, z4, z4, psi, method="magic")
    superpos = np.zeros(16, dtype=complex)
    superpos[0] = superpos[3] = 1 / np.sqrt(2)  # mixes S^z sectors
    with pytest.raises(ValueError, match="S\\^z eigenstate"):
        evolve(rho0, np.array([0.0, 1.0]), hc, z16, z4, z4, superpos)
    bad_h = np.zeros((16, 16), dtype=complex)
    bad_h[0, 1] = bad_h[1, 0] = 1.0  # does not commute with S^z
    with pytest.raises(ValueError, match="commute"):
        evolve(rho0, np.array([0.0, 1.0]), hc, bad_h, z4, z4, psi)


def test_spectral_cap(gaas):
    n = 6
    dim = 2**n
    part = DimerPartition(((1, 2), (3, 4), (5, 6)))
    psi = singlet_dimer_state(part)
    rho0 = np.outer(psi, psi.conj())
    zn = np.zeros((n, n))
    with pytest.raises(ValueError, match="adaptive-step"):
        evolve(
            rho0,
            np.array([0.0, 1.0]),
            carrier_hamiltonian(5.0, n),
            np.zeros((dim, dim)),
            zn,
            zn,
            psi,
            method="spectral",
        )


def test_sz_commutes_with_generator_parts(cset4):
    hc = carrier_hamiltonian(5.0, 4)
    dh = lamb_shift_hamiltonian(cset4.delta_plus, cset4.delta_minus)
    sz = collective_spin("z", 4)
    for mat in (hc, dh):
        assert np.linalg.norm(sz @ mat - mat @ sz) < 1e-12 * max(np.linalg.norm(mat), 1.0)
