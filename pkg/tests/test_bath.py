"""Bath correlation matrices: shell reduction vs oracle, PV integral, rates."""

import math

import numpy as np
import pytest

from qdnoise import (
    ArrayGeometry,
    CorrelationSet,
    NumericsError,
    bose_occupation,
    delta_matrix,
    gamma_bruteforce_oracle,
    gamma_matrix,
    shell_wavevector,
    single_dot_rate,
)
from qdnoise.bath import angular_overlap_integral
from qdnoise.constants import HBAR


def test_gamma_absorption_vanishes_at_zero_temperature(gaas):
    geo = ArrayGeometry(n_dots=3, well_width=4.0, splitting=5.0, spacing=3.0)
    gp = gamma_matrix("+", geo, gaas, 0.0)
    assert np.all(gp == 0.0)


def test_gamma_pointlike_at_zero_spacing(gaas):
    geo = ArrayGeometry(n_dots=3, well_width=4.0, splitting=5.0, spacing=0.0)
    gm = gamma_matrix("-", geo, gaas, 10.0)
    assert np.allclose(gm, gm[0, 0])
    eigs = np.linalg.eigvalsh(gm)
    assert eigs[-1] == pytest.approx(3 * gm[0, 0].real, rel=1e-12)
    assert np.all(np.abs(eigs[:-1]) < 1e-15 * abs(gm[0, 0]))


def test_gamma_phase_alignment_at_resonant_spacing(gaas, abar):
    geo = ArrayGeometry(n_dots=2, well_width=4.0, splitting=5.0, spacing=abar)
    gm = gamma_matrix("-", geo, gaas, 10.0)
    assert (gm[0, 1] / gm[0, 0]).real >= 0.95


def test_correlation_set_invariants(cset4):
    cset4.validate()  # hermiticity, PSD, diagonals
    for name in ("gamma_plus", "gamma_minus"):
        m = getattr(cset4, name)
        assert np.allclose(np.diag(m), np.diag(m)[0])  # identical dots
    assert np.all(
        np.diag(cset4.gamma_minus).real >= np.diag(cset4.gamma_plus).real
    )


def test_detailed_balance(cset4, gaas):
    n = bose_occupation(5.0, 10.0)
    ratio = cset4.gamma_plus[0, 0].real / cset4.gamma_minus[0, 0].real
    assert ratio == pytest.approx(n / (n + 1.0), rel=1e-10)


def test_gamma_offdiagonal_is_periodic_in_spacing(gaas, abar):
    """Gamma_12(a) oscillates with period 2 pi / qbar within 2% over 3 periods."""
    spacings = np.arange(1.0, 14.0, 0.02)
    vals = []
    for a in spacings:
        geo = ArrayGeometry(n_dots=2, well_width=4.0, splitting=5.0, spacing=float(a))
        vals.append(gamma_matrix("-", geo, gaas, 10.0, rtol=1e-7)[0, 1].real)
    vals = np.array(vals)
    maxima = [
        spacings[i]
        for i in range(1, len(vals) - 1)
        if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]
    ]
    assert len(maxima) >= 3
    gaps = np.diff(maxima[:4])
    assert np.all(np.abs(gaps - abar) <= 0.02 * abar + 0.02)


def test_oracle_single_dot_consistency(gaas):
    """N = 1 oracle reproduces the rate decomposition rate * hbar / 2."""
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    total = np.zeros((1, 1), dtype=complex)
    err2 = 0.0
    for eta in "+-":
        m, se = gamma_bruteforce_oracle(eta, geo, gaas, 10.0, 400_000, seed=5)
        total += m
        err2 += se[0, 0] ** 2
    expected = single_dot_rate(5.0, geo, gaas, 10.0) * HBAR / 2.0
    diff = abs(total[0, 0].real - expected)
    assert diff <= 3.0 * math.sqrt(err2)
    assert diff <= 0.02 * expected


def test_oracle_zero_temperature_absorption(gaas):
    geo = ArrayGeometry(n_dots=2, well_width=4.0, splitting=5.0, spacing=3.0)
    m, se = gamma_bruteforce_oracle("+", geo, gaas, 0.0, 100_000, seed=3)
    assert np.all(m == 0.0)
    assert np.all(se == 0.0)


def test_oracle_reproducible_and_hermitian(gaas, abar):
    geo = ArrayGeometry(n_dots=3, well_width=4.0, splitting=5.0, spacing=abar)
    m1, se1 = gamma_bruteforce_oracle("-", geo, gaas, 10.0, 250_000, seed=77)
    m2, se2 = gamma_bruteforce_oracle("-", geo, gaas, 10.0, 250_000, seed=77)
    assert np.array_equal(m1, m2) and np.array_equal(se1, se2)
    assert np.allclose(m1, m1.conj().T, atol=0)
    assert np.linalg.eigvalsh(m1).min() >= -1e-12 * np.linalg.norm(m1)


def test_oracle_sample_floor(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    with pytest.raises(ValueError, match="1e5"):
        gamma_bruteforce_oracle("-", geo, gaas, 10.0, 10_000)


def test_angular_quadrature_nonconvergence_diagnostics():
    with pytest.raises(NumericsError, match="did not converge"):
        angular_overlap_integral(1.5, 4.2, 15.0, 4.0, rtol=1e-16)


def test_delta_cutoff_convergence(gaas, abar):
    geo = ArrayGeometry(n_dots=2, well_width=4.0, splitting=5.0, spacing=abar)
    d10 = delta_matrix("-", geo, gaas, 10.0, 10.0)
    d20 = delta_matrix("-", geo, gaas, 10.0, 20.0)
    assert np.max(np.abs(d20 - d10) / np.abs(d10)) <= 1e-6


def test_delta_pointlike_and_hermitian(gaas):
    geo = ArrayGeometry(n_dots=3, well_width=4.0, splitting=5.0, spacing=0.0)
    dm = delta_matrix("-", geo, gaas, 10.0)
    assert np.allclose(dm, dm[0, 0])
    assert np.linalg.norm(dm - dm.conj().T) <= 1e-12 * np.linalg.norm(dm)


def test_delta_cutoff_precondition(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    with pytest.raises(ValueError, match="cutoff_multiplier"):
        delta_matrix("-", geo, gaas, 10.0, 3.0)


def test_eta_argument_checked(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    with pytest.raises(ValueError, match="eta"):
        gamma_matrix("z", geo, gaas, 10.0)


def test_single_dot_rate_thermal_share(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    r_cold = single_dot_rate(5.0, geo, gaas, 0.0)
    r_warm = single_dot_rate(5.0, geo, gaas, 10.0)
    n = bose_occupation(5.0, 10.0)
    assert r_cold / r_warm == pytest.approx(1.0 / (2.0 * n + 1.0), rel=1e-12)


def test_single_dot_rate_bottleneck(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    assert single_dot_rate(5.0, geo, gaas, 10.0) / single_dot_rate(10.0, geo, gaas, 10.0) > 1.0


def test_single_dot_rate_shape(gaas):
    """The rate grows to a kinematic maximum near 4.35 meV, then collapses.

    Characterizes the model: the [4, 10] strict-decrease window of the
    acceptance suite clips this maximum (see the acceptance module).
    """
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    energies = np.arange(3.5, 10.01, 0.05)
    rates = np.array([single_dot_rate(float(e), geo, gaas, 10.0) for e in energies])
    peak = energies[np.argmax(rates)]
    assert peak == pytest.approx(4.35, abs=0.1)
    tail = rates[energies >= 4.5]
    assert np.all(np.diff(tail) < 0)


def test_single_dot_rate_domain(gaas):
    geo = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)
    with pytest.raises(ValueError):
        single_dot_rate(36.0, geo, gaas, 10.0)
    with pytest.raises(ValueError):
        single_dot_rate(0.0, geo, gaas, 10.0)


def test_correlation_set_scales_with_thermal_factors(cset4):
    n = bose_occupation(5.0, 10.0)
    assert np.allclose(cset4.gamma_plus * (n + 1.0), cset4.gamma_minus * n, rtol=1e-12)
    assert np.allclose(cset4.delta_plus * (n + 1.0), cset4.delta_minus * n, rtol=1e-12)
