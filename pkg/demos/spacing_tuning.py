"""Decoherence rate of the dimer-singlet encoding vs inter-dot spacing.

The off-diagonal bath correlations oscillate in the spacing with period
2 pi / qbar, so the encoded rate dips by orders of magnitude whenever the
dots sit an integer number of resonant wavelengths apart.
"""

import numpy as np

from qdnoise import (
    ArrayGeometry,
    DimerPartition,
    MaterialParams,
    correlation_factor_fD,
    gamma_matrix,
    shell_wavevector,
    singlet_dimer_state,
    tau1_inverse,
)
from qdnoise.constants import HBAR

gaas = MaterialParams()
partition = DimerPartition(((1, 2), (3, 4)))
psi = singlet_dimer_state(partition)
abar = 2 * np.pi / shell_wavevector(5.0, gaas.sound_speed)

spacings = np.arange(1.0, 13.5, 0.05)
rates, factors = [], []
for a in spacings:
    geometry = ArrayGeometry(n_dots=4, well_width=4.0, splitting=5.0, spacing=float(a))
    g_plus = gamma_matrix("+", geometry, gaas, 10.0)
    g_minus = gamma_matrix("-", geometry, gaas, 10.0)
    rates.append(tau1_inverse(psi, g_plus, g_minus))
    factors.append(correlation_factor_fD(g_minus, partition))
rates = np.array(rates)
factors = np.array(factors)

uncorrelated = 4 * sum(
    gamma_matrix(eta, ArrayGeometry(4, 4.0, 5.0, abar), gaas, 10.0)[0, 0].real for eta in "+-"
) / (2 * HBAR)
print(f"uncorrelated reference rate: {uncorrelated:.4e} 1/ps")
print(f"resonant spacing abar = {abar:.4f} nm\n")

print(f"{'a (nm)':>8} {'tau1_inv (1/ps)':>16} {'f_D':>10}")
for a in (0.25 * abar, 0.5 * abar, abar, 2 * abar, 3 * abar):
    i = int(np.argmin(np.abs(spacings - a)))
    print(f"{spacings[i]:8.2f} {rates[i]:16.5e} {factors[i]:10.2e}")

minima = [
    (spacings[i], rates[i])
    for i in range(1, len(rates) - 1)
    if rates[i] < rates[i - 1] and rates[i] < rates[i + 1]
]
print("\nrate minima (suppression vs uncorrelated):")
for k, (a, r) in enumerate(minima, start=1):
    print(f"  n = {k}: a = {a:6.3f} nm  (n*abar = {k*abar:6.3f})  rate = {r:.3e}  x{uncorrelated/r:8.0f}")
