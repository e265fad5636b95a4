"""Single-dot scattering rate vs level splitting: the phonon bottleneck.

Energy conservation selects phonons on the shell |q| = E / (hbar c_s), so a
larger splitting pushes the transition toward shorter-wavelength phonons the
confined state overlaps poorly with.  Past a kinematic maximum near 4.35 meV
the rate collapses by orders of magnitude.
"""

import numpy as np

from qdnoise import ArrayGeometry, MaterialParams, bose_occupation, shell_wavevector, single_dot_rate

gaas = MaterialParams()
geometry = ArrayGeometry(n_dots=1, well_width=4.0, splitting=5.0, spacing=0.0)

print(f"{'E (meV)':>8} {'qbar (1/nm)':>12} {'n(E, 10K)':>12} {'rate (1/ps)':>14} {'1/rate':>12}")
for energy in np.arange(1.0, 10.5, 0.5):
    rate = single_dot_rate(float(energy), geometry, gaas, 10.0)
    qbar = shell_wavevector(float(energy), gaas.sound_speed)
    occ = bose_occupation(float(energy), 10.0)
    print(f"{energy:8.2f} {qbar:12.4f} {occ:12.3e} {rate:14.5e} {1/rate:10.1f} ps")

rate5 = single_dot_rate(5.0, geometry, gaas, 10.0)
rate10 = single_dot_rate(10.0, geometry, gaas, 10.0)
print(f"\nsuppression from 5 meV to 10 meV: {rate5 / rate10:.0f}x")

print("\nthermal decomposition at E = 5 meV:")
for temperature in (0.0, 4.0, 10.0, 20.0, 77.0):
    rate = single_dot_rate(5.0, geometry, gaas, temperature)
    print(f"  T = {temperature:5.1f} K  ->  rate = {rate:.5e} 1/ps")
