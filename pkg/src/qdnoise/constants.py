"""Physical constants in the internal (meV, nm, ps, K) unit system.

All rates produced by the package are ps^-1 and all energies meV, so hbar
is order unity and the quadrature/ODE problems stay well conditioned.
This module is the only place hbar (or any other constant below) is defined.
"""

# Reduced Planck constant, meV ps
HBAR = 0.6582119

# Boltzmann constant, meV / K
KB = 0.08617

# Free-electron mass, meV ps^2 / nm^2  (m_e c^2 / c^2 in internal units)
FREE_ELECTRON_MASS = 5.685630e-3

# Conversion factor: 1 kg/m^3 expressed in meV ps^2 / nm^5
KG_PER_M3 = 6.241509074
