"""Pole count vs charge speed in a gyrotropic medium.

With two distinct in-plane permittivity eigenvalues there are two emission
thresholds: below both no Cherenkov pole exists, between them one branch
radiates, above both the determinant crosses zero twice. The staircase is
the plane-wave anatomy behind the `sweep --axis charge.beta` subcommand.
"""

import numpy as np

from cherenkov_cone import ChargeState, Tabulated, find_poles, threshold_beta

omega = 3.0e15
grid = np.linspace(0.9 * omega, 1.1 * omega, 5)


def flat(value):
    return np.full(grid.shape, value, dtype=complex)


m = Tabulated(omega=grid, eps_z=flat(3.0), eps_plus=flat(2.2),
              eps_minus=flat(1.44))

b1 = threshold_beta(omega, 1, m)
b2 = threshold_beta(omega, 2, m)
print("thresholds: branch 1 at beta = %.6f, branch 2 at beta = %.6f"
      % (b1, b2))
print()
print("  beta    poles   k_perp c / omega")
for beta in np.linspace(0.60, 0.98, 12):
    poles = find_poles(omega, ChargeState(beta=float(beta)), m)
    ks = "  ".join("%.4f" % (p.k_perp * 2.99792458e10 / omega) for p in poles)
    print("  %.3f   %d       %s" % (beta, len(poles), ks))
