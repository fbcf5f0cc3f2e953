"""The two Cherenkov cones: identical in glass, nine orders apart in EIT vapor.

A charge above threshold radiates wavevectors on a cone (half-aperture phi,
set by the coherence condition) while the energy rides a second cone
(half-aperture theta, set by the group velocity). In a weakly dispersive
dielectric the two coincide; in a driven three-level vapor the transparency
window drops the group velocity to m/s scales and the energy cone collapses
onto the trajectory.
"""

import numpy as np

from cherenkov_cone import (ChargeState, IsotropicConstant, absorption_curvature,
                            cone_geometry, find_poles, parse_scenario,
                            preset_path, threshold_beta)

print("=== glass, n = 1.5 ===")
glass = IsotropicConstant(n=1.5)
omega = 3.0e15
for beta in (0.70, 0.80, 0.90, 0.99):
    charge = ChargeState(beta=beta)
    poles = find_poles(omega, charge, glass)
    if not poles:
        print("beta = %.2f   below threshold (beta_min = %.4f)"
              % (beta, threshold_beta(omega, 1, glass)))
        continue
    geo = cone_geometry(poles[0], charge, 0.0)
    print("beta = %.2f   phi = %8.5f rad   theta = %8.5f rad   "
          "theta - phi = %+.2e" % (beta, geo.phi, geo.theta,
                                   geo.theta - geo.phi))

print()
print("=== sodium vapor under a drive field ===")
sc = parse_scenario(preset_path("sodium_eit"))
pole = find_poles(sc.omega_bar, sc.charge, sc.medium)[0]
eta = absorption_curvature(sc.omega_bar, sc.charge, sc.medium)
geo = cone_geometry(pole, sc.charge, eta)
print("beta           = %.4f (threshold %.6f)"
      % (sc.charge.beta, threshold_beta(sc.omega_bar, 1, sc.medium)))
print("wave cone phi  = %.6f rad  (tan phi = %.6f)"
      % (geo.phi, np.tan(geo.phi)))
print("group cone     = %.3e rad  (tan theta = %.3e)"
      % (geo.theta, np.tan(geo.theta)))
print("aperture ratio = %.2e" % (np.tan(geo.theta) / np.tan(geo.phi)))
print("ridge velocity = %.2f cm/s; the charge moves at %.3e cm/s"
      % (geo.v_r, sc.charge.w))
print("crossover xi   = %.3f um" % (geo.xi * 1e4))
