"""Intensity profile of the slow-light ridge, two ways.

Evaluates |E|^2 behind the charge with both the closed-form ridge Gaussian
and the direct oscillatory quadrature, on a +-3 sigma window around each
ridge position. The ridge recedes at v_r = 108 cm/s while the charge moves
at essentially c, so the intensity maximum trails kilometers behind after
microseconds of flight; each transverse distance gets its own window. The
same samples are what `cherenkov map --scenario sodium_eit ...` writes.
"""

import numpy as np

from cherenkov_cone import (intensity_map, parse_scenario, preset_path,
                            resonance_profile)

sc = parse_scenario(preset_path("sodium_eit"))
prof = resonance_profile(sc)
xi = prof.eta * prof.v_r**2
print("xi = %.3f um, sigma_z(100 xi) = %.1f km"
      % (xi * 1e4, prof.w * np.sqrt(prof.eta * 100 * xi / 2.0) * 1e-5))

print()
print("x_perp/xi   ridge z [km]   peak(gaussian)   peak(integral)   "
      "ratio   max norm. dev.")
for mult in (100.0, 300.0, 1000.0):
    x = mult * xi
    sigma_z = prof.w * np.sqrt(prof.eta * x / 2.0)
    z_ridge = -prof.w * x / prof.v_r
    z = np.linspace(z_ridge - 3 * sigma_z, z_ridge + 3 * sigma_z, 61)
    g = intensity_map([x], z, 0.0, "gaussian", sc).values[0]
    q = intensity_map([x], z, 0.0, "integral", sc).values[0]
    dev = np.max(np.abs(g / g.max() - q / q.max()))
    j = int(np.argmax(g))
    print("%8.0f   %12.1f   %13.4e   %13.4e   %.4f   %.4f"
          % (mult, z[j] * 1e-5, g[j], q[j], q[j] / g[j], dev))

print()
print("The quadrature lands a few permil under the Gaussian on the ridge.")
print("The worst pointwise mismatch sits on the +-1 sigma flanks, where the")
print("odd (cubic-phase) part of the transparency lineshape shifts the")
print("quadrature peak slightly off the geometric ridge; the mismatch")
print("shrinks like 1/sqrt(x_perp) as the emission window narrows against")
print("the transparency linewidth.")
