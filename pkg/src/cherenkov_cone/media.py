"""Dielectric tensor models for rotationally symmetric dispersive media.

Units are Gaussian-CGS throughout the package: lengths in cm, times in s,
angular frequencies in rad/s, and the probe charge is normalized to q = 1.

A medium that is invariant under rotations about the z axis has a dielectric
tensor that is diagonal on the circular basis {sigma+, sigma-, z} with
sigma_pm = (x_hat +- i y_hat)/sqrt(2). Each model therefore reduces to three
scalar functions eps_plus(omega), eps_minus(omega), eps_z(omega); the 3x3
Cartesian tensor is reconstructed from them on demand. All models assume
det eps(omega) != 0 over their operating window.

Supported variants:

- IsotropicConstant: eps = n^2 at every frequency.
- IsotropicDispersive: single Lorentzian pole, eps = 1 + 4 pi f/(w0 - w - i g).
- EITLambda: driven three-level lambda system. The sigma+ component carries a
  narrow transparency window of width Gamma = rabi^2/gamma_e with steep
  dispersion; the z and sigma- components are flat, lossless backgrounds from
  far off-resonant transitions.
- Tabulated: sampled circular components with monotone cubic interpolation
  (PCHIP) on real and imaginary parts separately; no extrapolation.
"""

import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import NumericalError, ValidationError

c_light = 2.99792458e10  # speed of light, cm/s
four_pi = 4.0 * np.pi

# tolerance for "negative" imaginary parts caused by roundoff
_PASSIVITY_TOL = 1e-15


@dataclass(frozen=True)
class CircularDecomposition:
    """Dielectric tensor components on the {z, sigma+, sigma-} basis at one
    frequency. Imaginary parts must be non-negative (passive medium)."""

    eps_z: complex
    eps_plus: complex
    eps_minus: complex

    def __post_init__(self):
        for name in ("eps_z", "eps_plus", "eps_minus"):
            val = complex(getattr(self, name))
            if val.imag < -_PASSIVITY_TOL * max(1.0, abs(val)):
                raise ValidationError(
                    "%s has negative imaginary part %g (medium must be passive)"
                    % (name, val.imag)
                )


@dataclass(frozen=True)
class EITParams:
    """Parameters of the driven three-level lambda medium.

    f_plus, f_z, f_minus are oscillator strengths in angular-frequency units;
    number density and dipole matrix elements (including any angular factors)
    are folded into them. omega_plus is the probed transition frequency,
    gamma_e / gamma_m the excited and metastable linewidths, rabi the drive
    Rabi frequency, and delta_z / delta_minus the detunings of the two
    far off-resonant background transitions.
    """

    f_plus: float
    f_z: float
    f_minus: float
    omega_plus: float
    gamma_e: float
    gamma_m: float
    rabi: float
    delta_z: float
    delta_minus: float

    def __post_init__(self):
        if self.omega_plus <= 0:
            raise ValidationError("omega_plus must be positive")
        if self.gamma_e <= 0:
            raise ValidationError("gamma_e must be positive")
        for name in ("f_plus", "f_z", "f_minus"):
            if getattr(self, name) < 0:
                raise ValidationError("%s must be non-negative" % name)
        if self.gamma_m < 0:
            raise ValidationError("gamma_m must be non-negative")
        if not self.gamma_m < self.gamma_e:
            raise ValidationError("gamma_m must be smaller than gamma_e")
        if self.gamma_m > 1e-2 * self.gamma_e:
            warnings.warn(
                "gamma_m/gamma_e = %.3g exceeds 1e-2; the metastable state is "
                "not well protected and the transparency window degrades"
                % (self.gamma_m / self.gamma_e)
            )
        if self.rabi < 0:
            raise ValidationError("rabi must be non-negative")
        if not self.rabi < self.gamma_e:
            raise ValidationError(
                "rabi must stay below gamma_e (weak-driving regime)"
            )
        for name in ("delta_z", "delta_minus"):
            if not getattr(self, name) > self.gamma_e:
                raise ValidationError(
                    "%s must exceed gamma_e (background transitions are "
                    "far off-resonant)" % name
                )


@dataclass(frozen=True)
class IsotropicConstant:
    n: float  # refractive index

    def __post_init__(self):
        if self.n <= 0:
            raise ValidationError("refractive index n must be positive")


@dataclass(frozen=True)
class IsotropicDispersive:
    """Single-pole isotropic medium, eps(w) = 1 + 4 pi f/(omega0 - w - i gamma)."""

    f: float
    omega0: float
    gamma: float

    def __post_init__(self):
        if self.f < 0:
            raise ValidationError("oscillator strength f must be non-negative")
        if self.omega0 <= 0:
            raise ValidationError("omega0 must be positive")
        if self.gamma < 0:
            raise ValidationError("gamma must be non-negative")


@dataclass(frozen=True)
class EITLambda:
    params: EITParams


class Tabulated:
    """Circular components sampled on a strictly increasing frequency grid.

    Interpolation is monotone-limited cubic (PCHIP), applied to real and
    imaginary parts separately. Queries outside [omega[0], omega[-1]] are
    errors; the tables never extrapolate.
    """

    def __init__(self, omega, eps_z, eps_plus, eps_minus):
        omega = np.asarray(omega, dtype=float)
        if omega.ndim != 1 or omega.size < 2:
            raise ValidationError("tabulated grid needs at least two samples")
        if not np.all(np.diff(omega) > 0):
            raise ValidationError("tabulated grid must be strictly increasing")
        comps = {}
        for name, vals in (("eps_z", eps_z), ("eps_plus", eps_plus),
                           ("eps_minus", eps_minus)):
            vals = np.asarray(vals, dtype=complex)
            if vals.shape != omega.shape:
                raise ValidationError("%s samples must match the grid shape" % name)
            if np.any(vals.imag < -_PASSIVITY_TOL):
                raise ValidationError("%s has negative imaginary samples" % name)
            comps[name] = (PchipInterpolator(omega, vals.real),
                           PchipInterpolator(omega, vals.imag))
        self.omega = omega
        self._interp = comps

    def window(self):
        return float(self.omega[0]), float(self.omega[-1])

    def component(self, name, omega):
        lo, hi = self.window()
        om = np.asarray(omega, dtype=float)
        if np.any(om < lo) or np.any(om > hi):
            raise ValidationError(
                "omega outside the tabulated range [%g, %g]; no extrapolation"
                % (lo, hi)
            )
        re, im = self._interp[name]
        return re(omega) + 1j * im(omega)


MediumModel = Union[IsotropicConstant, IsotropicDispersive, EITLambda, Tabulated]


def eit_epsilon_plus(omega, p):
    """sigma+ dielectric component of the driven lambda medium.

    :param omega: angular frequency, rad/s (scalar or array)
    :param p: EITParams
    :returns: complex eps_plus with the same shape as omega

    The response is 1 + 4 pi f_plus/(w_+ - i gamma_e - w - rabi^2/(w_+ -
    i gamma_m - w)), evaluated in the folded form
    1 + 4 pi f_plus (w_+ - i gamma_m - w) / ((w_+ - i gamma_e - w)(w_+ -
    i gamma_m - w) - rabi^2), which stays finite at w = w_+ when the drive
    is on: the response there is exactly 1 (transparency point).
    """
    om = np.asarray(omega, dtype=float)
    if np.any(om <= 0):
        raise ValidationError("omega must be positive")
    if p.rabi == 0.0 and p.gamma_m == 0.0 and np.any(om == p.omega_plus):
        raise NumericalError(
            "bare resonance: omega == omega_plus with rabi = 0 and gamma_m = 0 "
            "is singular"
        )
    d_m = p.omega_plus - 1j * p.gamma_m - om
    d_e = p.omega_plus - 1j * p.gamma_e - om
    eps = 1.0 + four_pi * p.f_plus * d_m / (d_e * d_m - p.rabi**2)
    if np.isscalar(omega):
        return complex(eps)
    return eps


def background_epsilon(omega, p):
    """Flat lossless background components (eps_z, eps_minus) of the lambda
    medium, 1 + 4 pi f/(detuning) each. The omega argument is accepted for
    interface uniformity; the background does not depend on it."""
    if p.delta_z == 0 or p.delta_minus == 0:
        raise ValidationError("background detunings must be nonzero")
    eps_z = 1.0 + four_pi * p.f_z / p.delta_z
    eps_minus = 1.0 + four_pi * p.f_minus / p.delta_minus
    return eps_z, eps_minus


def eit_linewidth(p):
    """Width Gamma = rabi^2/gamma_e of the transparency window, rad/s."""
    if p.rabi == 0:
        raise NumericalError("no transparency window without a drive (rabi = 0)")
    return p.rabi**2 / p.gamma_e


def validity_window(m):
    """Frequency window (lo, hi) on which the model is defined."""
    if isinstance(m, Tabulated):
        return m.window()
    return 0.0, np.inf


def circular_components(omega, m):
    """Evaluate (eps_z, eps_plus, eps_minus) of a medium at one frequency.

    Returns a CircularDecomposition with the full complex components.
    """
    if isinstance(m, IsotropicConstant):
        e = m.n**2
        return CircularDecomposition(e, e, e)
    if isinstance(m, IsotropicDispersive):
        om = float(omega)
        if om <= 0:
            raise ValidationError("omega must be positive")
        e = 1.0 + four_pi * m.f / (m.omega0 - om - 1j * m.gamma)
        return CircularDecomposition(e, e, e)
    if isinstance(m, EITLambda):
        eps_z, eps_minus = background_epsilon(omega, m.params)
        eps_plus = eit_epsilon_plus(omega, m.params)
        return CircularDecomposition(eps_z, eps_plus, eps_minus)
    if isinstance(m, Tabulated):
        return CircularDecomposition(
            complex(m.component("eps_z", omega)),
            complex(m.component("eps_plus", omega)),
            complex(m.component("eps_minus", omega)),
        )
    raise ValidationError("unknown medium model %r" % (m,))


def circular_to_tensor(cd):
    """3x3 Cartesian dielectric tensor from circular components.

    eps = eps_z |z><z| + eps_plus |s+><s+| + eps_minus |s-><s-|. The in-plane
    block is [[et, i g], [-i g, et]] with et = (eps_plus + eps_minus)/2 and
    g = (eps_minus - eps_plus)/2; the tensor is hermitian whenever all three
    components are real, and gyrotropic whenever eps_plus != eps_minus.
    """
    et = 0.5 * (cd.eps_plus + cd.eps_minus)
    g = 0.5 * (cd.eps_minus - cd.eps_plus)
    return np.array(
        [[et, 1j * g, 0.0], [-1j * g, et, 0.0], [0.0, 0.0, cd.eps_z]],
        dtype=complex,
    )


def epsilon_tensor(omega, m):
    """Full complex dielectric tensor of medium m at angular frequency omega."""
    return circular_to_tensor(circular_components(omega, m))


def lossless_components(omega, m):
    """Hermitian-part circular components (real triple) at omega.

    For a tensor that is diagonal on the circular basis, the hermitian part
    is obtained by taking the real part of each component.
    """
    cd = circular_components(omega, m)
    return cd.eps_z.real, cd.eps_plus.real, cd.eps_minus.real


def lossless_tensor(omega, m):
    """Hermitian part of the dielectric tensor at omega."""
    ez, ep, em = lossless_components(omega, m)
    return circular_to_tensor(CircularDecomposition(ez, ep, em))


def in_plane_eigenvalues(omega, m):
    """In-plane eigenvalues of the lossless tensor, sorted descending.

    The in-plane block [[et, i g], [-i g, et]] has eigenvalues et -+ g, which
    are exactly (eps_plus, eps_minus). Descending order matches the branch
    labeling used for emission thresholds: branch 1 is the first to radiate.
    """
    _, ep, em = lossless_components(omega, m)
    return (ep, em) if ep >= em else (em, ep)
