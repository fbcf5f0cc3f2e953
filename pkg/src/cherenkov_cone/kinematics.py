"""Cherenkov emission kinematics for a charge moving uniformly along z.

A charge with velocity w = beta c zhat radiates into mode alpha at frequency
omega when the plane k_z = omega/w intersects the branch-alpha dispersion
surface; the intersection circle has radius k_perp^(alpha)(omega), the
Cherenkov pole. This module finds those poles, the emission thresholds, the
curvature eta of the absorption minimum across a transparency window, the
radial ridge velocity v_r, and the apertures of the wave cone (phi) and the
group cone (theta).

Pole finding works on the hermitian part of eps, like the mode solver:
absorption never moves the poles, it only attaches an imaginary part to
k_perp, computed perturbatively in im_k_perp. At fixed k_z the scaled
determinant is exactly quadratic in k_perp^2, so poles come from the same
closed-form machinery as modes_at. On-axis degeneracy is excluded by a guard
band k_perp >= 1e-6 omega/c where the downstream stationary-phase reduction
is invalid anyway.

Threshold behavior in a transparency window deserves a note: at the window
center the sigma+ response is exactly 1, yet emission persists for
beta > 1/sqrt(eps_minus), because at oblique incidence the radiating mode
mixes the sigma-, z and sigma+ components. The threshold is set by the
background, while the slowness of the emitted light is set by the steep
sigma+ dispersion carried in the admixture.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import media, modes
from .errors import NumericalError, ValidationError
from .media import c_light

# poles with k_perp below this multiple of omega/c are rejected: the
# transverse stationary-phase asymptotics has no validity region there
_KPERP_GUARD = 1e-6

_zhat = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class ChargeState:
    """Uniformly moving probe charge, direction fixed to +z, q = 1."""

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValidationError("charge.beta must lie strictly in (0, 1)")

    @property
    def w(self):
        return self.beta * c_light

    @property
    def direction(self):
        return _zhat


@dataclass
class CherenkovPole:
    """One resonant emission channel at fixed (omega, w).

    k_perp is the real pole radius on the lossless surface, im_k_perp the
    perturbative absorption part, coupling = |<e|what>|^2 the charge-mode
    overlap, mu the residue weight, v_r the radial ridge velocity.
    """

    omega: float
    branch: int
    k_perp: float
    im_k_perp: float
    polarization: np.ndarray
    coupling: float
    mu: float
    v_r: float
    group_velocity: np.ndarray


@dataclass(frozen=True)
class ConeGeometry:
    """Derived cone angles and scales: group-cone half-aperture theta,
    wave-cone half-aperture phi, ridge velocity v_r, crossover length
    xi = eta v_r^2, and the group-velocity split (vg_perp, vg_parallel)."""

    theta: float
    phi: float
    v_r: float
    xi: float
    vg_perp: float
    vg_parallel: float


def threshold_beta(omega, branch, m):
    """Minimal beta for emission into branch alpha at frequency omega.

    Returns 1/sqrt(eps_perp) where eps_perp are the in-plane eigenvalues of
    the lossless tensor (the pair eps_plus, eps_minus), ordered descending so
    that branch 1 is the first to light up as beta grows.
    """
    if branch not in (1, 2):
        raise ValidationError("branch must be 1 or 2")
    eigs = media.in_plane_eigenvalues(omega, m)
    eps = eigs[branch - 1]
    if eps <= 0.0:
        raise ValidationError(
            "in-plane eigenvalue %g <= 0 on branch %d; no propagating wave"
            % (eps, branch)
        )
    if eps <= 1.0:
        raise NumericalError(
            "no subluminal emission on branch %d at omega = %g "
            "(in-plane eigenvalue %g <= 1)" % (branch, omega, eps)
        )
    return 1.0 / np.sqrt(eps)


def pole_plane_det(k_perp, omega, charge, m):
    """Scaled Fresnel determinant on the emission plane k_z = omega/w.

    Real k_perp with lossless eps gives the real determinant whose zeros
    are the emission poles; complex k_perp evaluates the full complex
    determinant (used by the complex-root cross-checks). The solver itself
    never scans this function.
    """
    lossless = not isinstance(k_perp, complex)
    k = np.array([k_perp, 0.0, omega / charge.w],
                 dtype=complex if not lossless else float)
    return modes.fresnel_det(k, omega, m, lossless=lossless)


def _im_kperp_perturbative(omega, e, mu, m):
    """First-order Im k_perp = (w^2/c^2) <e|Im eps|e> / mu."""
    cd = media.circular_components(omega, m)
    im_cd = media.CircularDecomposition(
        cd.eps_z.imag, cd.eps_plus.imag, cd.eps_minus.imag
    )
    re_cd = media.CircularDecomposition(
        cd.eps_z.real, cd.eps_plus.real, cd.eps_minus.real
    )
    im_t = media.circular_to_tensor(im_cd)
    norm_im = np.linalg.norm(im_t)
    if norm_im == 0.0:
        return 0.0
    if norm_im >= 0.1 * np.linalg.norm(media.circular_to_tensor(re_cd)):
        raise NumericalError(
            "absorptive part is not small (|Im eps| >= 0.1 |Re eps|); "
            "first-order perturbation is invalid, solve the complex "
            "determinant directly instead"
        )
    val = float(np.real(np.conj(e) @ im_t @ e))
    # passivity makes the overlap non-negative; clip roundoff dust
    return max(val, 0.0) * (omega / c_light) ** 2 / mu


def _radial_from_vg(vg, w):
    vg_par = float(vg[2])
    if abs(w - vg_par) < 1e-9 * w:
        raise NumericalError(
            "grazing threshold: |w - vg_parallel| < 1e-9 w, the ridge "
            "velocity diverges"
        )
    return w * float(vg[0]) / (w - vg_par)


def find_poles(omega, charge, m):
    """Cherenkov poles on the plane k_z = omega/w (0, 1 or 2 of them).

    Roots of the plane-restricted determinant, on the lossless tensor, with
    the azimuth fixed to u_perp = xhat (rotational symmetry makes every
    other azimuth identical). Poles are sorted by descending k_perp and
    labeled branch 1, 2 in that order, which matches the descending in-plane
    eigenvalue convention of threshold_beta: the lower-threshold surface
    carries the larger pole radius. Returns [] below threshold. A double
    root (isotropic media) yields two poles at the same k_perp with the
    TM-like polarization first, so branch 1 always carries the coupling.
    """
    omega = float(omega)
    lo, hi = media.validity_window(m)
    if not (lo <= omega <= hi) or omega <= 0:
        raise ValidationError(
            "omega = %g outside the model validity window [%g, %g]" % (omega, lo, hi)
        )
    eps = media.lossless_tensor(omega, m)
    inv_beta = 1.0 / charge.beta

    def plane_matrix(y):
        kk = np.array([np.sqrt(y), 0.0, inv_beta])
        return (kk @ kk) * np.eye(3) - np.outer(kk, kk) - eps

    d = [np.linalg.det(plane_matrix(y)).real for y in (0.0, 1.0, 2.0)]
    a = 0.5 * (d[2] - 2.0 * d[1] + d[0])
    c0 = d[0]
    b = d[1] - c0 - a
    roots, double = modes._quadratic_roots(a, b, c0)
    roots = [y for y in roots if y > _KPERP_GUARD**2]
    if not roots:
        return []

    w_c = omega / c_light
    kz = omega / charge.w
    carriers = []
    if double and len(roots) == 2:
        y = 0.5 * (roots[0] + roots[1])
        kp = np.sqrt(y) * w_c
        khat = np.array([kp, 0.0, kz])
        khat = khat / np.linalg.norm(khat)
        pair = modes._degenerate_pair(plane_matrix(y), khat)
        if pair is not None:
            carriers = [(kp, e) for e in pair]  # TM first
    if not carriers:
        for y in sorted(roots, reverse=True):
            e, _ = modes._null_vector(plane_matrix(y))
            carriers.append((np.sqrt(y) * w_c, modes._fix_phase(e)))

    out = []
    for i, (kp, e) in enumerate(carriers):
        k_vec = np.array([kp, 0.0, kz])
        vg = modes._group_velocity(omega, k_vec, e, m)
        mu = modes._mu(k_vec, e)
        out.append(
            CherenkovPole(
                omega=omega,
                branch=i + 1,
                k_perp=float(kp),
                im_k_perp=_im_kperp_perturbative(omega, e, mu, m),
                polarization=e,
                coupling=float(abs(e[2]) ** 2),
                mu=mu,
                v_r=_radial_from_vg(vg, charge.w),
                group_velocity=vg,
            )
        )
    return out


def im_k_perp(pole, m):
    """Perturbative absorption part of the pole radius (rad/cm).

    Requires |Im eps| < 0.1 |Re eps|; beyond that the first-order move of
    the root is not trustworthy and this raises instead of guessing.
    """
    return _im_kperp_perturbative(pole.omega, pole.polarization, pole.mu, m)


def _select_pole(poles, k_ref):
    if not poles:
        raise NumericalError("pole disappeared while stepping in omega")
    return min(poles, key=lambda p: abs(p.k_perp - k_ref))


def _curvature_step(omega_bar, m):
    if isinstance(m, media.EITLambda) and m.params.rabi > 0:
        return media.eit_linewidth(m.params) / 20.0
    return 1e-6 * omega_bar


def absorption_curvature(omega_bar, charge, m, branch=1):
    """Curvature eta = d^2 Im k_perp / d omega^2 at the absorption minimum.

    Centered second difference with step Gamma/20 in a transparency window
    (1e-6 omega_bar otherwise). omega_bar must actually be a local minimum
    of Im k_perp on the followed branch; a negative second difference is an
    error, not a value.
    """
    poles = find_poles(omega_bar, charge, m)
    center = [p for p in poles if p.branch == branch]
    if not center:
        raise NumericalError(
            "no branch-%d pole at omega_bar = %g" % (branch, omega_bar)
        )
    center = center[0]
    h = _curvature_step(omega_bar, m)
    omp, omm = omega_bar + h, omega_bar - h
    ip = _select_pole(find_poles(omp, charge, m), center.k_perp).im_k_perp
    im = _select_pole(find_poles(omm, charge, m), center.k_perp).im_k_perp
    i0 = center.im_k_perp
    span = 0.5 * (omp - omm)
    if ip < i0 or im < i0:
        raise NumericalError(
            "Im k_perp does not have a minimum at omega_bar = %g on branch %d"
            % (omega_bar, branch)
        )
    eta = (ip - 2.0 * i0 + im) / span**2
    if eta < 0.0:
        raise NumericalError(
            "negative curvature of Im k_perp: omega_bar = %g is not a "
            "transparency center" % omega_bar
        )
    return eta


def radial_velocity(pole, charge):
    """Ridge velocity v_r = w vg_perp / (w - vg_parallel), cm/s.

    This is the outward speed of the intensity ridge in the transverse
    coordinate; it equals 1/(d k_perp/d omega) along the emission plane,
    which radial_velocity_fd evaluates independently.
    """
    return _radial_from_vg(pole.group_velocity, charge.w)


def radial_velocity_fd(omega, charge, m, branch=1, step=None):
    """Finite-difference form 1/(d k_perp/d omega) of the ridge velocity.

    Two extra pole solves at omega +- step, following the branch by k_perp
    continuity. Serves as the independent cross-check of radial_velocity.
    """
    poles = find_poles(omega, charge, m)
    ref = [p for p in poles if p.branch == branch]
    if not ref:
        raise NumericalError("no branch-%d pole at omega = %g" % (branch, omega))
    ref = ref[0]
    if step is None:
        step = modes._omega_step(omega, m)
    omp, omm = omega + step, omega - step
    kp = _select_pole(find_poles(omp, charge, m), ref.k_perp).k_perp
    km = _select_pole(find_poles(omm, charge, m), ref.k_perp).k_perp
    dk = (kp - km) / (omp - omm)
    if dk == 0.0:
        raise NumericalError("d k_perp/d omega vanished; ridge velocity undefined")
    return 1.0 / dk


def cone_geometry(pole, charge, eta):
    """Assemble the cone angles: tan(theta) = v_r/w, tan(phi) = omega/(w k_perp),
    crossover length xi = eta v_r^2."""
    if eta < 0.0:
        raise ValidationError("eta must be non-negative")
    w = charge.w
    vg = pole.group_velocity
    return ConeGeometry(
        theta=float(np.arctan2(pole.v_r, w)),
        phi=float(np.arctan2(pole.omega, w * pole.k_perp)),
        v_r=pole.v_r,
        xi=eta * pole.v_r**2,
        vg_perp=float(np.hypot(vg[0], vg[1])),
        vg_parallel=float(vg[2]),
    )


def geometric_construction(pole, charge, dt):
    """Group-cone aperture from the two-point construction.

    Over a time dt the charge advances from A to B = w dt zhat while the
    radiated wavepacket reaches C = v_g dt; the cone surface lies along the
    line BC, and the returned angle between that line and the z axis equals
    theta from cone_geometry.
    """
    if dt <= 0.0:
        raise ValidationError("dt must be positive")
    bc = pole.group_velocity * dt - charge.w * dt * _zhat
    norm = np.linalg.norm(bc)
    if norm < 1e-12 * charge.w * dt:
        raise NumericalError("degenerate construction: B and C coincide")
    perp = float(np.hypot(bc[0], bc[1]))
    axial = float(-bc[2])
    return float(np.arctan2(perp, axial))
