"""Propagating-mode solver for anisotropic dispersive media.

A plane wave exp(i k.x - i w t) propagates when the Fresnel matrix

    M(k, w) = k^2 P^k - (w^2/c^2) eps(w),   P^k = 1 - khat khat^T,

is singular, and the polarization is the corresponding null vector. Because
P^k has rank 2, det M is exactly quadratic in k^2 along any fixed direction,
so the dispersion relation is solved in closed form: the quadratic
coefficients are extracted from three determinant evaluations (exact, since
a quadratic is determined by three points) and the roots come from the
numerically stable quadratic formula. This also resolves double roots
(isotropic media) that a sign-change scan over k cannot see.

Root finding and polarizations use the hermitian (lossless) part of eps;
absorption is treated perturbatively downstream and never moves the roots.
"""

from dataclasses import dataclass

import numpy as np

from . import media
from .errors import NumericalError, ValidationError
from .media import c_light

# relative k window inside which two roots count as one degenerate pair
_DEGENERATE_REL_K = 1e-8
# relative singular-value gap below which a null space is treated as 2-D
_DEGENERATE_REL_SV = 1e-6

_zhat = np.array([0.0, 0.0, 1.0])


@dataclass
class Mode:
    """One propagating solution of the Fresnel equation.

    polarization is a complex unit vector (null vector of M), mu the weight
    d<e| k^2 P^k |e>/d k_perp used in pole-residue sums (nan when the mode is
    on-axis and k_perp = 0), branch counts roots in ascending k, and
    degenerate marks members of a double root within 1e-8 relative in k.
    """

    omega: float
    k: np.ndarray
    polarization: np.ndarray
    group_velocity: np.ndarray
    mu: float
    branch: int
    degenerate: bool = False


def fresnel_matrix(k, omega, m):
    """M = k^2 P^k - (w^2/c^2) eps(w) for wavevector k (rad/cm).

    Uses the full complex tensor; root finding elsewhere uses the hermitian
    part only.
    """
    k = np.asarray(k, dtype=float)
    omega = float(omega)
    if omega <= 0:
        raise ValidationError("omega must be positive")
    k2 = float(k @ k)
    if k2 == 0.0:
        raise ValidationError("k must be nonzero")
    return (
        k2 * np.eye(3)
        - np.outer(k, k)
        - (omega / c_light) ** 2 * media.epsilon_tensor(omega, m)
    )


def fresnel_det(k, omega, m, lossless=True):
    """Scaled determinant det[(c/w)^2 M(k, w)], O(1) near the light cone.

    With lossless=True (the root-finding convention) the hermitian part of
    eps is used and the result is real; complex k is allowed when the full
    determinant is requested.
    """
    k = np.asarray(k, dtype=float if lossless else complex)
    omega = float(omega)
    kk = k * (c_light / omega)
    eps = media.lossless_tensor(omega, m) if lossless else media.epsilon_tensor(omega, m)
    mat = (kk @ kk) * np.eye(3) - np.outer(kk, kk) - eps
    det = np.linalg.det(mat)
    return det.real if lossless else det


def _unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValidationError("direction vector must be nonzero")
    return v / n


def _fix_phase(e):
    # deterministic gauge: largest component real positive
    i = int(np.argmax(np.abs(e)))
    ph = e[i] / abs(e[i])
    e = e / ph
    return e / np.linalg.norm(e)


def _det_quadratic(khat, eps):
    """Coefficients (a, b, c) of det(x P - eps) = a x^2 + b x + c, exact.

    x is the dimensionless k^2 c^2/w^2. Three point evaluations pin the
    quadratic exactly; eps must be hermitian so the determinants are real.
    """
    proj = np.eye(3) - np.outer(khat, khat)
    d = [np.linalg.det(x * proj - eps).real for x in (0.0, 1.0, 2.0)]
    a = 0.5 * (d[2] - 2.0 * d[1] + d[0])
    c = d[0]
    b = d[1] - c - a
    return a, b, c


def _quadratic_roots(a, b, c):
    """Real roots of a x^2 + b x + c with stable handling of the double-root
    and near-linear cases. Returns (sorted roots, double_root_flag)."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        raise NumericalError("determinant vanishes identically (singular medium)")
    if abs(a) < 1e-13 * scale:
        if abs(b) < 1e-13 * scale:
            return [], False
        return [-c / b], False
    disc = b * b - 4.0 * a * c
    disc_scale = b * b + 4.0 * abs(a * c)
    if disc <= 0.0:
        if disc_scale == 0.0 or -disc < 1e-13 * disc_scale:
            x = -0.5 * b / a
            return [x, x], True
        return [], False
    if disc < 1e-13 * disc_scale:
        x = -0.5 * b / a
        return [x, x], True
    sq = np.sqrt(disc)
    q = -0.5 * (b + np.copysign(sq, b))
    x1 = q / a
    x2 = c / q if q != 0.0 else -b / a - x1
    lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
    return [lo, hi], False


def _null_vector(mat):
    _, s, vh = np.linalg.svd(mat)
    return np.conj(vh[-1]), s


def _degenerate_pair(mat, khat):
    """Deterministic basis of a 2-D null space: the TM-like vector (in the
    plane spanned by khat and z, carries e_z) first, the TE-like (azimuthal)
    vector second."""
    _, s, vh = np.linalg.svd(mat)
    if s[1] - s[2] > _DEGENERATE_REL_SV * s[0]:
        # not actually 2-D; caller's roots were near-degenerate only
        return None
    v1, v2 = np.conj(vh[-1]), np.conj(vh[-2])
    cross = np.cross(_zhat, khat)
    y_loc = cross / np.linalg.norm(cross) if np.linalg.norm(cross) > 1e-12 \
        else np.array([0.0, 1.0, 0.0])
    te = v1 * (np.conj(v1) @ y_loc) + v2 * (np.conj(v2) @ y_loc)
    n_te = np.linalg.norm(te)
    if n_te < 1e-9:
        te = v1
    else:
        te = te / n_te
    tm = v2 - te * (np.conj(te) @ v2)
    if np.linalg.norm(tm) < 1e-9:
        tm = v1 - te * (np.conj(te) @ v1)
    tm = tm / np.linalg.norm(tm)
    return _fix_phase(tm), _fix_phase(te)


def _omega_step(omega, m):
    """Centered-difference step for d/dw. The transparency width Gamma sets
    the curvature scale in a driven lambda medium; elsewhere 1e-6 w is safe.
    Tabulated media clamp the step so omega +- h stays on the table."""
    if isinstance(m, media.EITLambda) and m.params.rabi > 0:
        gam = media.eit_linewidth(m.params)
        h = max(1e-6 * gam, 1e-9 * omega)
        # at optical frequencies 1e-9 w can exceed the window width itself;
        # keep the step well inside the feature, but above roundoff in omega
        h = min(h, 1e-3 * gam)
        h = max(h, 64.0 * np.spacing(omega))
    else:
        h = 1e-6 * omega
    lo, hi = media.validity_window(m)
    if np.isfinite(hi):
        h = min(h, 0.5 * (hi - omega), 0.5 * (omega - lo))
        if h <= 0.0:
            raise NumericalError(
                "cannot differentiate in omega at the edge of the tabulated window"
            )
    return h


def _group_velocity(omega, k, e, m):
    h = _omega_step(omega, m)
    omp, omm = omega + h, omega - h
    ep = media.lossless_tensor(omp, m)
    em = media.lossless_tensor(omm, m)
    # d(w^2 eps)/dw expanded as w^2 eps' + 2 w eps: differencing w^2 eps
    # directly is catastrophic when the dispersive feature is ppb-narrow
    # compared to w (w^2 eps ~ 1e31 while the step moves the 16th digit).
    # The span omp - omm is the exactly representable distance between the
    # two evaluation points, which matters once h approaches ulp(omega).
    diff = (ep - em) / (omp - omm)
    ddw = omega**2 * diff + omega * (ep + em)
    den = float(np.real(np.conj(e) @ ddw @ e))
    eps_scale = np.linalg.norm(media.lossless_tensor(omega, m))
    if abs(den) < max(1e-30, 1e-12 * omega * max(1.0, eps_scale)):
        raise NumericalError(
            "degenerate stationary point: <e|d(w^2 eps)/dw|e> is numerically zero"
        )
    num = 2.0 * k - 2.0 * np.real(e * (np.conj(e) @ k))
    return c_light**2 * num / den


def _mu(k, e):
    k_perp = float(np.hypot(k[0], k[1]))
    if k_perp == 0.0:
        raise NumericalError(
            "weight mu undefined on-axis (k_perp = 0): the stationary-phase "
            "reduction in the transverse coordinate breaks down"
        )
    u_perp = np.array([k[0], k[1], 0.0]) / k_perp
    return float(
        2.0 * k_perp - 2.0 * np.real(np.conj(u_perp @ e) * (k @ e))
    )


def group_velocity(mode, m):
    """Group velocity c^2 (2k - 2 Re[e <e|k>]) / <e|d(w^2 eps)/dw|e>, cm/s.

    The derivative uses centered finite differences of the hermitian part,
    so the result is the gradient of the lossless dispersion surface.
    """
    return _group_velocity(mode.omega, mode.k, mode.polarization, m)


def weight_mu(mode):
    """Residue weight <e| d(k^2 P^k)/d k_perp |e> at fixed k_z and azimuth.

    Analytic form 2 k_perp - 2 Re[<e|u_perp><k|e>*]; errors on-axis where
    k_perp = 0. Homogeneous of degree 1 in k at fixed polarization.
    """
    return _mu(mode.k, mode.polarization)


def modes_at(omega, k_hat, m):
    """All propagating modes at frequency omega along direction k_hat.

    Returns 0, 1 or 2 Mode objects sorted by ascending k. Roots come from
    the exact quadratic in k^2 (see module docstring) on the hermitian part
    of eps; an empty list means the direction is evanescent at this
    frequency. Members of a degenerate pair (|k1 - k2| < 1e-8 k1) share a
    2-D null space and carry deterministic TM-like / TE-like polarizations.
    """
    omega = float(omega)
    lo, hi = media.validity_window(m)
    if not (lo <= omega <= hi) or omega <= 0:
        raise ValidationError(
            "omega = %g outside the model validity window [%g, %g]" % (omega, lo, hi)
        )
    khat = _unit(k_hat)
    eps = media.lossless_tensor(omega, m)
    a, b, c = _det_quadratic(khat, eps)
    roots, double = _quadratic_roots(a, b, c)
    roots = [x for x in roots if x > 0.0]
    if not roots:
        return []

    proj = np.eye(3) - np.outer(khat, khat)
    w_c = omega / c_light
    if len(roots) == 2 and not double:
        k1, k2 = np.sqrt(roots[0]) * w_c, np.sqrt(roots[1]) * w_c
        double = (k2 - k1) <= _DEGENERATE_REL_K * k2

    out = []
    if len(roots) == 2 and double:
        x = 0.5 * (roots[0] + roots[1])
        k_mag = np.sqrt(x) * w_c
        pair = _degenerate_pair(x * proj - eps, khat)
        if pair is None:
            double = False
        else:
            for e in pair:
                out.append((k_mag, e, True))
    if not out:
        for x in roots:
            k_mag = np.sqrt(x) * w_c
            e, _ = _null_vector(x * proj - eps)
            out.append((k_mag, _fix_phase(e), double))

    result = []
    for i, (k_mag, e, deg) in enumerate(out):
        k_vec = k_mag * khat
        vg = _group_velocity(omega, k_vec, e, m)
        k_perp = float(np.hypot(k_vec[0], k_vec[1]))
        mu = _mu(k_vec, e) if k_perp > 0.0 else np.nan
        result.append(
            Mode(omega=omega, k=k_vec, polarization=e, group_velocity=vg,
                 mu=mu, branch=i + 1, degenerate=deg)
        )
    return result
