"""Scenario files, run manifests, and the parameter sweep engine.

A scenario is a TOML file with a [medium] table (dispatched on its
``variant`` key), a [charge] table, and optional [run] / [numerics]
tables. Parsing is strict: unknown tables or keys are hard errors that
name the offending key path, so a typo cannot silently fall back to a
default. The canonical form of a parsed scenario (sorted keys, repr
floats) is hashed and stamped into every output file, which is what
makes runs reproducible from their manifests alone.
"""

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import kinematics, media
from .errors import NumericalError, ValidationError

four_pi = media.four_pi

_MEDIUM_KEYS = {
    "isotropic_constant": ("n",),
    "isotropic_dispersive": ("f", "omega0", "gamma"),
    "eit": ("f_plus", "omega_plus", "gamma_e", "gamma_m", "rabi",
            "delta_z", "delta_minus", "chi_inf_z", "chi_inf_minus"),
}

_TABLES = ("medium", "charge", "run", "numerics")


@dataclass(frozen=True)
class Numerics:
    """Quadrature and cache defaults; every field has a safe default."""

    quad_rtol: float = 1e-6
    cache_nodes: int = 512
    window_gammas: float = 6.0

    def __post_init__(self):
        if not 0.0 < self.quad_rtol < 1e-1:
            raise ValidationError("numerics.quad_rtol: must lie in (0, 0.1)")
        if self.cache_nodes < 8:
            raise ValidationError("numerics.cache_nodes: need at least 8 nodes")
        if self.window_gammas <= 0:
            raise ValidationError("numerics.window_gammas: must be positive")


@dataclass(frozen=True)
class Scenario:
    medium: object
    charge: kinematics.ChargeState
    omega_bar: float
    numerics: Numerics = field(default_factory=Numerics)

    def canonical(self):
        """Nested plain-dict form with deterministic float formatting."""
        return {
            "medium": _medium_to_dict(self.medium),
            "charge": {"beta": repr(self.charge.beta)},
            "omega_bar": repr(self.omega_bar),
            "numerics": {
                "quad_rtol": repr(self.numerics.quad_rtol),
                "cache_nodes": self.numerics.cache_nodes,
                "window_gammas": repr(self.numerics.window_gammas),
            },
        }

    @property
    def hash(self):
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def integration_window(self):
        """Default frequency window around omega_bar for field quadrature.

        EIT media get +- window_gammas line widths; anything else gets a
        narrow +-1e-4 relative window (nondispersive media do not care).
        """
        if isinstance(self.medium, media.EITLambda):
            g = media.eit_linewidth(self.medium.params)
            half = self.numerics.window_gammas * g
        else:
            half = 1e-4 * self.omega_bar
        return self.omega_bar - half, self.omega_bar + half


def _medium_to_dict(m):
    if isinstance(m, media.IsotropicConstant):
        return {"variant": "isotropic_constant", "n": repr(m.n)}
    if isinstance(m, media.IsotropicDispersive):
        return {"variant": "isotropic_dispersive", "f": repr(m.f),
                "omega0": repr(m.omega0), "gamma": repr(m.gamma)}
    if isinstance(m, media.EITLambda):
        p = m.params
        return {"variant": "eit",
                **{k: repr(getattr(p, k)) for k in
                   ("f_plus", "f_z", "f_minus", "omega_plus", "gamma_e",
                    "gamma_m", "rabi", "delta_z", "delta_minus")}}
    if isinstance(m, media.Tabulated):
        blob = hashlib.sha256(np.ascontiguousarray(m.omega).tobytes())
        return {"variant": "tabulated", "grid_sha": blob.hexdigest()}
    raise ValidationError("medium %r cannot be serialized" % type(m).__name__)


def _require(table, name, key, kinds=(int, float)):
    if key not in table:
        raise ValidationError("%s.%s: missing required key" % (name, key))
    val = table[key]
    if not isinstance(val, kinds) or isinstance(val, bool):
        raise ValidationError("%s.%s: expected a number, got %r" % (name, key, val))
    return float(val)


def _reject_unknown(table, name, allowed):
    for key in table:
        if key not in allowed:
            raise ValidationError("%s.%s: unknown key" % (name, key))


def _parse_medium(table):
    if "variant" not in table:
        raise ValidationError("medium.variant: missing required key")
    variant = table["variant"]
    if variant not in _MEDIUM_KEYS:
        raise ValidationError(
            "medium.variant: unknown variant %r (expected one of %s)"
            % (variant, ", ".join(sorted(_MEDIUM_KEYS))))
    allowed = _MEDIUM_KEYS[variant]
    _reject_unknown(table, "medium", ("variant",) + allowed)
    vals = {k: _require(table, "medium", k) for k in allowed}
    try:
        if variant == "isotropic_constant":
            return media.IsotropicConstant(n=vals["n"])
        if variant == "isotropic_dispersive":
            return media.IsotropicDispersive(
                f=vals["f"], omega0=vals["omega0"], gamma=vals["gamma"])
        # chi_inf are static background susceptibilities (the 4 pi chi
        # values); convert to line strengths before constructing params.
        return media.EITLambda(media.EITParams(
            f_plus=vals["f_plus"],
            f_z=vals["chi_inf_z"] * vals["delta_z"] / four_pi,
            f_minus=vals["chi_inf_minus"] * vals["delta_minus"] / four_pi,
            omega_plus=vals["omega_plus"],
            gamma_e=vals["gamma_e"],
            gamma_m=vals["gamma_m"],
            rabi=vals["rabi"],
            delta_z=vals["delta_z"],
            delta_minus=vals["delta_minus"],
        ))
    except ValidationError as exc:
        raise ValidationError("medium: %s" % exc) from exc


def parse_scenario(path):
    """Load and fully validate a scenario TOML file."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError("%s: not valid TOML: %s" % (path, exc)) from exc

    for key in data:
        if key not in _TABLES:
            raise ValidationError("%s: unknown table or key %r" % (path, key))
    for name in ("medium", "charge"):
        if name not in data:
            raise ValidationError("%s: missing required [%s] table" % (path, name))

    medium = _parse_medium(data["medium"])

    charge_tab = data["charge"]
    _reject_unknown(charge_tab, "charge", ("beta",))
    beta = _require(charge_tab, "charge", "beta")
    if not 0.0 < beta < 1.0:
        raise ValidationError(
            "charge.beta: must lie strictly inside (0, 1), got %r" % beta)
    charge = kinematics.ChargeState(beta)

    run_tab = data.get("run", {})
    _reject_unknown(run_tab, "run", ("omega_bar",))
    if "omega_bar" in run_tab:
        omega_bar = _require(run_tab, "run", "omega_bar")
        if omega_bar <= 0:
            raise ValidationError("run.omega_bar: must be positive")
    elif isinstance(medium, media.EITLambda):
        omega_bar = medium.params.omega_plus
    else:
        raise ValidationError("run.omega_bar: missing required key "
                              "(only EIT media have a natural default)")

    num_tab = data.get("numerics", {})
    _reject_unknown(num_tab, "numerics", ("quad_rtol", "cache_nodes",
                                          "window_gammas"))
    kwargs = {}
    if "quad_rtol" in num_tab:
        kwargs["quad_rtol"] = _require(num_tab, "numerics", "quad_rtol")
    if "cache_nodes" in num_tab:
        nodes = num_tab["cache_nodes"]
        if not isinstance(nodes, int) or isinstance(nodes, bool):
            raise ValidationError("numerics.cache_nodes: expected an integer")
        kwargs["cache_nodes"] = nodes
    if "window_gammas" in num_tab:
        kwargs["window_gammas"] = _require(num_tab, "numerics", "window_gammas")

    return Scenario(medium=medium, charge=charge, omega_bar=omega_bar,
                    numerics=Numerics(**kwargs))


def preset_path(name):
    """Resolve a preset name to a file path.

    Search order: the literal path, then $CHERENKOV_PRESET_DIR, then the
    presets shipped with the package. A bare name may omit ``.toml``.
    """
    candidates = [name]
    if not name.endswith(".toml"):
        candidates.append(name + ".toml")
    env = os.environ.get("CHERENKOV_PRESET_DIR")
    roots = [d for d in (env,) if d]
    roots.append(os.path.join(os.path.dirname(__file__), "presets"))
    for cand in candidates:
        if os.path.isfile(cand):
            return cand
    for root in roots:
        for cand in candidates:
            full = os.path.join(root, os.path.basename(cand))
            if os.path.isfile(full):
                return full
    raise ValidationError("scenario %r not found (searched %s)"
                          % (name, ", ".join(roots)))


@dataclass
class RunManifest:
    scenario_hash: str
    subcommand: str
    flags: dict
    tool_version: str
    wall_time_s: float
    outputs: list
    # subcommand-specific constants a downstream consumer would otherwise
    # have to recompute (e.g. the ridge line of a map: w, v_r, t)
    derived: dict = dataclasses.field(default_factory=dict)

    def write(self, path):
        blob = json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(blob + "\n")


# ---------------------------------------------------------------------------
# Parameter sweeps.

_SWEEP_HEADER = ["param", "value", "omega", "branch", "k_perp", "im_k_perp",
                 "coupling", "vr", "theta_rad", "phi_rad", "eta", "xi",
                 "threshold_beta", "status"]


def _with_param(sc, axis, value):
    """Return a copy of the scenario with one dotted parameter replaced."""
    if axis == "omega_bar":
        return dataclasses.replace(sc, omega_bar=float(value))
    if axis == "charge.beta":
        if not 0.0 < value < 1.0:
            raise ValidationError(
                "charge.beta: must lie strictly inside (0, 1), got %r" % value)
        return dataclasses.replace(sc, charge=kinematics.ChargeState(float(value)))
    if axis.startswith("medium."):
        name = axis.split(".", 1)[1]
        m = sc.medium
        if isinstance(m, media.EITLambda):
            if name in {f.name for f in dataclasses.fields(media.EITParams)}:
                params = dataclasses.replace(m.params, **{name: float(value)})
                return dataclasses.replace(sc, medium=media.EITLambda(params))
        elif not isinstance(m, media.Tabulated):
            if name in {f.name for f in dataclasses.fields(type(m))}:
                return dataclasses.replace(
                    sc, medium=dataclasses.replace(m, **{name: float(value)}))
    raise ValidationError("sweep axis %r unknown" % axis)


def fmt(value):
    """Shortest round-trip text for one CSV cell."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _geometry_rows(sc, axis, value):
    """Rows of derived cone quantities for one sweep point.

    Pole-level failures are reported in the status column instead of
    aborting the sweep; a point with no emission yields a single row with
    empty numeric cells.
    """
    rows = []
    base = [fmt(axis), fmt(value)]
    try:
        poles = kinematics.find_poles(sc.omega_bar, sc.charge, sc.medium)
    except (ValidationError, NumericalError) as exc:
        return [base + [fmt(sc.omega_bar)] + [""] * 10
                + ["error: %s" % exc]]
    if not poles:
        return [base + [fmt(sc.omega_bar)] + [""] * 10 + ["no-pole"]]
    for pole in poles:
        try:
            eta = kinematics.absorption_curvature(
                sc.omega_bar, sc.charge, sc.medium, branch=pole.branch)
            geo = kinematics.cone_geometry(pole, sc.charge, eta)
            thr = kinematics.threshold_beta(sc.omega_bar, pole.branch, sc.medium)
        except (ValidationError, NumericalError) as exc:
            rows.append(base + [fmt(sc.omega_bar), fmt(pole.branch),
                                fmt(pole.k_perp), fmt(pole.im_k_perp),
                                fmt(pole.coupling), fmt(pole.v_r)]
                        + [""] * 5 + ["error: %s" % exc])
            continue
        rows.append(base + [
            fmt(sc.omega_bar), fmt(pole.branch), fmt(pole.k_perp),
            fmt(pole.im_k_perp), fmt(pole.coupling), fmt(pole.v_r),
            fmt(geo.theta), fmt(geo.phi), fmt(eta), fmt(geo.xi),
            fmt(thr), "ok"])
    return rows


def run_sweep(sc, axis, values):
    """Evaluate cone geometry along one scenario parameter.

    Returns (header, rows) with every cell already formatted; a single
    point at axis = omega_bar reproduces the `cone` subcommand exactly.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("sweep needs a one-dimensional list of values")
    rows = []
    for value in values:
        point = _with_param(sc, axis, float(value))
        rows.extend(_geometry_rows(point, axis, float(value)))
    return list(_SWEEP_HEADER), rows
