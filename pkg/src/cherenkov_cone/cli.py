"""Command-line front end.

Every subcommand reads one scenario file, writes one CSV plus a JSON run
manifest next to it, and exits 0 on success, 2 on a validation error, 3
on a numerical failure (no pole, lost branch, degenerate geometry). CSV
bytes are deterministic for a fixed scenario + flags; the manifest keeps
the wall time and the exact flag set for provenance.
"""

import argparse
import os
import sys
import time

import numpy as np

from . import __version__, field, kinematics, media
from .csvio import write_csv
from .errors import NumericalError, ValidationError
from .modes import modes_at
from .scenario import RunManifest, parse_scenario, preset_path, run_sweep


def _parse_grid(text, flag):
    """lo:hi:n -> strictly increasing linspace."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError("%s expects lo:hi:n, got %r" % (flag, text))
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError("%s expects lo:hi:n, got %r" % (flag, text)) from exc
    if n < 1 or (n > 1 and not hi > lo):
        raise ValidationError("%s: need hi > lo and n >= 1" % flag)
    return np.linspace(lo, hi, n)


def _omega_grid(sc, args):
    center = sc.omega_bar if args.omega_center is None else args.omega_center
    if args.omega_span is None:
        lo, hi = sc.integration_window()
        span = (hi - lo) * 0.5
    else:
        span = 0.5 * args.omega_span
    if center - span <= 0:
        raise ValidationError("omega window extends to non-positive frequency")
    return np.linspace(center - span, center + span, args.samples)


def _cmd_epsilon(sc, args):
    header = ["omega", "eps_z_re", "eps_z_im", "eps_plus_re", "eps_plus_im",
              "eps_minus_re", "eps_minus_im"]
    rows = []
    for om in _omega_grid(sc, args):
        d = media.circular_components(om, sc.medium)
        rows.append([om,
                     complex(d.eps_z).real, complex(d.eps_z).imag,
                     complex(d.eps_plus).real, complex(d.eps_plus).imag,
                     complex(d.eps_minus).real, complex(d.eps_minus).imag])
    return header, rows


def _cmd_modes(sc, args):
    th = args.khat_theta
    k_hat = np.array([np.sin(th), 0.0, np.cos(th)])
    header = ["omega", "khat_theta", "branch", "k",
              "ex_re", "ex_im", "ey_re", "ey_im", "ez_re", "ez_im",
              "vgx", "vgy", "vgz", "mu"]
    rows = []
    for om in _omega_grid(sc, args):
        for mode in sorted(modes_at(om, k_hat, sc.medium),
                           key=lambda mode: mode.branch):
            e = mode.polarization
            vg = mode.group_velocity
            rows.append([om, th, mode.branch, float(np.linalg.norm(mode.k)),
                         e[0].real, e[0].imag, e[1].real, e[1].imag,
                         e[2].real, e[2].imag,
                         vg[0], vg[1], vg[2], mode.mu])
    return header, rows


def _cmd_poles(sc, args):
    charge = sc.charge
    if args.beta is not None:
        if not 0.0 < args.beta < 1.0:
            raise ValidationError(
                "charge.beta: must lie strictly inside (0, 1), got %r"
                % args.beta)
        charge = kinematics.ChargeState(args.beta)
    header = ["omega", "branch", "k_perp", "im_k_perp", "coupling", "vr",
              "theta_rad", "phi_rad", "eta", "xi"]
    rows = []
    for om in _omega_grid(sc, args):
        for pole in kinematics.find_poles(om, charge, sc.medium):
            row = [om, pole.branch, pole.k_perp, pole.im_k_perp,
                   pole.coupling, pole.v_r]
            try:
                eta = kinematics.absorption_curvature(
                    om, charge, sc.medium, branch=pole.branch)
                geo = kinematics.cone_geometry(pole, charge, eta)
                row += [geo.theta, geo.phi, eta, geo.xi]
            except (ValidationError, NumericalError):
                # keep the kinematic part of the row; curvature needs the
                # branch to survive a finite-difference stencil around om
                row += ["", "", "", ""]
            rows.append(row)
    return header, rows


def _cmd_cone(sc, args):
    return run_sweep(sc, "omega_bar", [sc.omega_bar])


def _cmd_sweep(sc, args):
    if (args.values is None) == (args.start is None):
        raise ValidationError(
            "sweep needs either --values or --start/--stop/--num")
    if args.values is not None:
        try:
            values = [float(v) for v in args.values.split(",") if v != ""]
        except ValueError as exc:
            raise ValidationError(
                "--values expects comma-separated numbers, got %r"
                % args.values) from exc
    else:
        if args.stop is None or args.num is None:
            raise ValidationError("--start requires --stop and --num")
        values = np.linspace(args.start, args.stop, args.num)
    return run_sweep(sc, args.axis, values)


def _cmd_map(sc, args):
    x_perp = _parse_grid(args.xperp, "--xperp")
    z = _parse_grid(args.z, "--z")
    fm = field.intensity_map(x_perp, z, args.t, args.method, sc,
                             both_branches=args.both_branches,
                             threads=args.threads)
    header = ["x_perp", "z", "intensity", "masked"]
    rows = []
    for i, xp in enumerate(fm.x_perp):
        for j, zj in enumerate(fm.z):
            rows.append([xp, zj, fm.values[i, j], int(fm.mask[i, j])])
    # ridge constants of the tracked branch, so a plotting tool can draw
    # z(x_perp) = w t - (w/v_r) x_perp without redoing any physics
    pole = [p for p in kinematics.find_poles(sc.omega_bar, sc.charge,
                                             sc.medium) if p.branch == 1][0]
    derived = {"w": sc.charge.w, "v_r": pole.v_r, "t": args.t}
    return header, rows, derived


def _cmd_field(sc, args):
    branches = (1, 2) if args.both_branches else (1,)
    e_vec = field.field_integral(
        args.x_perp, args.z, args.t, sc.charge, sc.medium,
        sc.integration_window(), branches=branches,
        rtol=sc.numerics.quad_rtol, nodes=sc.numerics.cache_nodes)
    header = ["x_perp", "z", "t", "ex_re", "ex_im", "ey_re", "ey_im",
              "ez_re", "ez_im", "intensity"]
    rows = [[args.x_perp, args.z, args.t,
             e_vec[0].real, e_vec[0].imag, e_vec[1].real, e_vec[1].imag,
             e_vec[2].real, e_vec[2].imag,
             float(np.sum(np.abs(e_vec) ** 2))]]
    return header, rows


_HANDLERS = {
    "epsilon": _cmd_epsilon,
    "modes": _cmd_modes,
    "poles": _cmd_poles,
    "cone": _cmd_cone,
    "sweep": _cmd_sweep,
    "map": _cmd_map,
    "field": _cmd_field,
}


def _add_omega_flags(p, samples):
    p.add_argument("--omega-center", type=float, default=None,
                   help="window center, rad/s (default: scenario omega_bar)")
    p.add_argument("--omega-span", type=float, default=None,
                   help="full window width, rad/s (default: the scenario's "
                        "integration window)")
    p.add_argument("--samples", type=int, default=samples)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True,
                        help="scenario TOML: a path, or a preset name "
                             "resolved via CHERENKOV_PRESET_DIR and the "
                             "built-in presets")
    common.add_argument("--out", default=None,
                        help="output CSV path (default: <subcommand>.csv)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=None,
                        help="reserved; recorded in the manifest")
    common.add_argument("--verbose", action="store_true")

    ap = argparse.ArgumentParser(
        prog="cherenkov",
        description="Cherenkov cones in dispersive, rotationally "
                    "symmetric media")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("epsilon", parents=[common],
                       help="dielectric components across a window")
    _add_omega_flags(p, 201)

    p = sub.add_parser("modes", parents=[common],
                       help="plane-wave modes along one propagation angle")
    _add_omega_flags(p, 51)
    p.add_argument("--khat-theta", type=float, default=float(np.pi / 4),
                   help="angle of k against the symmetry axis, rad")

    p = sub.add_parser("poles", parents=[common],
                       help="emission poles across a frequency window")
    _add_omega_flags(p, 21)
    p.add_argument("--beta", type=float, default=None,
                   help="override the scenario's charge speed")

    sub.add_parser("cone", parents=[common],
                   help="cone geometry at the scenario's omega_bar")

    p = sub.add_parser("sweep", parents=[common],
                       help="cone geometry along one scenario parameter")
    p.add_argument("--axis", required=True,
                   help="omega_bar, charge.beta, or medium.<field>")
    p.add_argument("--values", default=None,
                   help="comma-separated sweep values")
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--num", type=int, default=None)

    p = sub.add_parser("map", parents=[common],
                       help="|E|^2 on an (x_perp, z) grid at one instant")
    p.add_argument("--method", choices=("gaussian", "integral"),
                   default="gaussian")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--xperp", required=True, help="grid as lo:hi:n, cm")
    p.add_argument("--z", required=True, help="grid as lo:hi:n, cm")
    p.add_argument("--both-branches", action="store_true")

    p = sub.add_parser("field", parents=[common],
                       help="complex E at one spacetime point by quadrature")
    p.add_argument("--x-perp", type=float, required=True, dest="x_perp")
    p.add_argument("--z", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--both-branches", action="store_true")

    return ap


def _flag_dict(args):
    skip = {"subcommand", "scenario", "out", "verbose"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        out[key] = val
    return out


def run(args):
    t0 = time.monotonic()
    sc = parse_scenario(preset_path(args.scenario))
    if args.verbose:
        print("scenario %s hash %s" % (args.scenario, sc.hash),
              file=sys.stderr)

    result = _HANDLERS[args.subcommand](sc, args)
    header, rows = result[0], result[1]
    derived = result[2] if len(result) > 2 else {}

    out_csv = args.out or (args.subcommand + ".csv")
    stem, _ = os.path.splitext(out_csv)
    out_manifest = stem + ".manifest.json"

    write_csv(out_csv, sc.hash, os.path.basename(out_manifest), header, rows)
    manifest = RunManifest(
        scenario_hash=sc.hash, subcommand=args.subcommand,
        flags=_flag_dict(args), tool_version=__version__,
        wall_time_s=time.monotonic() - t0,
        outputs=[os.path.basename(out_csv)], derived=derived)
    manifest.write(out_manifest)
    if args.verbose:
        print("wrote %s (%d rows) and %s"
              % (out_csv, len(rows), os.path.basename(out_manifest)),
              file=sys.stderr)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        run(args)
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except NumericalError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
