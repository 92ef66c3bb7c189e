"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 invalid parameters, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import cpa, dressed, langevin, model
from .errors import (DegenerateAngleError, DomainError, IntegrationError, InternalError,
                     PreconditionError, SingularSystemError, ValidationError)
from .io import (load_config, parse_config, records_csv, records_json, table_csv,
                 table_json, write_text)
from .model import DriveConfig, SystemParams
from .sweep import MODES, SweepSpec, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--params", metavar="FILE", help="JSON parameter file")
    p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   help="override one parameter (repeatable)")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--quiet", action="store_true", help="suppress status messages")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="tavis-cpa", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="detuning sweep")
    p.add_argument("--start", type=float, default=-40.0)
    p.add_argument("--stop", type=float, default=40.0)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--mode", choices=MODES, default="two-input-equal")
    p.add_argument("--lock", action="store_true",
                   help="hold the emitter-cavity detuning of the parameters fixed")
    p.add_argument("--axis", choices=("cavity", "emitter"), default="cavity",
                   help="detuning labelling the x axis when --lock is given")

    p = sub.add_parser("phase", parents=[common], help="relative-phase sweep")
    p.add_argument("--start", type=float, default=-2 * math.pi)
    p.add_argument("--stop", type=float, default=2 * math.pi)
    p.add_argument("--points", type=int, default=401)

    p = sub.add_parser("ddi", parents=[common], help="DDI-strength sweep")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=20.0)
    p.add_argument("--points", type=int, default=81)
    p.add_argument("--mode", choices=MODES, default="two-input-equal")

    p = sub.add_parser("cpa", parents=[common], help="CPA solutions and minima")
    cpa_sub = p.add_subparsers(dest="cpa_command", required=True, parser_class=_Parser)
    s = cpa_sub.add_parser("solve", parents=[common], help="analytic CPA detunings")
    s.add_argument("--g", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--kappa", type=float)
    s.add_argument("--J", type=float)
    s = cpa_sub.add_parser("scan", parents=[common], help="numeric absorption minima")
    s.add_argument("--start", type=float, default=-50.0)
    s.add_argument("--stop", type=float, default=50.0)
    s.add_argument("--points", type=int, default=4001)
    s.add_argument("--axis", choices=("cavity", "emitter"), default="cavity")

    p = sub.add_parser("dressed", parents=[common], help="polariton eigensystem and ladder")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--double-excitation", action="store_true",
                   help="include |ee,n-2> in the numeric ladder")

    p = sub.add_parser("relax", parents=[common], help="time-domain relaxation to steady state")
    p.add_argument("--amp", type=float, help="scale both drive amplitudes to this value")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--trace", metavar="FILE", help="also integrate and export a trace CSV")
    p.add_argument("--t-end", type=float, default=50.0)
    p.add_argument("--stride", type=float, default=0.1)

    p = sub.add_parser("geometry", parents=[common], help="DDI <-> separation conversion")
    p.add_argument("--gamma0", type=float, required=True)
    p.add_argument("--omega-eg", type=float, required=True)
    p.add_argument("--c", type=float, default=model.SPEED_OF_LIGHT)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r12", type=float, help="separation -> J")
    g.add_argument("--J", type=float, help="J -> separation (perpendicular dipoles)")
    p.add_argument("--phi", type=float, default=math.pi / 2, help="dipole angle [rad]")
    return parser


def _load(args) -> tuple[SystemParams, DriveConfig]:
    doc = {}
    if args.params:
        with open(args.params) as fh:
            doc = json.load(fh)
        load_config(args.params)  # full schema check of the file alone
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise _UsageError(f"--set expects KEY=VALUE, got {item!r}")
        doc[key.strip()] = json.loads(value)
    return parse_config(doc)


def _emit(args, text: str, note: str | None = None) -> None:
    if args.out:
        write_text(text, args.out)
        if note and not args.quiet:
            print(f"{note} -> {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _records(args, columns, rows, **extra):
    if args.format == "json":
        return records_json(columns, rows, **extra)
    return records_csv(columns, rows)


def _cmd_sweep(args, variable: str) -> int:
    params, drive = _load(args)
    spec = SweepSpec(variable, args.start, args.stop, args.points,
                     mode=getattr(args, "mode", "two-input-equal"),
                     coupling_lock=getattr(args, "lock", False),
                     axis=getattr(args, "axis", "cavity"))
    table = run_sweep(params, drive, spec)
    text = table_json(table) if args.format == "json" else table_csv(table)
    _emit(args, text, f"{len(table.rows)} rows")
    if not args.quiet:
        for flag in table.flags:
            print(f"warning: {flag}", file=sys.stderr)
    return EXIT_OK


def _cmd_cpa_solve(args) -> int:
    params, _ = _load(args)
    g = args.g if args.g is not None else abs(params.g1)
    gamma = args.gamma if args.gamma is not None else params.gamma1
    kappa = args.kappa if args.kappa is not None else params.kappa_l
    J = args.J if args.J is not None else params.J
    rows = []
    for sol in cpa.cpa_detuning_solutions(g, gamma, kappa, J):
        res = cpa.cpa_residuals(SystemParams.identical(
            g=g, gamma=gamma, kappa=kappa, J=J, delta_c=sol.delta_c, delta_eg=sol.delta_eg))
        rows.append([sol.branch, sol.delta_eg, sol.delta_c, sol.delta_ac, res.r1, res.r2])
    if not rows and not args.quiet:
        print("no real CPA solution (weak coupling)", file=sys.stderr)
    cols = ("branch", "delta_eg", "delta_c", "delta_ac", "r1", "r2")
    _emit(args, _records(args, cols, rows), f"{len(rows)} solutions")
    return EXIT_OK


def _cmd_cpa_scan(args) -> int:
    params, drive = _load(args)
    minima = cpa.find_absorption_minima(params, drive, (args.start, args.stop), args.points,
                                        axis=args.axis)
    rows = [[m.delta, m.depth, int(m.merged)] for m in minima]
    _emit(args, _records(args, ("delta", "depth", "merged"), rows), f"{len(rows)} minima")
    return EXIT_OK


def _cmd_dressed(args) -> int:
    params, _ = _load(args)
    ladder = dressed.numeric_ladder(params, args.n_max, double_excitation=args.double_excitation)
    cols = ("n", "lambda_minus", "lambda_plus", "omega_n", "phi_n", "cos_half", "sin_half",
            "numeric_eigenvalues")
    rows = []
    for manifold in ladder:
        lev = dressed.polariton_eigensystem(manifold.n, params)
        eig = " ".join(f"{e:.17g}" for e in manifold.energies)
        rows.append([manifold.n, lev.lambda_minus, lev.lambda_plus, lev.omega_n, lev.phi_n,
                     lev.weights[0], lev.weights[1], eig])
    tm = dressed.transform_model(params)
    _emit(args, _records(args, cols, rows, transformed=vars(tm)), f"{len(rows)} manifolds")
    return EXIT_OK


def _cmd_relax(args) -> int:
    params, drive = _load(args)
    if args.amp is not None:
        drive = DriveConfig(args.amp if drive.amp_l else 0.0, args.amp if drive.amp_r else 0.0,
                            drive.phase_l, drive.phase_r)
    rep = langevin.relax_to_steady(params, drive, args.tol)
    f = rep.final
    cols = ("t", "re_a", "im_a", "re_sigma1", "im_sigma1", "re_sigma2", "im_sigma2",
            "sz1", "sz2", "converged", "residual_norm", "steps")
    row = [f.t, f.a.real, f.a.imag, f.sigma1.real, f.sigma1.imag, f.sigma2.real,
           f.sigma2.imag, f.sz1, f.sz2, int(rep.converged), rep.residual_norm, rep.steps]
    _emit(args, _records(args, cols, [row]), "relaxation report")
    if args.trace:
        trace = langevin.integrate(params, drive, args.t_end, stride=args.stride)
        trace.to_csv(args.trace)
        if not args.quiet:
            for note in trace.diagnostics:
                print(f"warning: {note}", file=sys.stderr)
    if not rep.converged:
        print(f"error: no convergence (residual {rep.residual_norm:.3g})", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_geometry(args) -> int:
    if args.r12 is not None:
        geom = model.GeometryInput(args.gamma0, args.omega_eg, args.r12, args.phi, args.c)
        rows = [[args.r12, model.ddi_from_geometry(geom)]]
    else:
        rows = [[model.separation_from_ddi(args.J, args.gamma0, args.omega_eg, args.c), args.J]]
    _emit(args, _records(args, ("r12", "J"), rows))
    return EXIT_OK


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    handlers = {
        "spectrum": lambda a: _cmd_sweep(a, "detuning"),
        "phase": lambda a: _cmd_sweep(a, "phase"),
        "ddi": lambda a: _cmd_sweep(a, "ddi"),
        "dressed": _cmd_dressed,
        "relax": _cmd_relax,
        "geometry": _cmd_geometry,
    }
    try:
        if args.command == "cpa":
            return _cmd_cpa_solve(args) if args.cpa_command == "solve" else _cmd_cpa_scan(args)
        return handlers[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularSystemError, IntegrationError, DegenerateAngleError, InternalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        raise
    except (ValidationError, PreconditionError, DomainError, ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    try:
        code = run_cli()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
