"""Command-line interface: sweeps, scaling studies, coefficient tables,
the seeded verification suite, and single-point sensitivity reports.

Numeric output uses shortest round-trip float formatting (repr), so
re-parsing a CSV reproduces every value exactly and identical configs
produce byte-identical files. Twisting times are taken in scaled units
tau*sqrt(j) on the command line; raw tau is emitted alongside.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bounds import entanglement_witness
from .clock import (
    DEFAULT_POINTS,
    DEFAULT_WINDOW,
    clock_breakdown,
    coefficient_profile,
    find_tau_opt,
    gain_scaling,
    sensitivity_sweep,
)
from .errors import NumericalConsistencyError
from .spin import _check_spin_length
from .verify import report, run_verification

SWEEP_HEADER = (
    "j,N,tau,tau_scaled,theta,F,E,FplusE,Fq,chiSqz,"
    "F_resc,E_resc,FplusE_resc,Fq_resc,chiSqz_resc"
)
SCALING_HEADER = "j,tau_opt,tau_opt_scaled,gain_ratio,cH,witness_F,witness_FE"
COEFFS_HEADER = "m_y,c_opt,c_opt0,cH"


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _sweep_row(rec) -> list:
    return [
        rec.j, rec.n_particles, rec.tau, rec.tau_scaled, rec.theta,
        rec.f, rec.e, rec.f_plus_e, rec.f_q, rec.chi_sqz,
        rec.f_resc, rec.e_resc, rec.f_plus_e_resc, rec.f_q_resc,
        rec.chi_sqz_resc,
    ]


def _scaling_row(rec) -> list:
    return [
        rec.j, rec.tau_opt, rec.tau_opt_scaled, rec.gain_ratio, rec.c_h,
        rec.witness_f, rec.witness_fe,
    ]


def _emit(args, header: str, rows, config: dict) -> None:
    names = header.split(",")
    if args.format == "csv":
        text = "\n".join(
            [header] + [",".join(_fmt(v) for v in row) for row in rows]
        ) + "\n"
    else:
        records = [
            {name: (int(v) if isinstance(v, (int, np.integer)) else float(v))
             for name, v in zip(names, row)}
            for row in rows
        ]
        payload = {
            "metadata": {
                "artifact": "phasebound",
                "version": __version__,
                "config": config,
            },
            "records": records,
        }
        text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tau_grid(args, j: float) -> np.ndarray:
    _check_spin_length(j)
    if args.tau_max < args.tau_min or args.tau_points < 1:
        raise ValueError("need tau-max >= tau-min and at least one grid point")
    scaled = np.linspace(args.tau_min, args.tau_max, args.tau_points)
    return scaled / np.sqrt(j)


def _cmd_sweep(args) -> int:
    grid = _tau_grid(args, args.j)
    records = sensitivity_sweep(args.j, grid, args.theta)
    config = {
        "command": "sweep", "j": args.j, "theta": args.theta,
        "tau_min": args.tau_min, "tau_max": args.tau_max,
        "tau_points": args.tau_points,
    }
    _emit(args, SWEEP_HEADER, [_sweep_row(r) for r in records], config)
    return 0


def _cmd_scaling(args) -> int:
    j_list = [float(tok) for tok in args.j_list.split(",") if tok.strip()]
    records = gain_scaling(j_list, args.theta)
    config = {"command": "scaling", "j_list": j_list, "theta": args.theta}
    _emit(args, SCALING_HEADER, [_scaling_row(r) for r in records], config)
    return 0


def _cmd_coeffs(args) -> int:
    if args.tau_scaled is None:
        tau, _ = find_tau_opt(args.j, args.theta)
    else:
        tau = args.tau_scaled / np.sqrt(args.j)
    profile = coefficient_profile(args.j, tau, args.theta)
    rows = [
        [m, co, co0, profile.c_h]
        for m, co, co0 in zip(profile.m_values, profile.c_opt, profile.c_opt0)
    ]
    config = {
        "command": "coeffs", "j": args.j, "theta": args.theta,
        "tau": float(tau), "tau_scaled": float(tau * np.sqrt(args.j)),
    }
    _emit(args, COEFFS_HEADER, rows, config)
    return 0


def _cmd_bound(args) -> int:
    tau = args.tau_scaled / np.sqrt(args.j)
    rec = clock_breakdown(args.j, tau, args.theta)
    lines = [
        f"j = {_fmt(rec.j)}  N = {rec.n_particles}  "
        f"tau = {_fmt(rec.tau)}  tau_scaled = {_fmt(rec.tau_scaled)}  "
        f"theta = {_fmt(rec.theta)}",
        f"F       = {_fmt(rec.f)}  (rescaled {_fmt(rec.f_resc)})",
        f"E       = {_fmt(rec.e)}  (rescaled {_fmt(rec.e_resc)})",
        f"FplusE  = {_fmt(rec.f_plus_e)}  (rescaled {_fmt(rec.f_plus_e_resc)})",
        f"Fq      = {_fmt(rec.f_q)}  (rescaled {_fmt(rec.f_q_resc)})",
        f"chiSqz  = {_fmt(rec.chi_sqz)}  (rescaled {_fmt(rec.chi_sqz_resc)})",
        f"witness(F)      = {entanglement_witness(rec.f, rec.n_particles)}",
        f"witness(FplusE) = {entanglement_witness(rec.f_plus_e, rec.n_particles)}",
    ]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    results = run_verification(
        args.seed,
        n_nonneg=args.n_random,
        n_hierarchy=args.n_random,
        n_two_path=args.n_two_path,
        n_inverse=args.n_inverse,
        n_derivative=args.n_derivative,
        n_identity=args.n_identity,
    )
    text = report(results)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.ok for r in results) else 1


def _add_output_flags(sub) -> None:
    sub.add_argument("--output", default=None, help="output file (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasebound",
        description="Phase-estimation sensitivity bounds for projective "
        "measurements combined with generator knowledge.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="sensitivity sweep over twisting times")
    sweep.add_argument("--j", type=float, required=True, help="spin length (half-integer)")
    sweep.add_argument("--theta", type=float, default=0.0)
    sweep.add_argument("--tau-min", type=float, default=DEFAULT_WINDOW[0],
                       help="lower edge, scaled units tau*sqrt(j)")
    sweep.add_argument("--tau-max", type=float, default=DEFAULT_WINDOW[1])
    sweep.add_argument("--tau-points", type=int, default=DEFAULT_POINTS)
    _add_output_flags(sweep)
    sweep.set_defaults(func=_cmd_sweep)

    scaling = sub.add_parser("scaling", help="gain and cH scaling over spin lengths")
    scaling.add_argument("--j-list", required=True,
                         help="comma-separated spin lengths, e.g. 10,15,20")
    scaling.add_argument("--theta", type=float, default=0.0)
    _add_output_flags(scaling)
    scaling.set_defaults(func=_cmd_scaling)

    coeffs = sub.add_parser("coeffs", help="optimal-observable coefficient table")
    coeffs.add_argument("--j", type=float, required=True)
    coeffs.add_argument("--tau-scaled", type=float, default=None,
                        help="twisting time in scaled units (default: the optimum)")
    coeffs.add_argument("--theta", type=float, default=0.0)
    _add_output_flags(coeffs)
    coeffs.set_defaults(func=_cmd_coeffs)

    bound = sub.add_parser("bound", help="single-point sensitivity breakdown")
    bound.add_argument("--j", type=float, required=True)
    bound.add_argument("--tau-scaled", type=float, required=True)
    bound.add_argument("--theta", type=float, default=0.0)
    bound.add_argument("--output", default=None)
    bound.set_defaults(func=_cmd_bound)

    verify = sub.add_parser("verify", help="seeded property-verification suite")
    verify.add_argument("--seed", type=int, required=True)
    verify.add_argument("--n-random", type=int, default=1000,
                        help="instances for the nonnegativity and hierarchy checks")
    verify.add_argument("--n-two-path", type=int, default=500)
    verify.add_argument("--n-inverse", type=int, default=100)
    verify.add_argument("--n-derivative", type=int, default=50)
    verify.add_argument("--n-identity", type=int, default=50)
    verify.add_argument("--output", default=None)
    verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad arguments and 0 on --help; pass through.
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NumericalConsistencyError as exc:
        print(f"numerical consistency error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
