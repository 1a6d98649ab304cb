"""Command line entry point ``ising-exact``.

Exit codes: 0 success, 2 a verification failed, 64 usage or domain error.
Numbers that must stay exact (rationals, big integers) are written as
strings; every JSON document echoes the run configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_USAGE = 64


class UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------

def _plain(value):
    from .acceptance import _jsonable
    return _jsonable(value)


def _config(args) -> dict:
    keep = {k: v for k, v in vars(args).items() if k not in ("func",) and not callable(v)}
    from .precision import working_digits
    keep["precision_digits"] = working_digits()
    return _plain(keep)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, payload: dict, rows: list[dict] | None = None, default_format: str = "json") -> None:
    fmt = args.format or default_format
    config = _config(args)
    if fmt == "csv":
        if rows is None:
            rows = [{k: v for k, v in _plain(payload).items() if not isinstance(v, (dict, list))}]
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(_plain(row))
        _write(buf.getvalue(), args.out)
        return
    doc = {"config": config, **_plain(payload)}
    if rows is not None:
        doc["rows"] = _plain(rows)
    _write(json.dumps(doc, indent=2, sort_keys=False) + "\n", args.out)


def _provenance(module: str, operation: str, error=None) -> dict:
    return {"module": module, "operation": operation, "error_estimate": error}


# ---------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------

def _point(args):
    """Coupling point; a temperature within 1e-12 of T_c snaps to the critical point."""
    from .core import critical_point, critical_temperature, derive_variables
    Ev = args.Ev
    Eh = args.Eh if args.Eh is not None else Ev
    if Ev > 0 and Eh > 0 and abs(args.T - critical_temperature(Ev, Eh)) <= 1e-12 * args.T:
        return critical_point(Ev, Eh)
    return derive_variables(Ev, Eh, args.T)


def cmd_thermo(args) -> int:
    from .thermo import thermo_summary
    point = _point(args)
    summary = thermo_summary(point, args.series_order)
    summary["provenance"] = _provenance("thermo", "thermo_summary", summary["free_energy_error"])
    _emit(args, summary)
    return EXIT_OK


def cmd_corr(args) -> int:
    from .core import Branch
    from . import toeplitz
    point = _point(args)
    if args.series:
        if args.kind != "diag":
            raise UsageExit("exact series are available for the diagonal only")
        if point.branch is Branch.AT_TC:
            raise UsageExit("series are centred away from the critical point")
        ser = toeplitz.diagonal_series(args.N, args.order, point.branch)
        payload = {"kind": "diag", "N": args.N, "t_exponent": str(ser.exponent), "order": args.order,
                   "coefficients": ser.series.to_strings(), "t": point.t,
                   "value": float(ser(point.t)),
                   "provenance": _provenance("toeplitz", "diagonal_series", f"O(t^{args.order})")}
        rows = [{"power": k, "coefficient": c} for k, c in enumerate(ser.series.to_strings())]
        _emit(args, payload, rows if args.format == "csv" else None)
        return EXIT_OK
    if args.kind == "diag":
        value = toeplitz.diagonal_correlation(args.N, point)
    else:
        value = toeplitz.row_correlation(args.N, point, args.axis)
    payload = {"kind": args.kind, "N": args.N, "axis": args.axis if args.kind == "row" else None,
               "value": float(value), "branch": point.branch.value,
               "provenance": _provenance("toeplitz", f"{args.kind}_correlation", 1e-12)}
    _emit(args, payload)
    return EXIT_OK


def cmd_painleve_sigma(args) -> int:
    from .painleve import pvi_sigma_residual
    res = pvi_sigma_residual(args.N, args.order, args.branch)
    nonzero = [k for k in range(args.order + 1) if res[k] != 0]
    payload = {"N": args.N, "order": args.order, "branch": args.branch, "identically_zero": not nonzero,
               "first_nonzero": nonzero[0] if nonzero else None,
               "provenance": _provenance("painleve", "pvi_sigma_residual", 0)}
    _emit(args, payload)
    return EXIT_OK if not nonzero else EXIT_VERIFY


def cmd_painleve_scaling(args) -> int:
    from .painleve import piii_solve, scaling_G
    sol = piii_solve(args.lam)
    rows = []
    for r in args.r:
        rows.append({"r": r, "G_minus": float(scaling_G(r, "below", solution=sol)),
                     "G_plus": float(scaling_G(r, "above", solution=sol)),
                     "eta": float(sol.eta(r / 2)), "error_estimate": sol.error_estimate})
    payload = {"lambda": args.lam, "provenance": _provenance("painleve", "scaling_G", sol.error_estimate)}
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_painleve_mesons(args) -> int:
    from .painleve import meson_spectrum, meson_spectrum_airy
    a = meson_spectrum(args.count)
    b = meson_spectrum_airy(args.count)
    rows = [{"j": j + 1, "lambda": x, "airy": y, "difference": abs(x - y)} for j, (x, y) in enumerate(zip(a, b))]
    dev = max((r["difference"] for r in rows), default=0.0)
    payload = {"count": args.count, "max_difference": dev,
               "provenance": _provenance("painleve", "meson_spectrum", dev)}
    _emit(args, payload, rows)
    return EXIT_OK if dev < 1e-8 else EXIT_VERIFY


def cmd_painleve_tracy(args) -> int:
    from .painleve import tracy_identity_check
    rep = tracy_identity_check()
    payload = {"A_G": rep.A_G, "A_kappa": rep.A_kappa, "A_c": rep.A_c, "ratio": rep.ratio,
               "passed": rep.passed,
               "provenance": _provenance("painleve", "tracy_identity_check", rep.branch_spread)}
    _emit(args, payload)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_hirota(args) -> int:
    from .hirota import critical_grid_report, propagate_critical
    from .precision import high_precision
    with high_precision(args.nmax + 50):
        grid = propagate_critical(args.nmax)
        records = [{**r, "value": str(r["value"])} for r in grid.to_records()]
    payload = {"n_max": args.nmax, "provenance": _provenance("hirota", "propagate_critical", None)}
    ok = True
    if args.check:
        rep = critical_grid_report(args.nmax, radius=float(args.nmax))
        payload["check"] = {"route_disagreement": rep.route_disagreement,
                            "diagonal_error": rep.diagonal_error, "direction_spread": rep.direction_spread,
                            "passed": rep.passed}
        payload["provenance"]["error_estimate"] = rep.route_disagreement
        ok = rep.passed
    _emit(args, payload, records)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_chi_constants(args) -> int:
    from .susceptibility import c3_analytic, c4_analytic, dn_integral
    rows = []
    analytic = {1: 1.0, 2: 1 / (12 * math.pi), 3: c3_analytic(), 4: c4_analytic()}
    for n in range(1, args.n + 1):
        est = dn_integral(n, args.budget, args.method, args.seed)
        rows.append({"n": n, "D_n": est.value, "D_n_error": est.error, "C_n": est.c_value,
                     "C_n_error": est.c_error, "C_n_closed_form": analytic.get(n), "method": est.method,
                     "samples": est.samples})
    c_plus = sum(r["C_n"] for r in rows if r["n"] % 2)
    c_minus = sum(r["C_n"] for r in rows if r["n"] % 2 == 0)
    payload = {"C_plus_partial": c_plus, "C_minus_partial": c_minus,
               "ratio": c_plus / c_minus if c_minus else None, "twelve_pi": 12 * math.pi,
               "provenance": _provenance("susceptibility", "dn_integral", max(r["C_n_error"] for r in rows))}
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_chi_nickel(args) -> int:
    from .susceptibility import nickel_singularities
    rows = [r.as_dict() for r in nickel_singularities(args.n)]
    payload = {"n": args.n, "count": len(rows),
               "provenance": _provenance("susceptibility", "nickel_singularities", 1e-12)}
    _emit(args, payload, rows, default_format="csv")
    return EXIT_OK


def cmd_chi_diagonal(args) -> int:
    from .susceptibility import diagonal_chi, diagonal_prefactor
    res = diagonal_chi(args.t, args.ncut, args.branch)
    payload = {"t": res.t, "branch": res.branch.value, "value": res.value, "partial_sum": res.partial,
               "tail": res.tail, "n_cut": res.n_cut, "tail_reliable": res.tail_reliable,
               "scaled": res.value / diagonal_prefactor(res.t, res.branch) if res.t > 0 else None,
               "provenance": _provenance("susceptibility", "diagonal_chi", abs(res.tail))}
    _emit(args, payload)
    return EXIT_OK


def cmd_leeyang(args) -> int:
    from .core import critical_temperature
    from .lattice import FiniteLattice, lee_yang_zeros
    T = args.T if args.T is not None else critical_temperature(1.0, 1.0)
    lat = FiniteLattice.nearest_neighbour(args.L, args.L, boundary=args.boundary)
    zeros = lee_yang_zeros(lat, T)
    rows = [{"re": z.real, "im": z.imag, "abs_minus_1": abs(z) - 1, "angle": math.atan2(z.imag, z.real)}
            for z in zeros]
    dev = max(abs(r["abs_minus_1"]) for r in rows)
    payload = {"L": args.L, "T": T, "boundary": args.boundary, "count": len(rows), "max_deviation": dev,
               "provenance": _provenance("lattice", "lee_yang_zeros", dev)}
    _emit(args, payload, rows)
    return EXIT_OK if dev < args.tol else EXIT_VERIFY


def cmd_qseries(args) -> int:
    from .qseries import identity_sides, verify_identity
    sides = identity_sides(args.identity, args.order)
    ref_name, ref = sides[0]
    checks = []
    ok = True
    for name, other in sides[1:]:
        res = verify_identity(ref, other)
        checks.append({"left": ref_name, "right": name, "ok": res.ok, "first_mismatch": res.first_mismatch,
                       "left_coefficient": None if res.left is None else str(res.left),
                       "right_coefficient": None if res.right is None else str(res.right)})
        ok &= res.ok
    payload = {"identity": args.identity, "order": args.order, "passed": ok, "checks": checks,
               "leading": [str(c) for c in ref.coeffs[:11]],
               "provenance": _provenance("qseries", "verify_identity", 0)}
    _emit(args, payload)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_suite(args) -> int:
    from .acceptance import report_bundle
    bundle = report_bundle(args.name, seed=args.seed)
    for c in bundle["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] criterion {c['number']:2d}: {c['title']} ({c['seconds']:.1f} s)", file=sys.stderr)
    _emit(args, bundle)
    return EXIT_OK if bundle["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized estimators")
    common.add_argument("--precision", type=int, default=None,
                        help="decimal digits for multiprecision work (overrides ISING_EXACT_PRECISION)")

    parser = _Parser(prog="ising-exact", description=__doc__.splitlines()[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thermo", parents=[common], help="free energy, magnetization, internal energy",
                       description="JSON keys: free_energy, free_energy_error, magnetization, "
                                   "internal_energy, branch. CSV: one row with those columns.")
    p.add_argument("--Ev", type=float, default=1.0)
    p.add_argument("--Eh", type=float, default=None)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--series-order", type=_positive_int, default=None)
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("corr", parents=[common], help="Toeplitz correlations",
                       description="Numeric value or, with --series, exact coefficients as strings. "
                                   "CSV columns with --series: power, coefficient.")
    p.add_argument("--kind", choices=("diag", "row"), required=True)
    p.add_argument("--N", type=_positive_int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--Ev", type=float, default=1.0)
    p.add_argument("--Eh", type=float, default=None)
    p.add_argument("--axis", choices=("h", "v"), default="h")
    p.add_argument("--series", action="store_true")
    p.add_argument("--order", type=_positive_int, default=10)
    p.set_defaults(func=cmd_corr)

    pain = sub.add_parser("painleve", help="sigma-form checks, scaling functions, mesons")
    psub = pain.add_subparsers(dest="action", required=True)
    p = psub.add_parser("sigma-check", parents=[common], description="Exit 2 if the residual is nonzero.")
    p.add_argument("--N", type=_positive_int, required=True)
    p.add_argument("--order", type=_positive_int, default=16)
    p.add_argument("--branch", choices=("low", "high"), default="low")
    p.set_defaults(func=cmd_painleve_sigma)
    p = psub.add_parser("scaling", parents=[common], description="CSV columns: r, G_minus, G_plus, eta, error_estimate.")
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.set_defaults(func=cmd_painleve_scaling)
    p = psub.add_parser("mesons", parents=[common], description="CSV columns: j, lambda, airy, difference.")
    p.add_argument("--count", type=_positive_int, default=10)
    p.set_defaults(func=cmd_painleve_mesons)
    p = psub.add_parser("tracy", parents=[common], description="Amplitude identity; exit 2 if it fails.")
    p.set_defaults(func=cmd_painleve_tracy)

    hir = sub.add_parser("hirota", help="critical correlation grid")
    hsub = hir.add_subparsers(dest="action", required=True)
    p = hsub.add_parser("propagate", parents=[common], description="Grid records {M, N, value, provenance}; "
                                                                   "values are strings. CSV has the same columns.")
    p.add_argument("--nmax", type=_positive_int, required=True)
    p.add_argument("--check", action="store_true", help="also compare both propagation routes")
    p.set_defaults(func=cmd_hirota)

    chi = sub.add_parser("chi", help="susceptibility constants and singularities")
    csub = chi.add_subparsers(dest="action", required=True)
    p = csub.add_parser("constants", parents=[common],
                        description="CSV columns: n, D_n, D_n_error, C_n, C_n_error, C_n_closed_form, method, samples.")
    p.add_argument("--n", type=int, choices=range(1, 7), required=True, metavar="K")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--method", choices=("quadrature", "rqmc"), default="quadrature")
    p.set_defaults(func=cmd_chi_constants)
    p = csub.add_parser("nickel", parents=[common],
                        description="CSV columns: n, j, l, s_re, s_im, w, exponent, log, amp_re, amp_im.")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_chi_nickel)
    p = csub.add_parser("diagonal", parents=[common], description="Diagonal susceptibility by summation.")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--ncut", type=int, default=None)
    p.add_argument("--branch", choices=("low", "high"), default="low")
    p.set_defaults(func=cmd_chi_diagonal)

    p = sub.add_parser("leeyang", parents=[common], help="Lee-Yang zeros of a periodic lattice",
                       description="CSV columns: re, im, abs_minus_1, angle. Exit 2 if a zero is off the circle.")
    p.add_argument("--L", type=_positive_int, required=True)
    p.add_argument("--T", type=float, default=None, help="temperature (default: T_c)")
    p.add_argument("--boundary", choices=("periodic", "cylindrical"), default="periodic")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_leeyang)

    qs = sub.add_parser("qseries", help="character identities")
    qsub = qs.add_subparsers(dest="action", required=True)
    p = qsub.add_parser("verify", parents=[common], description="Exit 2 with the first mismatch on failure.")
    p.add_argument("--identity", choices=("m34-spin", "m34-e8", "rr1", "rr2"), required=True)
    p.add_argument("--order", type=_positive_int, required=True)
    p.set_defaults(func=cmd_qseries)

    p = sub.add_parser("suite", parents=[common], help="run the quick or full acceptance suite")
    p.add_argument("--name", choices=("quick", "acceptance"), required=True)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "precision", None):
        os.environ["ISING_EXACT_PRECISION"] = str(args.precision)
    from .errors import (CapacityError, ContractError, DomainError, NumericError, PropagationError,
                         RangeError, UnsupportedRepresentationError)
    try:
        return args.func(args)
    except (DomainError, CapacityError, RangeError, UnsupportedRepresentationError, UsageExit) as exc:
        print(f"ising-exact: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractError, NumericError, PropagationError) as exc:
        print(f"ising-exact: verification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
