"""Command-line front end: ``gwseries <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .correspond import IDENTITIES, theta_structure
from .degeneration import DegenerationInput, assemble_Nz
from .errors import GWSeriesError, PresetMismatch
from .genus_series import (
    format_rational,
    format_series,
    kernel_k1,
    kernel_sin_power,
    kernel_v2,
    kernel_v3,
    parse_series,
)
from .invariant_store import (
    Dataset,
    InvariantKind,
    InvariantTable,
    NovikovSeries,
    StationaryOracle,
    bundled_dataset,
    load_dataset,
)
from .loglocal import AUT_MODES, delta1, delta_full
from .surface_lattice import PRESETS, get_preset
from .transforms import gv_to_gw, gw_to_gv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_GLOBAL_DEFAULTS = {
    "data": None,
    "preset": None,
    "genus_cap": None,
    "degree_cap": None,
    "format": "human",
    "verbose": False,
}


def _add_globals(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand
    s = argparse.SUPPRESS
    parser.add_argument("--data", default=s, help="dataset JSON (path or name in GWSERIES_DATA_DIR)")
    parser.add_argument("--preset", choices=sorted(PRESETS), default=s)
    parser.add_argument("--genus-cap", type=int, default=s)
    parser.add_argument("--degree-cap", type=int, default=s)
    parser.add_argument("--format", choices=("human", "tsv", "json"), default=s)
    parser.add_argument("--verbose", "-v", action="store_true", default=s)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwseries",
        description="Exact generating-function algebra for local and log Gromov-Witten invariants of surfaces.",
    )
    _add_globals(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="print a closed-form kernel")
    _add_globals(p)
    p.add_argument("--kernel", choices=("v3", "v2", "k1", "sin"), required=True)
    p.add_argument("--e", type=int, help="tangency for the v2 kernel")
    p.add_argument("--g", type=int, help="genus for the sin kernel")
    p.add_argument("--k", type=int, default=1, help="cover degree for the sin kernel")

    p = sub.add_parser("gvgw", help="multiple-cover resummation in either direction")
    _add_globals(p)
    p.add_argument("--direction", choices=("to-gw", "to-gv"), required=True)

    p = sub.add_parser("assemble", help="degeneration assembly of N_{g,1}(Z)")
    _add_globals(p)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--r-series", required=True, help="two-point series as 'upow:rat' pairs")

    p = sub.add_parser("delta1", help="genus-1 elliptic correction at a class")
    _add_globals(p)
    p.add_argument("--class", dest="cls", required=True, help="e.g. 3,4 or 3B+4F")
    p.add_argument("--signed", action="store_true", help="include the (-1)^((E.E)n) sign")

    p = sub.add_parser("delta", help="full discrepancy Delta(g, beta)")
    _add_globals(p)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--aut-mode", choices=AUT_MODES, default="at_most")

    p = sub.add_parser("check", help="verify an identity on a dataset")
    _add_globals(p)
    p.add_argument("--identity", choices=sorted(IDENTITIES), required=True)
    p.add_argument("--aut-mode", choices=AUT_MODES, default="at_most")

    p = sub.add_parser("theta", help="theta-function structure constant N^beta_pqr")
    _add_globals(p)
    p.add_argument("--p", dest="p_ord", type=int, required=True)
    p.add_argument("--q", dest="q_ord", type=int, required=True)
    p.add_argument("--r", dest="r_ord", type=int, required=True)
    p.add_argument("--class", dest="cls", required=True)
    return parser


# output helpers ------------------------------------------------------------------

def _emit_rows(args, header: Sequence[str], rows: list, out) -> None:
    if args.format == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2)
        out.write("\n")
        return
    if args.format == "tsv":
        out.write("\t".join(header) + "\n")
        for r in rows:
            out.write("\t".join(str(x) for x in r) + "\n")
        return
    cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    for row in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")


def _emit_value(args, name: str, value, out, extra: Optional[dict] = None) -> None:
    text = format_rational(value) if isinstance(value, Fraction) else str(value)
    if args.format == "json":
        doc = {name: text}
        doc.update(extra or {})
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif args.format == "tsv":
        out.write(f"{name}\t{text}\n")
    else:
        out.write(text + "\n")


def _dataset(args, required: bool = True) -> Optional[Dataset]:
    if args.data is None:
        if args.preset in (None, "f1"):
            ds = bundled_dataset()
        elif required:
            raise GWSeriesError("--data is required for this preset")
        else:
            return None
    else:
        ds = load_dataset(args.data)
    if args.preset is not None and ds.preset.id != args.preset:
        raise PresetMismatch(f"dataset preset {ds.preset.id!r} differs from --preset {args.preset!r}")
    return ds


# subcommands -----------------------------------------------------------------------

def _cmd_series(args, out) -> int:
    cap = 3 if args.genus_cap is None else args.genus_cap
    if args.kernel == "v3":
        s = kernel_v3(cap)
    elif args.kernel == "k1":
        s = kernel_k1(cap)
    elif args.kernel == "v2":
        if args.e is None:
            raise GWSeriesError("--e is required for the v2 kernel")
        s = kernel_v2(args.e, cap)
    else:
        if args.g is None:
            raise GWSeriesError("--g is required for the sin kernel")
        s = kernel_sin_power(args.g, args.k, cap)
    if args.format == "human":
        out.write(format_series(s) + "\n")
    else:
        _emit_rows(args, ("upow", "coefficient"), [(n, format_rational(c)) for n, c in s.items()], out)
    return EXIT_OK


def _cmd_gvgw(args, out) -> int:
    ds = _dataset(args)
    p, t = ds.preset, ds.table
    G = t.genus_cap if args.genus_cap is None else args.genus_cap
    D = t.degree_cap if args.degree_cap is None else args.degree_cap
    if args.direction == "to-gw":
        F = gv_to_gw(t, p, G, D)
        rows = [(p.format_class(c), g + 1, format_rational(v)) for c, s in F.terms for g, v in s.items() if v]
        _emit_rows(args, ("class", "genus", "N"), rows, out)
    else:
        # GwLocal entries, genus g sitting at hbar^(2g-2)
        terms: dict = {}
        for (c, g), v in t.of_kind(InvariantKind.GwLocal).items():
            if g <= G:
                terms.setdefault(c, {})[g - 1] = v
        from .genus_series import GenusSeries

        F = NovikovSeries.from_dict(p, {c: GenusSeries.from_dict(d, G - 1) for c, d in terms.items()}, D, G - 1)
        table = gw_to_gv(F)
        rows = [(p.format_class(c), g, format_rational(v)) for (c, g), v in table.of_kind(InvariantKind.GvLocal).items()]
        _emit_rows(args, ("class", "genus", "n"), rows, out)
    return EXIT_OK


def _cmd_assemble(args, out) -> int:
    R = parse_series(args.r_series)
    cap = R.cap if args.genus_cap is None else args.genus_cap
    s = assemble_Nz(DegenerationInput(args.e, R, cap))
    if args.format == "human":
        out.write(format_series(s) + "\n")
    else:
        _emit_rows(args, ("genus", "N_Z"), [(n, format_rational(c)) for n, c in s.items()], out)
    return EXIT_OK


def _cmd_delta1(args, out) -> int:
    ds = _dataset(args)
    beta = ds.preset.parse_class(args.cls)
    value = delta1(ds.preset, beta, ds.table, signed=args.signed)
    _emit_value(args, "delta1", value, out, {"class": ds.preset.format_class(beta)})
    return EXIT_OK


def _cmd_delta(args, out) -> int:
    ds = _dataset(args)
    beta = ds.preset.parse_class(args.cls)
    trace: list = []
    value = delta_full(ds.preset, beta, args.genus, ds.table, ds.oracle, aut_mode=args.aut_mode, trace=trace)
    _emit_value(args, "delta", value, out, {"class": ds.preset.format_class(beta), "genus": args.genus})
    if args.verbose:
        rows = [
            (
                t.g,
                t.h,
                ",".join(map(str, t.gs)),
                ",".join(map(str, t.a)),
                t.m,
                t.d_E,
                " ".join(ds.preset.format_class(c) for c in t.parts) or "-",
                format_rational(t.weight),
                format_rational(t.stationary),
                format_rational(t.value),
            )
            for t in trace
        ]
        _emit_rows(args, ("g", "h", "g_j", "a", "m", "d_E", "parts", "weight", "N_E", "term"), rows, sys.stderr)
    return EXIT_OK


def _cmd_check(args, out) -> int:
    ds = _dataset(args)
    fn = IDENTITIES[args.identity]
    kwargs = {}
    if args.degree_cap is not None:
        kwargs["degree_cap"] = args.degree_cap
    if args.identity in ("main", "open-closed"):
        kwargs["aut_mode"] = args.aut_mode
        if args.genus_cap is not None:
            kwargs["genus_cap"] = args.genus_cap
    report = fn(ds, **kwargs)
    if args.format == "json":
        json.dump(report.to_json(ds.preset), out, indent=2)
        out.write("\n")
    else:
        rows = [(ds.preset.format_class(r.cls), r.genus, r.term, format_rational(r.value)) for r in report.residuals]
        _emit_rows(args, ("class", "genus", "term", "residual"), rows, out)
        if args.format == "human":
            status = "PASS" if report.passed else "FAIL"
            out.write(
                f"{status} {report.identity} preset={report.preset} "
                f"genus_cap={report.genus_cap} degree_cap={report.degree_cap}\n"
            )
            if args.verbose:
                for key in report.to_json(ds.preset)["queried"]:
                    out.write(f"  queried {key}\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_theta(args, out) -> int:
    ds = _dataset(args)
    beta = ds.preset.parse_class(args.cls)
    value = theta_structure(args.p_ord, args.q_ord, args.r_ord, beta, ds.table)
    _emit_value(args, "N", value, out, {"class": ds.preset.format_class(beta)})
    return EXIT_OK


COMMANDS = {
    "series": _cmd_series,
    "gvgw": _cmd_gvgw,
    "assemble": _cmd_assemble,
    "delta1": _cmd_delta1,
    "delta": _cmd_delta,
    "check": _cmd_check,
    "theta": _cmd_theta,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        return COMMANDS[args.command](args, out)
    except GWSeriesError as exc:
        print(f"gwseries: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"gwseries: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


cli_main = main


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
