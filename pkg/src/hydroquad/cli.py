"""Command-line interface: ``hydroquad {rate,table1,branching,selfcheck}``.

Exit codes: 0 success, 1 self-check failure, 2 parse error,
3 physics or selection-rule error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .constants import DEFAULT_PROFILE, PROFILES, get_constants
from .errors import HydroquadError
from .levels import Level, parse_label
from .quantum import e2_allowed, qm_rate
from .report import (
    branching_rows,
    machine_format,
    display_format,
    render_branching,
    render_table1,
    table1_rows,
    to_csv,
    to_json,
)
from .selfcheck import run_selfcheck
from .semiclassical import e2_rate_rescaled
from .specfun import precision

EXIT_OK = 0
EXIT_SELFCHECK = 1
EXIT_PARSE = 2
EXIT_PHYSICS = 3


class PhysicsError(Exception):
    pass


@dataclass(frozen=True)
class RateRow:
    label_i: str
    label_f: str
    delta_l: int
    method: str
    f_thz: float
    rate_s: float


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out", type=Path, default=None, help="write output to PATH instead of stdout")
    p.add_argument("--denominator", choices=("e2", "all"), default="e2",
                   help="branching denominator: E2 only (default) or E1+E2")
    p.add_argument("--constants", default=DEFAULT_PROFILE, help="named constants profile")
    p.add_argument("--precision", type=int, default=None, metavar="DIGITS",
                   help="guard digits added to the Bessel working precision (>= 30)")
    p.add_argument("--Z", type=int, default=1, help="nuclear charge")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hydroquad", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", parents=[common], help="E2 rate for one transition")
    p.add_argument("initial", help="initial level, e.g. 3d")
    p.add_argument("final", help="final level, e.g. 1s")
    p.add_argument("--method", choices=("qm", "scl", "both"), default="both")

    sub.add_parser("table1", parents=[common], help="quantum vs semiclassical comparison table")

    p = sub.add_parser("branching", parents=[common], help="branching-ratio dataset for one level")
    p.add_argument("n", type=int)
    p.add_argument("l", type=int)

    sub.add_parser("selfcheck", parents=[common], help="run the oracle suites")
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_bytes(text.encode("utf-8"))


def _metadata(args, **extra) -> dict:
    return {"constants": args.constants, "command": args.command, **extra}


def _level(label: str, Z: int) -> Level:
    n, l = parse_label(label)
    try:
        return Level(n, l, Z)
    except HydroquadError as exc:
        raise PhysicsError(f"{label}: {exc}") from None


def _cmd_rate(args, c) -> int:
    try:
        ini = _level(args.initial, args.Z)
        fin = _level(args.final, args.Z)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if fin.n >= ini.n:
        raise PhysicsError(f"{ini.label} -> {fin.label}: emission needs n' < n")
    dl = fin.l - ini.l
    if not e2_allowed(ini.l, fin.l):
        if ini.l == 0 and fin.l == 0:
            raise PhysicsError(f"{ini.label} -> {fin.label}: l = 0 -> l' = 0 is forbidden for E2")
        raise PhysicsError(f"{ini.label} -> {fin.label}: Delta l = {dl:+d} is forbidden for E2 "
                           "(allowed: 0, +-2)")
    rows = []
    if args.method in ("qm", "both"):
        r = qm_rate(ini.n, ini.l, fin.n, fin.l, ini.Z, c)
        rows.append(RateRow(ini.label, fin.label, dl, "quantum", r.frequency / 1e12, r.rate))
    if args.method in ("scl", "both"):
        r = e2_rate_rescaled(ini, ini.n - fin.n, dl, c)
        rows.append(RateRow(ini.label, fin.label, dl, "rescaled", r.frequency / 1e12, r.rate))
    if args.format == "csv":
        text = to_csv(rows)
    elif args.format == "json":
        text = to_json(rows, _metadata(args, Z=ini.Z))
    else:
        tags = {"quantum": "QM", "rescaled": "SCL"}
        text = "".join(
            f"{r.label_i} -> {r.label_f}  {tags[r.method]:<4}{display_format(r.rate_s):>10}"
            f"  ({machine_format(r.rate_s)} s^-1)\n"
            for r in rows
        )
    _emit(text, args.out)
    return EXIT_OK


def _cmd_table1(args, c) -> int:
    rows = table1_rows(args.Z, c)
    if args.format == "csv":
        text = to_csv(rows)
    elif args.format == "json":
        text = to_json(rows, _metadata(args, Z=args.Z))
    else:
        text = render_table1(rows)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_branching(args, c) -> int:
    try:
        level = Level(args.n, args.l, args.Z)
    except HydroquadError as exc:
        raise PhysicsError(str(exc)) from None
    rows, meta = branching_rows(level, args.denominator, c)
    if args.format == "csv":
        text = to_csv(rows)
    elif args.format == "json":
        text = to_json(rows, _metadata(args, **meta))
    else:
        text = render_branching(rows)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_selfcheck(args, c) -> int:
    results = run_selfcheck(c)
    ok = all(r.passed for r in results)
    if args.format == "json":
        payload = {
            "metadata": {"constants": args.constants, "version": __version__},
            "suites": [
                {"name": r.name, "max_deviation": r.max_deviation, "tolerance": r.tolerance,
                 "passed": r.passed, "seconds": round(r.seconds, 3)}
                for r in results
            ],
            "passed": ok,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "\n".join(r.line() for r in results) + f"\n{'ALL PASS' if ok else 'FAILED'}\n"
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_SELFCHECK


COMMANDS = {
    "rate": _cmd_rate,
    "table1": _cmd_table1,
    "branching": _cmd_branching,
    "selfcheck": _cmd_selfcheck,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.constants not in PROFILES:
        parser.error(f"unknown constants profile {args.constants!r}; choose from {sorted(PROFILES)}")
    if args.precision is not None and args.precision < 30:
        parser.error("--precision must be at least 30 digits")
    c = get_constants(args.constants)
    try:
        if args.precision is not None:
            with precision(extra_digits=args.precision):
                return COMMANDS[args.command](args, c)
        return COMMANDS[args.command](args, c)
    except (PhysicsError, HydroquadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
