"""Command line front end.

    apexforest census --n 5 --kmax 1
    apexforest classify graph.txt
    apexforest sample --model apex --n 20 --k 1 --samples 3
    apexforest gf --pk 4
    apexforest series --class wheel --max-n 10
    apexforest experiment connectivity --n 1000 --k 1 --samples 10000

Exit status: 0 on success, 2 on a usage error, 3 when a size guard refuses.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from typing import Sequence

import mpmath

from . import __version__
from .constants import connectivity_constant, wheel_constants
from .enumeration import census
from .errors import SizeGuardError
from .experiments import experiment_chi_omega, experiment_connectivity, experiment_degrees
from .graph import parse_edge_list
from .samplers import (
    RNG_ID,
    SeededRng,
    exact_uniform_ex,
    random_apex_construction,
    random_forest,
    random_tree,
)
from .series import wheel_series
from .structure import classify_ex2c

WORKERS_ENV = "APEXFOREST_WORKERS"
EXIT_OK, EXIT_USAGE, EXIT_GUARD = 0, 2, 3
MAX_DIGITS = 40  # constants are computed to 50 significant digits


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _add_common(p: argparse.ArgumentParser, top: bool) -> None:
    # the same flags may appear before or after the subcommand
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=d(0), help="RNG seed (default 0)")
    p.add_argument("--workers", type=int, default=d(None),
                   help=f"worker processes (default ${WORKERS_ENV} or 1)")
    p.add_argument("--out", choices=("json", "csv"), default=d("json"))
    p.add_argument("--quiet", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apexforest", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(parser, top=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("census", help="exact class sizes over all graphs on n vertices")
    _add_common(p, top=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, default=1)
    p.add_argument("--allow-large", action="store_true", help="permit n = 8")

    p = sub.add_parser("classify", help="classify an edge list (file or stdin)")
    _add_common(p, top=False)
    p.add_argument("path", nargs="?", default="-")
    p.add_argument("--witness", action="store_true", help="include the witness")

    p = sub.add_parser("sample", help="draw random graphs as JSON lines")
    _add_common(p, top=False)
    p.add_argument("--model", choices=("tree", "forest", "apex", "exact-ex"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--samples", type=int, default=1)

    p = sub.add_parser("gf", help="limiting constants")
    _add_common(p, top=False)
    p.add_argument("--pk", type=int, metavar="K", help="print p_0 .. p_K")
    p.add_argument("--constants", action="store_true", help="print x, r, gamma, c")
    p.add_argument("--digits", type=int, default=None)

    p = sub.add_parser("series", help="exact coefficients of the wheel-class series")
    _add_common(p, top=False)
    p.add_argument("--class", dest="klass", required=True,
                   choices=("hairy", "hairy-plus", "wheel", "wheel-plus"))
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("experiment", help="Monte Carlo experiments")
    _add_common(p, top=False)
    p.add_argument("name", choices=("connectivity", "degrees", "chi-omega"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--eps", type=float, default=0.05)
    return parser


# ---------------------------------------------------------------------------
# output


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "csv":
        if not rows:
            return
        fields = []
        for r in rows:
            for key in r:
                if key not in fields:
                    fields.append(key)
        w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    else:
        out.write(json.dumps(rows) + "\n")


def _info(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_census(args, out) -> None:
    rec = census(args.n, args.kmax, workers=args.workers, allow_large=args.allow_large)
    _emit_rows(rec.rows(), args.out, out)
    _info(args, f"census n={args.n} kmax={args.kmax}: {rec.total} graphs")


def _cmd_classify(args, out) -> None:
    if args.path == "-":
        text = sys.stdin.read()
    else:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        g = parse_edge_list(text)
    except ValueError as exc:
        raise UsageError(f"bad edge list: {exc}") from exc
    d = classify_ex2c(g).to_dict()
    if not args.witness:
        d.pop("witness")
    if args.out == "csv":
        _emit_rows([{"member": d["member"], "labels": " ".join(d["labels"])}], "csv", out)
    else:
        out.write(json.dumps(d) + "\n")


def _cmd_sample(args, out) -> None:
    base = SeededRng(args.seed)
    rows = []
    for i in range(args.samples):
        rng = base.split(i)
        rec = None
        if args.model == "tree":
            g = random_tree(args.n, rng)
        elif args.model == "forest":
            g = random_forest(args.n, rng)
        elif args.model == "apex":
            g, rec = random_apex_construction(args.n, args.k, rng)
        else:
            g = exact_uniform_ex(args.n, args.k, rng)
        row = {"sample": i, "n": args.n, "edges": [list(e) for e in g.edges()]}
        if rec is not None:
            row["S"] = sorted(rec.S)
        rows.append(row)
    if args.out == "csv":
        _emit_rows(
            [
                {
                    "sample": r["sample"],
                    "n": r["n"],
                    "S": " ".join(map(str, r.get("S", []))),
                    "edges": " ".join(f"{u}-{v}" for u, v in r["edges"]),
                }
                for r in rows
            ],
            "csv",
            out,
        )
    else:
        for r in rows:
            out.write(json.dumps(r) + "\n")
    _info(args, f"{args.samples} samples, {RNG_ID}, seed {args.seed}")


def _decimal(x, digits: int) -> str:
    """x rounded half-even to ``digits`` decimals, trailing zeros kept."""
    with mpmath.workdps(60):
        exact = Decimal(mpmath.nstr(mpmath.mpf(x), 50, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))
    with localcontext() as ctx:
        ctx.prec = 100
        return str(exact.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


def _cmd_gf(args, out) -> None:
    if args.pk is None and not args.constants:
        raise UsageError("gf needs --pk K or --constants")
    if args.digits is not None and not 0 <= args.digits <= MAX_DIGITS:
        raise UsageError(f"--digits must lie in 0..{MAX_DIGITS}")
    rows = []
    if args.pk is not None:
        if args.pk < 0:
            raise UsageError("--pk must be non-negative")
        digits = 6 if args.digits is None else args.digits
        for k in range(args.pk + 1):
            rows.append({"k": k, "p": _decimal(connectivity_constant(k), digits)})
    if args.constants:
        digits = 6 if args.digits is None else args.digits
        cons = wheel_constants()
        row = {name: _decimal(getattr(cons, name), digits) for name in ("x", "r", "gamma", "c")}
        row["residual_spider"] = mpmath.nstr(cons.residuals["spider"], 3)
        row["residual_tree"] = mpmath.nstr(cons.residuals["tree"], 3)
        rows.append(row)
    if args.out == "csv":
        _emit_rows(rows, "csv", out)
        return
    for row in rows:
        # numbers are written as decimals with the requested precision
        out.write("{" + ", ".join(f'"{k}": {v}' for k, v in row.items()) + "}\n")


def _cmd_series(args, out) -> None:
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    ws = wheel_series(args.max_n)
    s = {
        "hairy": ws.hairy,
        "hairy-plus": ws.hairy_plus,
        "wheel": ws.wheel,
        "wheel-plus": ws.wheel_plus,
    }[args.klass]
    gamma = wheel_constants().gamma
    rows = []
    for n in range(args.max_n + 1):
        coeff = s.coeff(n)
        ratio = n * mpmath.mpf(coeff.numerator) / coeff.denominator / gamma ** n
        rows.append(
            {
                "n": n,
                "coefficient": str(coeff),
                "count": str(s.egf(n)),
                "ratio": float(mpmath.nstr(ratio, 12)),
            }
        )
    _emit_rows(rows, args.out, out)


def _cmd_experiment(args, out) -> None:
    common = dict(n=args.n, k=args.k, samples=args.samples, seed=args.seed, workers=args.workers)
    if args.name == "connectivity":
        rep = experiment_connectivity(**common)
    elif args.name == "degrees":
        rep = experiment_degrees(eps=args.eps, **common)
    else:
        rep = experiment_chi_omega(**common)
    if args.out == "csv":
        _emit_rows(rep.csv_rows(), "csv", out)
    else:
        out.write(rep.to_json() + "\n")


_COMMANDS = {
    "census": _cmd_census,
    "classify": _cmd_classify,
    "sample": _cmd_sample,
    "gf": _cmd_gf,
    "series": _cmd_series,
    "experiment": _cmd_experiment,
}


def cli_dispatch(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        if args.command is None:
            parser.print_usage(sys.stderr)
            raise UsageError("a subcommand is required")
        if args.workers is None:
            args.workers = _default_workers()
        if args.workers < 1:
            raise UsageError("--workers must be positive")
        if not 0 <= args.seed < 1 << 64:
            raise UsageError("--seed must fit in 64 unsigned bits")
        buf = io.StringIO()
        _COMMANDS[args.command](args, buf)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SizeGuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    out.write(buf.getvalue())
    return EXIT_OK


def main() -> None:
    sys.exit(cli_dispatch())
