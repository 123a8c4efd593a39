"""Command line entry point: ``sp4hecke levi`` and ``sp4hecke verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Optional, Sequence

from .affine import GL2, SL2xGL1
from .filtration import LEGENDRE, SIGN, TRIVIAL
from .hecke import Inconclusive, ResourceBoundExceeded
from .suites import LENGTH_CAP, SUITES, RunConfig, levi_rows, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_RESOURCE = 0, 1, 2, 3
EXIT_USAGE = 64  # argparse would use 2, which means "inconclusive" here

log = logging.getLogger("sp4hecke")


def _multipliers(text: str) -> tuple:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("multipliers are two comma-separated integers")
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("exactly two multipliers are needed")
    return vals


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sp4hecke", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    levi = sub.add_parser("levi", help="classify Levi subgroups of Sp(2n) with a common point")
    levi.add_argument("--max-rank", type=int, default=6)
    _output_args(levi)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    verify.add_argument("--prime", type=int, default=3)
    verify.add_argument("--case", choices=(SL2xGL1, GL2), default=SL2xGL1)
    verify.add_argument("--mu", choices=(TRIVIAL, LEGENDRE), default=TRIVIAL)
    verify.add_argument("--mu-center", choices=(TRIVIAL, SIGN), default=TRIVIAL)
    verify.add_argument("--multipliers", type=_multipliers, default=(1, 1))
    verify.add_argument("--length-bound", type=int, default=None,
                        help=f"gallery length bound, at most {LENGTH_CAP}")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tolerance", type=float, default=1e-6)
    _output_args(verify)
    return parser


def _output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def render(config: dict, rows: list, fmt: str) -> str:
    dicts = [r.as_dict() for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["anchor", "computed", "expected", "abs_error", "pass"],
                           lineterminator="\n")
        w.writeheader()
        for d in dicts:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in d.items()})
        return buf.getvalue()
    summary = {
        "rows": len(rows),
        "passed": sum(r.passed for r in rows),
        "failed": sum(not r.passed and not r.inconclusive for r in rows),
        "inconclusive": sum(r.inconclusive for r in rows),
    }
    return json.dumps({"config": config, "rows": dicts, "summary": summary}, indent=2, sort_keys=True) + "\n"


def exit_code(rows: list) -> int:
    if any(not r.passed and not r.inconclusive for r in rows):
        return EXIT_FAIL
    if any(r.inconclusive for r in rows):
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")

    if args.command == "levi":
        if args.max_rank < 1:
            parser.error("--max-rank must be positive")
        rows = levi_rows(args.max_rank)
        _emit(render({"max_rank": args.max_rank}, rows, args.format), args.out)
        return exit_code(rows)

    try:
        cfg = RunConfig(prime=args.prime, case=args.case, mu=args.mu, mu_center=args.mu_center,
                        length_bound=args.length_bound, multipliers=args.multipliers,
                        tolerance=args.tolerance, seed=args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    if cfg.case == GL2 and cfg.mu_center != TRIVIAL:
        parser.error("--mu-center applies to the SL2xGL1 case only")
    log.info("running suite %s with %s", args.suite, cfg.as_dict())
    try:
        rows = run_suite(args.suite, cfg)
    except ResourceBoundExceeded as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    config = dict(cfg.as_dict(), suite=args.suite)
    _emit(render(config, rows, args.format), args.out)
    return exit_code(rows)


if __name__ == "__main__":
    sys.exit(main())
