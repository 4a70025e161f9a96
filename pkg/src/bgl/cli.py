"""Batch verification driver.

Verbs map to scenario kinds; with no --config a built-in default scenario
runs.  Exit code 0 iff every checked invariant in the run passed.
"""

from __future__ import annotations

import argparse
import sys

from .errors import DomainError
from .report import to_table, to_text
from .scenario import KINDS, default_scenario, load_scenario, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bgl",
        description="verify grand Lebesgue norm and maximal-inequality bounds "
                    "against brute-force oracles",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} scenario")
        p.add_argument("--config", default=None, help="scenario config file")
        p.add_argument("--seed", type=int, default=None, help="64-bit master seed")
        p.add_argument("--out", default=None, help="write the report here")
        p.add_argument("--format", choices=("text", "table"), default="text",
                       help="structured text (diffable) or a human table")
        p.add_argument("--p-max", type=float, default=None, dest="p_max",
                       help="cap for p-grids on unbounded supports")
        p.add_argument("--tol", type=float, default=None,
                       help="override domination tolerance where applicable")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            scn = load_scenario(args.config)
            if scn.kind != args.kind:
                print(f"config is a {scn.kind!r} scenario, verb was {args.kind!r}",
                      file=sys.stderr)
                return 2
        else:
            scn = default_scenario(args.kind)
        if args.seed is not None:
            scn = type(scn)(kind=scn.kind, seed=args.seed, sections=scn.sections)
        if args.tol is not None:
            sections = dict(scn.sections)
            chain = dict(sections.get("chain", {}))
            chain["tol"] = str(args.tol)
            sections["chain"] = chain
            scn = type(scn)(kind=scn.kind, seed=scn.seed, sections=sections)
        report = run_scenario(scn, p_max=args.p_max)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = to_text(report) if args.format == "text" else to_table(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
