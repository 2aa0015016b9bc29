"""Command-line runner: ``bigjump run [--config FILE] [overrides...]``.

Precedence is flags > config file > built-in defaults. ``--n`` and ``--x``
are repeatable; when either is given the sweep becomes the product of the
``n`` and ``x`` values (missing ones are taken from the file's sweep).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import report
from .experiment import ESTIMATORS, ConfigError, ExperimentSpec, SweepPoint, load_spec, parse_x_values, run

log = logging.getLogger("bigjump")


def _x_arg(text):
    try:
        return parse_x_values(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _estimators_arg(text):
    names = [s.strip() for s in text.split(",") if s.strip()]
    if text.strip().lower() in ("", "none"):
        return []
    if text.strip().lower() == "all":
        return list(ESTIMATORS)
    bad = [s for s in names if s not in ESTIMATORS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown estimator(s) {bad}; choose from {', '.join(ESTIMATORS)}")
    return names


def _workers_arg(text):
    return "auto" if text == "auto" else int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bigjump", description="Rare-event sweeps for heavy-tailed random sums.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an estimator/bound sweep and write a report")
    p.add_argument("--config", help="YAML experiment file")
    p.add_argument("--alpha", type=float)
    p.add_argument("--variant", choices=["PurePareto", "SmoothPareto"])
    p.add_argument("--u0", type=float)
    p.add_argument("--n", type=int, action="append", help="number of summands (repeatable)")
    p.add_argument(
        "--x", type=_x_arg, action="append", help="deviation level, repeatable, or log range lo:hi:count"
    )
    p.add_argument("--c", type=float, help="big-jump threshold fraction for every point")
    p.add_argument("--b", type=float, help="residual-sum fraction for every point")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--estimators", type=_estimators_arg, help=f"comma list of {','.join(ESTIMATORS)}, or 'all' / 'none'"
    )
    p.add_argument("--ci-level", type=float)
    p.add_argument("--workers", type=_workers_arg, help="integer or 'auto'")
    p.add_argument("--out", help="output path (stdout if omitted)")
    p.add_argument("--format", choices=report.FORMATS)
    return parser


def resolve_spec(args: argparse.Namespace) -> ExperimentSpec:
    spec = load_spec(args.config) if args.config else ExperimentSpec()
    updates = {}
    for key in ("alpha", "variant", "u0", "samples", "seed", "ci_level", "workers", "out", "format"):
        val = getattr(args, key)
        if val is not None:
            updates[key] = val
    if args.estimators is not None:
        updates["estimators"] = tuple(args.estimators)
    sweep = list(spec.sweep)
    if args.n or args.x:
        ns = args.n or sorted({p.n for p in sweep})
        xs = [v for group in args.x for v in group] if args.x else sorted({p.x for p in sweep})
        sweep = [SweepPoint(n, x) for n in ns for x in xs]
    if args.c is not None or args.b is not None:
        sweep = [
            replace(p, c=args.c if args.c is not None else p.c, b=args.b if args.b is not None else p.b)
            for p in sweep
        ]
    updates["sweep"] = sweep
    return replace(spec, **updates).validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        spec = resolve_spec(args)
        result = run(spec)
        text = report.emit(result.rows, spec.format, result.metadata)
        if spec.out:
            report.write(text, spec.out)
            log.info("wrote %d rows to %s", len(result.rows), spec.out)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"bigjump: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"bigjump: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
