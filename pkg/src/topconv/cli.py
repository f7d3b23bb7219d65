"""Command-line interface: model checking, filter enumeration, power spaces.

Exit status is 0 when no check failed, 1 on failing verdicts, and 2 for
usage, parse, or resolution errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .convergence import complete_universe
from .model import ModelDocument, ModelError, parse_model
from .power import build_power, check_power_group
from .report import Budgets, CheckResult, Report, failed, passed
from .suites import (
    ALL_SUITES,
    demo_document,
    demo_names,
    list_suites,
    resolve_suites,
    run_suite,
    _Session,
)


def _budgets(args) -> Budgets:
    return Budgets(
        enumeration=args.budget,
        sample=args.sample,
        closure_rounds=args.closure_rounds,
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--budget", type=int, default=20_000, help="enumeration cap")
    p.add_argument("--sample", type=int, default=500, help="sample size above budget")
    p.add_argument("--closure-rounds", type=int, default=4, help="universe closure iterations")
    p.add_argument(
        "--format",
        choices=("text", "machine"),
        default="text",
        help="report format (machine is stable JSON)",
    )


def _load(path_or_none, demo, parser):
    if demo is not None:
        try:
            return demo_document(demo)
        except KeyError as exc:
            parser.error(str(exc))
    if path_or_none is None:
        parser.error("a model file or --demo NAME is required")
    path = Path(path_or_none)
    if not path.exists():
        parser.error(f"no such model file: {path}")
    try:
        return parse_model(path.read_text(encoding="utf-8"), name=str(path))
    except ModelError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _emit(report: Report, fmt: str) -> int:
    print(report.to_json() if fmt == "machine" else report.to_text())
    return 0 if report.ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="topconv",
        description="finite-model workbench for lattice-valued convergence groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run theorem suites over a model file")
    p_check.add_argument("model", nargs="?", help="model file path")
    p_check.add_argument("--demo", help=f"built-in document ({', '.join(demo_names())})")
    p_check.add_argument("--suite", action="append", help="suite name (repeatable)")
    p_check.add_argument("--list-suites", action="store_true", help="print the check catalogue")
    _add_common(p_check)

    p_enum = sub.add_parser("enumerate-filters", help="list every top-filter of a model")
    p_enum.add_argument("model", nargs="?", help="model file path")
    p_enum.add_argument("--demo", help="built-in document")
    _add_common(p_enum)

    p_power = sub.add_parser("power", help="build the function space of two models")
    p_power.add_argument("source", help="source model file")
    p_power.add_argument("target", help="target model file")
    _add_common(p_power)

    args = parser.parse_args(argv)

    if args.command == "check":
        if args.list_suites:
            for name, doc in list_suites():
                print(f"{name:<22}{doc}")
            return 0
        doc = _load(args.model, args.demo, p_check)
        try:
            suites = resolve_suites(args.suite) if args.suite else None
        except KeyError as exc:
            p_check.error(str(exc.args[0]))
        report = run_suite(doc, seed=args.seed, budgets=_budgets(args), suites=suites)
        return _emit(report, args.format)

    if args.command == "enumerate-filters":
        doc = _load(args.model, args.demo, p_enum)
        if doc.lattice is None:
            print(f"model error: {doc.lattice_error}", file=sys.stderr)
            return 2
        if doc.group is None:
            print("model declares no group", file=sys.stderr)
            return 2
        universe = complete_universe(doc.lattice, doc.group.carrier, args.budget)
        print(f"{len(universe)} top-filters on {doc.group.carrier.labels}")
        for i, f in enumerate(universe.filters):
            print(f"  {i}: {f}")
        return 0

    if args.command == "power":
        src = _load(args.source, None, p_power)
        dst = _load(args.target, None, p_power)
        budgets = _budgets(args)
        report = Report(seed=args.seed, budgets=budgets)
        started = time.perf_counter()
        for role, doc in (("source", src), ("target", dst)):
            if doc.lattice is None:
                report.entries.append(failed(f"power/{role}", doc.lattice_error))
        if report.ok:
            s_src = _Session(src, budgets)
            s_dst = _Session(dst, budgets)
            space = build_power(s_src.structure, s_dst.structure, budgets)
            group = (
                f"pointwise group of order {space.group.size}"
                if space.group
                else "no pointwise group"
            )
            report.entries.append(
                passed("power/maps", f"{len(space.maps)} continuous maps; {group}")
            )
            report.entries.extend(
                CheckResult(f"power/{e.name}", e.status, e.witness, e.detail)
                for e in check_power_group(space, budgets)
            )
        report.elapsed = time.perf_counter() - started
        return _emit(report, args.format)

    parser.error("unknown command")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
