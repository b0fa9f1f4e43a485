"""Command line front end tying the toolkit together.

Every subcommand is a thin adapter over library calls; no solver or
parser logic lives here.  Exit codes: 0 success, 1 usage error, 2
defective input data, 3 infeasible instance.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .bench import (
    BenchConfig,
    BestKnownTable,
    MethodFn,
    emit_results_csv,
    exact_method,
    format_records_table,
    format_stats_table,
    grasp_method,
    run_suite,
    stats_report,
)
from .core import (
    InfeasibleInstanceError,
    ScpError,
    Solution,
    evaluate,
    validate_instance,
)
from .ingest import (
    FormatError,
    parse_orlib,
    read_canonical,
    to_instance,
    write_canonical,
)
from .oracle import DEFAULT_MAX_SUBSETS, brute_force_optimum
from .solver_exact import SolveConfig, SolveReport, export_lp, solve
from .solver_heur import GraspConfig, grasp
from .transform import (
    GAMMA_STAGES,
    ROUNDING_POLICIES,
    TransformParams,
    gamma,
    generate_conflicts,
    merge3,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3

_KAPPA_SUFFIX = re.compile(r"-k(\d+)$")


class _Parser(argparse.ArgumentParser):
    """Parser whose usage failures exit with code 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_canonical(path: str):
    return read_canonical(Path(path).read_text())


def _ids_1based(sol: Solution) -> str:
    return " ".join(str(j + 1) for j in sol.ids)


def _cmd_parse(args: argparse.Namespace) -> int:
    raw = parse_orlib(Path(args.orlib_file).read_text())
    inst = to_instance(raw, name=Path(args.orlib_file).stem)
    print(f"m={raw.num_rows} n={raw.num_cols}")
    findings = validate_instance(inst)
    for finding in findings:
        print(f"finding: {finding}")
    if findings:
        return EXIT_DATA
    print("ok")
    return EXIT_OK


def _cmd_transform(args: argparse.Namespace) -> int:
    raw = parse_orlib(Path(args.orlib_file).read_text())
    params = TransformParams(
        kappa=args.kappa, rounding=args.rounding, gamma_stage=args.gamma_stage
    )
    base = to_instance(raw, name=Path(args.orlib_file).stem)
    merged = merge3(base)
    g = gamma(base if params.gamma_stage == "premerge" else merged, params.rounding)
    inst = generate_conflicts(merged, params, gamma_value=g)
    print(f"n={inst.num_subsets} |D|={len(inst.conflicts)} gamma={g}")
    if args.output is not None:
        Path(args.output).write_text(write_canonical(inst))
    return EXIT_OK


def _record_dict(
    instance_name: str, method_name: str, report: SolveReport
) -> dict[str, object]:
    # same field names as BenchRecord; deviations need a best-known table
    m = _KAPPA_SUFFIX.search(instance_name)
    infeasible = report.status == "infeasible"
    return {
        "instance_name": instance_name,
        "kappa": int(m.group(1)) if m else None,
        "method_name": method_name,
        "lower_bound": None if infeasible else report.lower_bound,
        "upper_bound": report.upper_bound,
        "status": report.status,
        "time_to_best_s": round(report.time_to_best, 6),
        "time_total_s": round(report.time_total, 6),
        "lb_deviation_pct": None,
        "ub_deviation_pct": None,
    }


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_canonical(args.scpcs_file)
    warm = None
    if args.warm_start:
        sol, _ = grasp(inst, GraspConfig(iterations=args.warm_iterations, seed=0))
        warm = evaluate(inst, sol).total
        print(f"warm_start_ub={warm}")
    report = solve(
        inst,
        SolveConfig(
            time_limit=args.time_limit,
            node_limit=args.node_limit,
            initial_upper_bound=warm,
        ),
    )
    print(f"status={report.status}")
    ub = "-" if report.upper_bound is None else str(report.upper_bound)
    print(f"lb={report.lower_bound} ub={ub}")
    print(f"nodes={report.nodes_explored}")
    print(f"time_to_best={report.time_to_best:.6f} time_total={report.time_total:.6f}")
    if report.incumbent is not None:
        print(f"selected(1-based): {_ids_1based(report.incumbent)}")
    if report.infeasible_element is not None:
        print(f"uncoverable_element(1-based)={report.infeasible_element + 1}")
    if args.json is not None:
        line = json.dumps(_record_dict(inst.name, "exact", report))
        if args.json == "-":
            print(line)
        else:
            with open(args.json, "a") as fh:
                fh.write(line + "\n")
    return EXIT_INFEASIBLE if report.status == "infeasible" else EXIT_OK


def _cmd_grasp(args: argparse.Namespace) -> int:
    inst = _load_canonical(args.scpcs_file)
    cfg = GraspConfig(
        iterations=args.iterations,
        rcl_alpha=args.alpha,
        seed=args.seed,
        time_limit=args.time_limit,
    )
    sol, found_at = grasp(inst, cfg)
    breakdown = evaluate(inst, sol)
    print(
        f"total={breakdown.total} cover_cost={breakdown.cover_cost} "
        f"penalty_cost={breakdown.penalty_cost}"
    )
    print(f"selected(1-based): {_ids_1based(sol)}")
    print(f"found_at_iteration={found_at}")
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_canonical(args.scpcs_file)
    total, sol, count = brute_force_optimum(inst, max_n=args.max_n)
    print(f"optimum={total}")
    print(f"selected(1-based): {_ids_1based(sol)}")
    print(f"optima={count}")
    return EXIT_OK


def _cmd_export_lp(args: argparse.Namespace) -> int:
    inst = _load_canonical(args.scpcs_file)
    text = export_lp(inst)
    if args.output is not None:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_kappas(spec: str) -> list[int]:
    try:
        values = [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"bad kappa list {spec!r}, expected e.g. 1,2") from None
    if not values or any(v < 0 for v in values):
        raise ValueError(f"bad kappa list {spec!r}, expected nonnegative integers")
    return values


def _cmd_stats(args: argparse.Namespace) -> int:
    kappas = _parse_kappas(args.kappa)
    root = Path(args.orlib_dir)
    if not root.is_dir():
        raise FormatError(f"not a directory: {root}")
    files = sorted(p for p in root.iterdir() if p.is_file())
    if not files:
        raise FormatError(f"no instance files in {root}")
    instances = []
    for path in files:
        raw = parse_orlib(path.read_text())
        base = to_instance(raw, name=path.stem)
        merged = merge3(base)
        g = gamma(
            base if args.gamma_stage == "premerge" else merged, args.rounding
        )
        for k in kappas:
            params = TransformParams(
                kappa=k, rounding=args.rounding, gamma_stage=args.gamma_stage
            )
            instances.append(generate_conflicts(merged, params, gamma_value=g))
    rows = stats_report(instances)
    sys.stdout.write(format_stats_table(rows, kappas))
    return EXIT_OK


def _read_manifest(path: Path) -> list[tuple[Path, int]]:
    """Parse '<scpcs-file> <kappa>' lines; paths resolve against the manifest."""
    pairs: list[tuple[Path, int]] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise FormatError(
                f"{path}:{lineno}: expected '<scpcs-file> <kappa>', got {line!r}"
            )
        try:
            kappa = int(parts[1])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: kappa must be an integer") from None
        pairs.append((path.parent / parts[0], kappa))
    if not pairs:
        raise FormatError(f"{path}: empty suite manifest")
    return pairs


def _build_methods(args: argparse.Namespace) -> list[tuple[str, MethodFn]]:
    methods: list[tuple[str, MethodFn]] = []
    for name in args.methods.split(","):
        name = name.strip()
        if name == "exact":
            methods.append((name, exact_method(node_limit=args.node_limit)))
        elif name == "grasp":
            methods.append(
                (name, grasp_method(args.iterations, args.alpha, args.seed))
            )
        elif name:
            raise ValueError(f"unknown method {name!r}, expected exact or grasp")
    if not methods:
        raise ValueError("no methods selected")
    return methods


def _cmd_bench(args: argparse.Namespace) -> int:
    pairs = _read_manifest(Path(args.suite_manifest))
    instances = [(read_canonical(p.read_text()), k) for p, k in pairs]
    best = None
    if args.best_known is not None:
        best = BestKnownTable.from_csv(Path(args.best_known).read_text())
    methods = _build_methods(args)
    cfg = BenchConfig(time_limit=args.time_limit, jobs=args.jobs)
    records, aggregates = run_suite(instances, methods, cfg, best_known=best)
    csv_text = emit_results_csv(records, aggregates)
    if args.output is not None:
        Path(args.output).write_text(csv_text)
        sys.stdout.write(format_records_table(records, aggregates))
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scpcs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("parse", help="read an OR-Library file, report shape and findings")
    p.add_argument("orlib_file")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("transform", help="build a conflict instance from an OR-Library file")
    p.add_argument("orlib_file")
    p.add_argument("--kappa", type=int, required=True, help="overlap tolerance")
    p.add_argument("--rounding", choices=ROUNDING_POLICIES, default="half-up")
    p.add_argument("--gamma-stage", choices=GAMMA_STAGES, default="merged")
    p.add_argument("-o", "--output", metavar="FILE", help="write the instance here")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("solve", help="exact branch-and-bound with certified bounds")
    p.add_argument("scpcs_file")
    p.add_argument("--time-limit", type=float, default=3600.0, metavar="S")
    p.add_argument("--node-limit", type=int, default=None, metavar="N")
    p.add_argument(
        "--warm-start",
        action="store_true",
        help="seed the cutoff from a short heuristic run",
    )
    p.add_argument("--warm-iterations", type=int, default=50, metavar="I")
    p.add_argument(
        "--json", metavar="FILE", help="append a JSON-lines record ('-' for stdout)"
    )
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("grasp", help="randomized construction + local search")
    p.add_argument("scpcs_file")
    p.add_argument("--iterations", type=int, default=200, metavar="I")
    p.add_argument("--alpha", type=float, default=0.5, metavar="A")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--time-limit", type=float, default=None, metavar="S")
    p.set_defaults(func=_cmd_grasp)

    p = sub.add_parser("oracle", help="exhaustive optimum for tiny instances")
    p.add_argument("scpcs_file")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_SUBSETS, metavar="N")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("export-lp", help="write the 0-1 model in LP format")
    p.add_argument("scpcs_file")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=_cmd_export_lp)

    p = sub.add_parser("stats", help="characteristics table for a directory of OR-Library files")
    p.add_argument("orlib_dir")
    p.add_argument("--kappa", default="1,2", help="comma-separated tolerances")
    p.add_argument("--rounding", choices=ROUNDING_POLICIES, default="half-up")
    p.add_argument("--gamma-stage", choices=GAMMA_STAGES, default="merged")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("bench", help="run methods over a manifest, emit CSV records")
    p.add_argument("suite_manifest")
    p.add_argument("--best-known", metavar="CSV", help="reference bounds table")
    p.add_argument("--time-limit", type=float, default=3600.0, metavar="S")
    p.add_argument("--jobs", type=int, default=1, metavar="J")
    p.add_argument("--methods", default="exact,grasp", help="comma-separated subset")
    p.add_argument("--iterations", type=int, default=200, help="grasp iterations")
    p.add_argument("--alpha", type=float, default=0.5, help="grasp RCL parameter")
    p.add_argument("--seed", type=int, default=0, help="grasp seed")
    p.add_argument("--node-limit", type=int, default=None, help="exact node budget")
    p.add_argument("-o", "--output", metavar="CSV", help="CSV here, table to stdout")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ScpError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
