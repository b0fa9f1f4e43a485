"""Benchmark harness: run solver methods over suites, score against best knowns.

Percentage deviations follow the convention of the surrounding
literature: ``100 * (LB_BK - LB_M) / LB_BK`` for lower bounds and
``100 * (UB_M - UB_BK) / UB_BK`` for upper bounds, so a negative upper
deviation signals an improvement over the best known.  Both are computed
in exact rational arithmetic and quantized to 4 decimal places only at
the record boundary (human tables show 2).
"""

from __future__ import annotations

import csv
import io
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import Instance, Solution
from .solver_exact import SolveConfig, SolveReport, certificate_issues, solve
from .solver_heur import GraspConfig, grasp

RESULTS_HEADER = [
    "instance",
    "kappa",
    "method",
    "lb",
    "ub",
    "status",
    "time_to_best_s",
    "time_total_s",
    "lb_dev_pct",
    "ub_dev_pct",
]
AGGREGATE_LABEL = "average"
_PCT_QUANTUM = Decimal("0.0001")


def deviation_lb(lb_bk: int, lb_m: int) -> Fraction | None:
    """Percent shortfall of a method's lower bound; None when undefined."""
    if lb_bk <= 0:
        return None
    return Fraction(100 * (lb_bk - lb_m), lb_bk)


def deviation_ub(ub_bk: int, ub_m: int) -> Fraction | None:
    """Percent excess of a method's upper bound; negative means improved."""
    if ub_bk <= 0:
        return None
    return Fraction(100 * (ub_m - ub_bk), ub_bk)


@dataclass(frozen=True)
class BestKnownTable:
    """Reference bounds per (instance, kappa), loaded from a user CSV."""

    entries: dict[tuple[str, int], tuple[int, int]]

    @classmethod
    def from_csv(cls, text: str) -> "BestKnownTable":
        reader = csv.DictReader(io.StringIO(text))
        expected = ["instance", "kappa", "lb", "ub"]
        if reader.fieldnames != expected:
            raise ValueError(f"best-known CSV header must be {','.join(expected)}")
        entries: dict[tuple[str, int], tuple[int, int]] = {}
        for row in reader:
            lb, ub = int(row["lb"]), int(row["ub"])
            if lb > ub:
                raise ValueError(
                    f"best-known entry {row['instance']} kappa={row['kappa']}: lb > ub"
                )
            entries[(row["instance"], int(row["kappa"]))] = (lb, ub)
        return cls(entries)

    def get(self, instance_name: str, kappa: int) -> tuple[int, int] | None:
        return self.entries.get((instance_name, kappa))


@dataclass(eq=True)
class BenchRecord:
    instance_name: str
    kappa: int
    method_name: str
    lower_bound: int | None
    upper_bound: int | None
    status: str
    time_to_best_s: float
    time_total_s: float
    lb_deviation_pct: Decimal | None
    ub_deviation_pct: Decimal | None


@dataclass(eq=True)
class MethodAggregate:
    """Per-method column means over the records where each column is defined."""

    method_name: str
    mean_time_to_best_s: float
    mean_time_total_s: float
    mean_lb_deviation_pct: Decimal | None
    mean_ub_deviation_pct: Decimal | None
    lb_deviation_count: int
    ub_deviation_count: int


@dataclass(frozen=True)
class BenchConfig:
    time_limit: float
    jobs: int = 1

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


@dataclass
class MethodOutcome:
    """What one method produced on one instance (times via the harness clock)."""

    lower_bound: int | None
    upper_bound: int | None
    incumbent: Solution | None
    status: str
    time_to_best_s: float
    time_total_s: float


MethodFn = Callable[[Instance, float, Callable[[], float]], MethodOutcome]


def exact_method(
    node_limit: int | None = None, use_completion_bound: bool = True
) -> MethodFn:
    """Branch-and-bound adapter; carries the solver's own certified bounds."""

    def run(inst: Instance, time_limit: float, clock: Callable[[], float]) -> MethodOutcome:
        report = solve(
            inst,
            SolveConfig(
                time_limit=time_limit,
                node_limit=node_limit,
                use_completion_bound=use_completion_bound,
                clock=clock,
            ),
        )
        return MethodOutcome(
            lower_bound=report.lower_bound if report.status != "infeasible" else None,
            upper_bound=report.upper_bound,
            incumbent=report.incumbent,
            status=report.status,
            time_to_best_s=report.time_to_best,
            time_total_s=report.time_total,
        )

    return run


def grasp_method(iterations: int, rcl_alpha: float = 0.5, seed: int = 0) -> MethodFn:
    """GRASP adapter: upper bounds only, no lower-bound claim.

    Construction time is not split per iteration, so time-to-best equals
    the total heuristic time.
    """

    def run(inst: Instance, time_limit: float, clock: Callable[[], float]) -> MethodOutcome:
        start = clock()
        sol, _ = grasp(
            inst,
            GraspConfig(
                iterations=iterations,
                rcl_alpha=rcl_alpha,
                seed=seed,
                time_limit=time_limit,
            ),
        )
        from .core import evaluate

        elapsed = clock() - start
        return MethodOutcome(
            lower_bound=None,
            upper_bound=evaluate(inst, sol).total,
            incumbent=sol,
            status="feasible",
            time_to_best_s=elapsed,
            time_total_s=elapsed,
        )

    return run


def _quantize_pct(value: Fraction | None) -> Decimal | None:
    if value is None:
        return None
    return (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        _PCT_QUANTUM, rounding=ROUND_HALF_UP
    )


def _outcome_issues(inst: Instance, outcome: MethodOutcome) -> list[str]:
    report = SolveReport(
        lower_bound=outcome.lower_bound if outcome.lower_bound is not None else 0,
        upper_bound=outcome.upper_bound,
        incumbent=outcome.incumbent,
        status=outcome.status,
        nodes_explored=0,
        time_to_best=outcome.time_to_best_s,
        time_total=outcome.time_total_s,
    )
    if outcome.status == "infeasible":
        report.infeasible_element = None
        issues = []
        for k in range(inst.num_elements):
            if not inst.element_coverers[k]:
                return []
        return ["infeasible status on a coverable instance"]
    return certificate_issues(inst, report)


def run_suite(
    instances: Sequence[tuple[Instance, int]],
    methods: Sequence[tuple[str, MethodFn]],
    cfg: BenchConfig,
    best_known: BestKnownTable | None = None,
    clock: Callable[[], float] = time.monotonic,
) -> tuple[list[BenchRecord], list[MethodAggregate]]:
    """Run every method on every instance under the per-run time limit.

    A crashing method or a method whose answer fails the certificate
    re-check yields a record with status ``unknown`` and no bounds,
    never a harness failure.  Records come back sorted by (instance,
    kappa, method); aggregates average the defined entries per method.
    """

    def one(task: tuple[Instance, int, str, MethodFn]) -> BenchRecord:
        inst, kappa, method_name, fn = task
        try:
            outcome = fn(inst, cfg.time_limit, clock)
            issues = _outcome_issues(inst, outcome)
            if issues:
                raise RuntimeError("; ".join(issues))
        except Exception as exc:  # noqa: BLE001 - harness isolates method failures
            print(
                f"warning: {method_name} on {inst.name}: {exc}",
                file=sys.stderr,
            )
            outcome = MethodOutcome(None, None, None, "unknown", 0.0, 0.0)
        ref = best_known.get(inst.name, kappa) if best_known else None
        lb_dev = ub_dev = None
        if ref is not None:
            lb_bk, ub_bk = ref
            if outcome.lower_bound is not None:
                lb_dev = deviation_lb(lb_bk, outcome.lower_bound)
            if outcome.upper_bound is not None:
                ub_dev = deviation_ub(ub_bk, outcome.upper_bound)
        return BenchRecord(
            instance_name=inst.name,
            kappa=kappa,
            method_name=method_name,
            lower_bound=outcome.lower_bound,
            upper_bound=outcome.upper_bound,
            status=outcome.status,
            time_to_best_s=round(outcome.time_to_best_s, 6),
            time_total_s=round(outcome.time_total_s, 6),
            lb_deviation_pct=_quantize_pct(lb_dev),
            ub_deviation_pct=_quantize_pct(ub_dev),
        )

    tasks = [
        (inst, kappa, name, fn)
        for inst, kappa in instances
        for name, fn in methods
    ]
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(one, tasks))
    else:
        records = [one(t) for t in tasks]
    records.sort(key=lambda r: (r.instance_name, r.kappa, r.method_name))
    aggregates = compute_aggregates(records)
    return records, aggregates


def compute_aggregates(records: Iterable[BenchRecord]) -> list[MethodAggregate]:
    """Arithmetic means per method over the entries where a column is defined."""
    by_method: dict[str, list[BenchRecord]] = {}
    for rec in records:
        by_method.setdefault(rec.method_name, []).append(rec)
    out = []
    for name in sorted(by_method):
        group = by_method[name]
        lb_devs = [r.lb_deviation_pct for r in group if r.lb_deviation_pct is not None]
        ub_devs = [r.ub_deviation_pct for r in group if r.ub_deviation_pct is not None]
        out.append(
            MethodAggregate(
                method_name=name,
                mean_time_to_best_s=round(
                    sum(r.time_to_best_s for r in group) / len(group), 6
                ),
                mean_time_total_s=round(
                    sum(r.time_total_s for r in group) / len(group), 6
                ),
                mean_lb_deviation_pct=_mean_decimal(lb_devs),
                mean_ub_deviation_pct=_mean_decimal(ub_devs),
                lb_deviation_count=len(lb_devs),
                ub_deviation_count=len(ub_devs),
            )
        )
    return out


def _mean_decimal(values: list[Decimal]) -> Decimal | None:
    if not values:
        return None
    total = sum(Fraction(v) for v in values)
    return _quantize_pct(total / len(values))


def _fmt_int(v: int | None) -> str:
    return "" if v is None else str(v)


def _fmt_dec(v: Decimal | None) -> str:
    return "" if v is None else str(v)


def emit_results_csv(
    records: Sequence[BenchRecord], aggregates: Sequence[MethodAggregate] = ()
) -> str:
    """Render records (and per-method average rows) as the results CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    for r in records:
        writer.writerow(
            [
                r.instance_name,
                r.kappa,
                r.method_name,
                _fmt_int(r.lower_bound),
                _fmt_int(r.upper_bound),
                r.status,
                f"{r.time_to_best_s:.6f}",
                f"{r.time_total_s:.6f}",
                _fmt_dec(r.lb_deviation_pct),
                _fmt_dec(r.ub_deviation_pct),
            ]
        )
    for a in aggregates:
        writer.writerow(
            [
                AGGREGATE_LABEL,
                "",
                a.method_name,
                "",
                "",
                "",
                f"{a.mean_time_to_best_s:.6f}",
                f"{a.mean_time_total_s:.6f}",
                _fmt_dec(a.mean_lb_deviation_pct),
                _fmt_dec(a.mean_ub_deviation_pct),
            ]
        )
    return buf.getvalue()


def parse_results_csv(text: str) -> tuple[list[BenchRecord], list[MethodAggregate]]:
    """Inverse of :func:`emit_results_csv`; aggregates get counts recomputed."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != RESULTS_HEADER:
        raise ValueError(f"results CSV header must be {','.join(RESULTS_HEADER)}")
    records: list[BenchRecord] = []
    raw_aggregates: list[tuple[str, float, float, Decimal | None, Decimal | None]] = []
    for row in reader:
        if not row:
            continue
        if row[0] == AGGREGATE_LABEL:
            raw_aggregates.append(
                (
                    row[2],
                    float(row[6]),
                    float(row[7]),
                    Decimal(row[8]) if row[8] else None,
                    Decimal(row[9]) if row[9] else None,
                )
            )
            continue
        records.append(
            BenchRecord(
                instance_name=row[0],
                kappa=int(row[1]),
                method_name=row[2],
                lower_bound=int(row[3]) if row[3] else None,
                upper_bound=int(row[4]) if row[4] else None,
                status=row[5],
                time_to_best_s=float(row[6]),
                time_total_s=float(row[7]),
                lb_deviation_pct=Decimal(row[8]) if row[8] else None,
                ub_deviation_pct=Decimal(row[9]) if row[9] else None,
            )
        )
    counts = {
        a.method_name: (a.lb_deviation_count, a.ub_deviation_count)
        for a in compute_aggregates(records)
    }
    aggregates = [
        MethodAggregate(
            method_name=name,
            mean_time_to_best_s=t_best,
            mean_time_total_s=t_total,
            mean_lb_deviation_pct=lb,
            mean_ub_deviation_pct=ub,
            lb_deviation_count=counts.get(name, (0, 0))[0],
            ub_deviation_count=counts.get(name, (0, 0))[1],
        )
        for name, t_best, t_total, lb, ub in raw_aggregates
    ]
    return records, aggregates


def format_records_table(
    records: Sequence[BenchRecord], aggregates: Sequence[MethodAggregate] = ()
) -> str:
    """Aligned human-readable results, deviations at 2 decimal places."""
    headers = ["instance", "k", "method", "lb", "ub", "status", "t_best", "t_total", "lb%", "ub%"]
    rows = [headers]
    for r in records:
        rows.append(
            [
                r.instance_name,
                str(r.kappa),
                r.method_name,
                _fmt_int(r.lower_bound),
                _fmt_int(r.upper_bound),
                r.status,
                f"{r.time_to_best_s:.2f}",
                f"{r.time_total_s:.2f}",
                _fmt_2dp(r.lb_deviation_pct),
                _fmt_2dp(r.ub_deviation_pct),
            ]
        )
    for a in aggregates:
        rows.append(
            [
                AGGREGATE_LABEL,
                "",
                a.method_name,
                "",
                "",
                f"n={a.lb_deviation_count}/{a.ub_deviation_count}",
                f"{a.mean_time_to_best_s:.2f}",
                f"{a.mean_time_total_s:.2f}",
                _fmt_2dp(a.mean_lb_deviation_pct),
                _fmt_2dp(a.mean_ub_deviation_pct),
            ]
        )
    widths = [max(len(row[c]) for row in rows) for c in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def _fmt_2dp(v: Decimal | None) -> str:
    return "" if v is None else f"{v:.2f}"


@dataclass(eq=True)
class StatsRow:
    """One line of the instance-characteristics report."""

    name: str
    num_elements: int
    num_subsets: int
    conflict_counts: dict[int, int]  # kappa -> |D|


_NAME_KAPPA = re.compile(r"^(?P<base>.+)-k(?P<kappa>\d+)$")


def stats_report(instances: Iterable[Instance]) -> list[StatsRow]:
    """Group transformed instances named ``<base>-k<kappa>`` into stats rows."""
    rows: dict[str, StatsRow] = {}
    for inst in instances:
        m = _NAME_KAPPA.match(inst.name)
        if not m:
            raise ValueError(
                f"instance name {inst.name!r} lacks the -k<kappa> suffix"
            )
        base, kappa = m.group("base"), int(m.group("kappa"))
        row = rows.get(base)
        if row is None:
            row = StatsRow(base, inst.num_elements, inst.num_subsets, {})
            rows[base] = row
        elif (row.num_elements, row.num_subsets) != (inst.num_elements, inst.num_subsets):
            raise ValueError(f"inconsistent shapes across kappas for {base!r}")
        row.conflict_counts[kappa] = len(inst.conflicts)
    return [rows[k] for k in sorted(rows)]


def format_stats_table(rows: Sequence[StatsRow], kappas: Sequence[int]) -> str:
    """Aligned text table: name, |U|, |N|, and |D| per requested kappa."""
    headers = ["instance", "|U|", "|N|"] + [f"|D| k={k}" for k in kappas]
    table = [headers]
    for row in rows:
        table.append(
            [row.name, str(row.num_elements), str(row.num_subsets)]
            + [str(row.conflict_counts.get(k, "")) for k in kappas]
        )
    widths = [max(len(r[c]) for r in table) for c in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
    return "\n".join(lines) + "\n"
