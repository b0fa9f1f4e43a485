"""Anytime exact branch-and-bound for covering with conflict penalties.

Depth-first search over include/exclude decisions on subsets.  Each node
carries the accumulated cost plus penalty of its partial selection and a
certified completion bound, so at any interruption point the reported
lower and upper bounds bracket the true optimum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .core import Instance, Solution, evaluate, is_cover, validate_instance

_TIME_CHECK_INTERVAL = 1024  # nodes between wall-clock polls


@dataclass(frozen=True)
class SolveConfig:
    time_limit: float = 3600.0
    node_limit: int | None = None
    initial_upper_bound: int | None = None
    use_completion_bound: bool = True  # off: prune on accumulated total only
    stop: object | None = None  # anything with is_set(), polled at node boundaries
    clock: Callable[[], float] = field(default=time.monotonic, compare=False)

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SolveReport:
    lower_bound: int
    upper_bound: int | None
    incumbent: Solution | None
    status: str  # optimal | feasible | infeasible | unknown
    nodes_explored: int
    time_to_best: float
    time_total: float
    infeasible_element: int | None = None


@dataclass
class _Node:
    selected: tuple[int, ...]
    excluded: frozenset[int]
    cover_cost: int
    penalty_cost: int
    bound: int


def _completion_bound(
    inst: Instance, uncovered: set[int], excluded: frozenset[int]
) -> Fraction | None:
    """Fractional covering bound on the cost of covering ``uncovered``.

    Charges every uncovered element the cheapest available cost-per-
    still-uncovered-element rate among its coverers.  Any completion pays
    at least this much in set costs, and future penalties are nonnegative,
    so the (floored) value under-estimates the true completion cost.
    Returns None when some element has no available coverer.
    """
    if not uncovered:
        return Fraction(0)
    useful: dict[int, int] = {}  # subset -> |members & uncovered|
    for k in uncovered:
        for j in inst.element_coverers[k]:
            if j not in excluded:
                useful[j] = useful.get(j, 0) + 1
    total = Fraction(0)
    for k in uncovered:
        best_num: int | None = None
        best_den = 1
        for j in inst.element_coverers[k]:
            if j in excluded:
                continue
            num, den = inst.cost[j], useful[j]
            if best_num is None or num * best_den < best_num * den:
                best_num, best_den = num, den
        if best_num is None:
            return None
        total += Fraction(best_num, best_den)
    return total


def node_lower_bound(
    inst: Instance, selected: Iterable[int], excluded: Iterable[int] = ()
) -> int:
    """Certified lower bound for completing a partial selection.

    Accumulated cost plus penalty of ``selected``, plus the fractional
    covering bound over the still-uncovered elements.  Raises ValueError
    when the partial state cannot be completed to a cover.
    """
    sol = Solution.of(selected)
    accumulated = evaluate(inst, sol).total
    covered: set[int] = set()
    for j in sol.selected:
        covered.update(inst.members[j])
    uncovered = set(range(inst.num_elements)) - covered
    extra = _completion_bound(inst, uncovered, frozenset(excluded))
    if extra is None:
        raise ValueError("partial state cannot be completed to a cover")
    return accumulated + (extra.numerator // extra.denominator)


def solve(inst: Instance, cfg: SolveConfig | None = None) -> SolveReport:
    """Run the branch-and-bound until optimality or a configured limit.

    On normal termination the report is optimal with matching bounds; on a
    limit it is feasible (or unknown without an incumbent) with
    ``lower_bound`` the minimum bound over still-open nodes, clamped by
    the incumbent.  Uncoverable elements short-circuit to an infeasible
    report carrying the offending element id.
    """
    cfg = cfg or SolveConfig()
    clock = cfg.clock
    start = clock()

    for k in range(inst.num_elements):
        if not inst.element_coverers[k]:
            return SolveReport(
                lower_bound=0,
                upper_bound=None,
                incumbent=None,
                status="infeasible",
                nodes_explored=0,
                time_to_best=0.0,
                time_total=clock() - start,
                infeasible_element=k,
            )

    adjacency = inst.conflict_adjacency()
    all_elements = frozenset(range(inst.num_elements))
    warm_cutoff = cfg.initial_upper_bound

    best_sol: Solution | None = None
    best_total: int | None = None
    time_to_best = 0.0
    nodes = 0
    interrupted = False

    root_extra = _completion_bound(inst, set(all_elements), frozenset())
    assert root_extra is not None  # coverability was checked above
    root_bound = root_extra.numerator // root_extra.denominator if cfg.use_completion_bound else 0
    stack: list[_Node] = [_Node((), frozenset(), 0, 0, root_bound)]

    def pruned(bound: int) -> bool:
        # With an incumbent prune ties; a warm-start cutoff alone must not
        # prune equal-valued leaves or the matching incumbent is never found.
        if best_total is not None:
            return bound >= best_total
        if warm_cutoff is not None:
            return bound > warm_cutoff
        return False

    while stack:
        if cfg.stop is not None and cfg.stop.is_set():  # type: ignore[attr-defined]
            interrupted = True
            break
        if cfg.node_limit is not None and nodes >= cfg.node_limit:
            interrupted = True
            break
        if nodes % _TIME_CHECK_INTERVAL == 0 and clock() - start > cfg.time_limit:
            interrupted = True
            break

        node = stack.pop()
        if pruned(node.bound):
            continue
        nodes += 1

        covered: set[int] = set()
        for j in node.selected:
            covered.update(inst.members[j])
        uncovered = all_elements - covered

        if not uncovered:
            total = node.cover_cost + node.penalty_cost
            if __debug__:
                check = evaluate(inst, Solution.of(node.selected))
                assert check.total == total, "incremental bookkeeping drifted"
            if best_total is None or total < best_total:
                best_total = total
                best_sol = Solution.of(node.selected)
                time_to_best = clock() - start
            continue

        # Branch on the uncovered element with fewest available coverers.
        branch_elem = -1
        branch_avail: list[int] = []
        for k in sorted(uncovered):
            avail = [j for j in inst.element_coverers[k] if j not in node.excluded]
            if branch_elem < 0 or len(avail) < len(branch_avail):
                branch_elem, branch_avail = k, avail
                if not avail:
                    break
        if not branch_avail:
            continue  # dead branch: element uncoverable after exclusions

        selected_set = set(node.selected)
        scored = sorted(
            branch_avail,
            key=lambda j: (
                Fraction(
                    inst.cost[j]
                    + sum(d for p, d in adjacency[j] if p in selected_set),
                    len(set(inst.members[j]) & uncovered),
                ),
                j,
            ),
        )
        # Child t takes coverer t and excludes coverers 0..t-1; the final
        # "exclude them all" branch leaves branch_elem uncoverable and is cut.
        children: list[_Node] = []
        for t, j in enumerate(scored):
            child_sel = node.selected + (j,)
            child_exc = node.excluded | frozenset(scored[:t])
            penalty = node.penalty_cost + sum(
                d for p, d in adjacency[j] if p in selected_set
            )
            cover_cost = node.cover_cost + inst.cost[j]
            accumulated = cover_cost + penalty
            if cfg.use_completion_bound:
                child_unc = uncovered - set(inst.members[j])
                extra = _completion_bound(inst, child_unc, child_exc)
                if extra is None:
                    continue
                bound = accumulated + extra.numerator // extra.denominator
            else:
                bound = accumulated
            if not pruned(bound):
                children.append(_Node(child_sel, child_exc, cover_cost, penalty, bound))
        stack.extend(reversed(children))  # explore best-scored child first

    open_bounds = [n.bound for n in stack]
    elapsed = clock() - start

    if not interrupted and not stack:
        # Exhausted search; instance is coverable so an incumbent exists.
        assert best_total is not None and best_sol is not None
        return SolveReport(
            lower_bound=best_total,
            upper_bound=best_total,
            incumbent=best_sol,
            status="optimal",
            nodes_explored=nodes,
            time_to_best=time_to_best,
            time_total=elapsed,
        )

    if best_total is not None:
        lb = min([best_total] + open_bounds)
        return SolveReport(
            lower_bound=lb,
            upper_bound=best_total,
            incumbent=best_sol,
            status="feasible",
            nodes_explored=nodes,
            time_to_best=time_to_best,
            time_total=elapsed,
        )
    lb = min(open_bounds) if open_bounds else 0
    return SolveReport(
        lower_bound=lb,
        upper_bound=None,
        incumbent=None,
        status="unknown",
        nodes_explored=nodes,
        time_to_best=0.0,
        time_total=elapsed,
    )


def certificate_issues(inst: Instance, report: SolveReport) -> list[str]:
    """Discrepancies between a report and a from-scratch re-evaluation."""
    issues: list[str] = []
    if report.status == "infeasible":
        if report.infeasible_element is None or not (
            0 <= report.infeasible_element < inst.num_elements
        ):
            issues.append("infeasible report lacks a valid element id")
        elif inst.element_coverers[report.infeasible_element]:
            issues.append(
                f"element {report.infeasible_element} is coverable; not infeasible"
            )
        return issues
    if (
        report.upper_bound is not None
        and report.lower_bound > report.upper_bound
    ):
        issues.append(
            f"lower bound {report.lower_bound} exceeds upper bound {report.upper_bound}"
        )
    if report.incumbent is not None:
        if not is_cover(inst, report.incumbent):
            issues.append("not a cover: incumbent misses elements")
        total = evaluate(inst, report.incumbent).total
        if report.upper_bound != total:
            issues.append(
                f"objective mismatch: incumbent evaluates to {total}, "
                f"report says {report.upper_bound}"
            )
    if report.status == "optimal":
        if report.incumbent is None:
            issues.append("optimal status without an incumbent")
        if report.upper_bound is None or report.lower_bound != report.upper_bound:
            issues.append("optimal status with an open gap")
    return issues


def verify_certificate(inst: Instance, report: SolveReport) -> bool:
    """True iff the report survives an independent re-check (see certificate_issues)."""
    return not certificate_issues(inst, report)


def export_lp(inst: Instance) -> str:
    """Emit the linearized model in the textual CPLEX-LP dialect.

    Minimizes subset costs plus penalty terms; one covering row per
    element, one activation row ``y_i_j - x_i - x_j >= -1`` per conflict,
    all variables binary.  Names are 1-based: ``x<j>`` and ``y<i>_<j>``.
    """
    x_terms = [f"{inst.cost[j]} x{j + 1}" for j in range(inst.num_subsets)]
    y_terms = [f"{d} y{i + 1}_{j + 1}" for i, j, d in inst.conflicts]
    lines = ["Minimize", _wrap_sum("obj:", x_terms + y_terms)]
    lines.append("Subject To")
    for k in range(inst.num_elements):
        terms = [f"x{j + 1}" for j in inst.element_coverers[k]]
        lines.append(_wrap_sum(f" cover{k + 1}:", terms, suffix=">= 1"))
    for i, j, _ in inst.conflicts:
        lines.append(f" conf{i + 1}_{j + 1}: y{i + 1}_{j + 1} - x{i + 1} - x{j + 1} >= -1")
    lines.append("Binaries")
    names = [f"x{j + 1}" for j in range(inst.num_subsets)]
    names += [f"y{i + 1}_{j + 1}" for i, j, _ in inst.conflicts]
    for chunk in _chunks(names, 12):
        lines.append(" " + " ".join(chunk))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _wrap_sum(label: str, terms: list[str], suffix: str = "", per_line: int = 8) -> str:
    if not terms:
        terms = ["0 x1"]  # degenerate but syntactically valid
    joined_lines = []
    for idx, chunk in enumerate(_chunks(terms, per_line)):
        head = label if idx == 0 else " " * len(label)
        sep = " + " if idx > 0 else " "
        joined_lines.append(head + sep + " + ".join(chunk))
    if suffix:
        joined_lines[-1] += f" {suffix}"
    return "\n".join(joined_lines)


def _chunks(seq: list[str], size: int):
    for i in range(0, len(seq), size):
        yield seq[i : i + size]
