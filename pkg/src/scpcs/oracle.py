"""Exhaustive enumeration reference for tiny instances.

Deliberately dumb: walks every one of the 2^n selections through
:func:`core.is_cover` and :func:`core.evaluate`, sharing no logic with
the branch-and-bound beyond the core semantics.  Used to certify the
exact solver and to calibrate the heuristics.
"""

from __future__ import annotations

from .core import InfeasibleInstanceError, Instance, Solution, evaluate, is_cover

DEFAULT_MAX_SUBSETS = 20


def brute_force_optimum(
    inst: Instance, max_n: int = DEFAULT_MAX_SUBSETS
) -> tuple[int, Solution, int]:
    """Optimal total, lexicographically-least optimal selection, and optima count.

    Refuses instances with more than ``max_n`` subsets (the sweep is
    2^n evaluations); raises :class:`InfeasibleInstanceError` when no
    selection covers the universe.
    """
    n = inst.num_subsets
    if n > max_n:
        raise ValueError(
            f"refusing enumeration: {n} subsets exceeds the limit of {max_n}"
        )
    best_total: int | None = None
    best_ids: tuple[int, ...] | None = None
    optima = 0
    for mask in range(1 << n):
        ids = tuple(j for j in range(n) if mask >> j & 1)
        sol = Solution.of(ids)
        if not is_cover(inst, sol):
            continue
        total = evaluate(inst, sol).total
        if best_total is None or total < best_total:
            best_total, best_ids, optima = total, ids, 1
        elif total == best_total:
            optima += 1
            if ids < best_ids:
                best_ids = ids
    if best_total is None:
        raise InfeasibleInstanceError("no selection covers every element")
    return best_total, Solution.of(best_ids), optima
