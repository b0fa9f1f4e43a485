"""Greedy construction, local search and GRASP upper bounds.

Construction scores candidates by (cost + marginal conflict penalty) per
newly covered element; the randomized variant samples uniformly from the
candidates within ``rcl_alpha`` of the best score.  Local search applies
best-improvement drop and 1-1 swap moves.  All score comparisons use
exact rationals, so identical seeds reproduce identical runs on any
platform.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .core import InfeasibleInstanceError, Instance, Solution, evaluate, is_cover

_SEED_STRIDE = 1_000_003  # distinct per-iteration rng streams


@dataclass(frozen=True)
class GraspConfig:
    iterations: int
    rcl_alpha: float = 0.5  # calibrated; see scripts/calibrate_grasp.py
    seed: int = 0
    time_limit: float | None = None

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 0.0 <= self.rcl_alpha <= 1.0:
            raise ValueError("rcl_alpha must lie in [0, 1]")


def _marginal_penalty(inst: Instance, j: int, selected: set[int]) -> int:
    pen = sum(d for p, d in inst.conflict_adjacency()[j] if p in selected)
    if __debug__:
        rescan = sum(
            d
            for a, b, d in inst.conflicts
            if (a == j and b in selected) or (b == j and a in selected)
        )
        assert pen == rescan, "conflict adjacency out of sync with conflict list"
    return pen


def greedy_construct(
    inst: Instance,
    rng: random.Random | None = None,
    rcl_alpha: float = 0.0,
) -> Solution:
    """Build a cover by repeated best-ratio insertion, then drop redundant sets.

    Without an rng this is fully deterministic (ties to the lowest id);
    with one, each step picks uniformly among the candidates whose score
    is within ``rcl_alpha`` of the best-to-worst range.
    """
    for k in range(inst.num_elements):
        if not inst.element_coverers[k]:
            raise InfeasibleInstanceError(f"element {k} has no coverer")
    alpha = Fraction(str(rcl_alpha))

    selected: set[int] = set()
    uncovered = set(range(inst.num_elements))
    while uncovered:
        scores: list[tuple[Fraction, int]] = []
        for j in range(inst.num_subsets):
            if j in selected:
                continue
            fresh = len(uncovered.intersection(inst.members[j]))
            if fresh == 0:
                continue
            score = Fraction(inst.cost[j] + _marginal_penalty(inst, j, selected), fresh)
            scores.append((score, j))
        scores.sort()
        if rng is None or alpha == 0:
            # alpha 0 degenerates to the deterministic greedy, ties included
            pick = scores[0][1]
        else:
            lo, hi = scores[0][0], scores[-1][0]
            cutoff = lo + alpha * (hi - lo)
            rcl = [j for s, j in scores if s <= cutoff]
            pick = rcl[rng.randrange(len(rcl))]
        selected.add(pick)
        uncovered.difference_update(inst.members[pick])

    _drop_redundant(inst, selected)
    sol = Solution.of(selected)
    assert is_cover(inst, sol)
    return sol


def _cover_counts(inst: Instance, selected: set[int]) -> list[int]:
    counts = [0] * inst.num_elements
    for j in selected:
        for k in inst.members[j]:
            counts[k] += 1
    return counts


def _drop_redundant(inst: Instance, selected: set[int]) -> None:
    """Greedily remove sets whose elements stay covered, biggest saving first.

    Removal can only shrink both cost and penalties, so the total never
    increases; zero-saving removals still simplify the cover.
    """
    counts = _cover_counts(inst, selected)
    while True:
        candidates = []
        for j in sorted(selected):
            if all(counts[k] >= 2 for k in inst.members[j]):
                saving = inst.cost[j] + _marginal_penalty(inst, j, selected - {j})
                candidates.append((-saving, j))
        if not candidates:
            return
        _, victim = min(candidates)
        selected.remove(victim)
        for k in inst.members[victim]:
            counts[k] -= 1


def local_search(inst: Instance, sol: Solution) -> Solution:
    """Best-improvement descent over drop and 1-1 swap moves.

    Swaps are restricted to entering sets that cover everything the
    leaving set uniquely covers, keeping feasibility checks linear in the
    set size.  Each accepted move strictly lowers the integer total, so
    the descent terminates; the result covers and never costs more than
    the input.
    """
    if not is_cover(inst, sol):
        raise ValueError("local_search requires a cover")
    selected = set(sol.selected)

    while True:
        counts = _cover_counts(inst, selected)
        # Moves ranked by (delta, leave, enter); enter -1 encodes a drop so
        # drops beat swaps on ties.  Only strictly improving moves apply.
        best: tuple[int, int, int] | None = None

        for j in sorted(selected):
            unique = [k for k in inst.members[j] if counts[k] == 1]
            leave_saving = inst.cost[j] + _marginal_penalty(inst, j, selected - {j})
            if not unique:
                move = (-leave_saving, j, -1)
                if best is None or move < best:
                    best = move
                continue
            need = set(unique)
            for enter in range(inst.num_subsets):
                if enter in selected or not need.issubset(inst.members[enter]):
                    continue
                enter_cost = inst.cost[enter] + _marginal_penalty(
                    inst, enter, selected - {j}
                )
                move = (enter_cost - leave_saving, j, enter)
                if best is None or move < best:
                    best = move

        if best is None or best[0] >= 0:
            break
        _, leave, enter = best
        selected.remove(leave)
        if enter >= 0:
            selected.add(enter)

    result = Solution.of(selected)
    assert is_cover(inst, result)
    return result


def grasp(inst: Instance, cfg: GraspConfig) -> tuple[Solution, int]:
    """Repeated randomized construction + local search; returns the best cover.

    The rng stream is derived per iteration from ``cfg.seed``, so a fixed
    seed reproduces the run exactly and a parallel executor could replay
    individual iterations.  Stops early once ``cfg.time_limit`` elapses.
    Returns the best solution and the 1-based iteration that found it
    (first finder wins ties).
    """
    best: Solution | None = None
    best_total: int | None = None
    found_at = 0
    start = time.monotonic()
    for it in range(1, cfg.iterations + 1):
        if cfg.time_limit is not None and it > 1 and time.monotonic() - start >= cfg.time_limit:
            break
        rng = random.Random(cfg.seed * _SEED_STRIDE + it)
        sol = greedy_construct(inst, rng=rng, rcl_alpha=cfg.rcl_alpha)
        sol = local_search(inst, sol)
        total = evaluate(inst, sol).total
        if best_total is None or total < best_total:
            best, best_total, found_at = sol, total, it
    assert best is not None
    return best, found_at
