"""Domain model for set covering with pairwise conflict penalties.

An instance is a universe of ``m`` elements, ``n`` candidate subsets with
nonnegative integer costs, and a sparse list of conflicting subset pairs.
Selecting both endpoints of a conflict pair adds its penalty to the
objective.  All ids are 0-based internally; file formats convert once, in
:mod:`scpcs.ingest`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class ScpError(Exception):
    """Base class for errors raised by this package."""


class InvalidSolutionError(ScpError):
    """A solution references subset ids outside the instance."""


class InfeasibleInstanceError(ScpError):
    """No selection of subsets can cover every element."""


@dataclass(eq=True)
class Instance:
    """A covering instance with optional conflict penalties.

    ``cost``, ``members`` and ``element_coverers`` are indexed by 0-based
    subset / element ids.  ``conflicts`` holds ``(i, j, penalty)`` triples
    with ``i < j`` and ``penalty > 0``; pairs with zero penalty are simply
    absent.  Instances are treated as immutable after construction and may
    be shared freely between concurrent solver runs.
    """

    num_elements: int
    num_subsets: int
    cost: list[int]
    members: list[list[int]]
    element_coverers: list[list[int]]
    conflicts: list[tuple[int, int, int]]
    name: str = ""

    _pair_penalty: dict[tuple[int, int], int] | None = field(
        default=None, init=False, repr=False, compare=False
    )
    _adjacency: list[list[tuple[int, int]]] | None = field(
        default=None, init=False, repr=False, compare=False
    )

    @classmethod
    def build(
        cls,
        num_elements: int,
        cost: Iterable[int],
        members: Iterable[Iterable[int]],
        conflicts: Iterable[tuple[int, int, int]] = (),
        name: str = "",
    ) -> "Instance":
        """Construct an instance, deriving ``element_coverers`` by transposition."""
        cost = list(cost)
        members = [sorted(set(s)) for s in members]
        coverers: list[list[int]] = [[] for _ in range(num_elements)]
        for j, subset in enumerate(members):
            for k in subset:
                if not 0 <= k < num_elements:
                    raise ValueError(f"element id {k} out of range in subset {j}")
                coverers[k].append(j)
        return cls(
            num_elements=num_elements,
            num_subsets=len(members),
            cost=cost,
            members=members,
            element_coverers=coverers,
            conflicts=sorted(conflicts),
            name=name,
        )

    def pair_penalty(self) -> dict[tuple[int, int], int]:
        """Penalty lookup keyed by the ordered pair ``(i, j)``, built lazily."""
        if self._pair_penalty is None:
            self._pair_penalty = {(i, j): d for i, j, d in self.conflicts}
        return self._pair_penalty

    def conflict_adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-subset list of ``(partner, penalty)`` conflict entries, built lazily."""
        if self._adjacency is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_subsets)]
            for i, j, d in self.conflicts:
                adj[i].append((j, d))
                adj[j].append((i, d))
            self._adjacency = adj
        return self._adjacency


@dataclass(frozen=True)
class Solution:
    """A selection of subset ids (the support of the binary selection vector)."""

    selected: frozenset[int]

    @classmethod
    def of(cls, ids: Iterable[int]) -> "Solution":
        return cls(frozenset(ids))

    @property
    def ids(self) -> tuple[int, ...]:
        """Selected ids in ascending order."""
        return tuple(sorted(self.selected))

    def __contains__(self, j: int) -> bool:
        return j in self.selected

    def __len__(self) -> int:
        return len(self.selected)


@dataclass(frozen=True)
class ObjectiveBreakdown:
    cover_cost: int
    penalty_cost: int
    total: int


def validate_instance(inst: Instance) -> list[str]:
    """Return every invariant violation as a human-readable string.

    An empty list means the instance is valid.  Violations are data, not
    exceptions: callers decide which findings (e.g. uncoverable elements)
    are fatal for their purpose.
    """
    problems: list[str] = []
    if len(inst.cost) != inst.num_subsets:
        problems.append(
            f"cost list has {len(inst.cost)} entries for {inst.num_subsets} subsets"
        )
    if len(inst.members) != inst.num_subsets:
        problems.append(
            f"members list has {len(inst.members)} entries for {inst.num_subsets} subsets"
        )
    if len(inst.element_coverers) != inst.num_elements:
        problems.append(
            f"element_coverers has {len(inst.element_coverers)} entries for "
            f"{inst.num_elements} elements"
        )
    for j, c in enumerate(inst.cost):
        if c < 0:
            problems.append(f"negative cost {c} for subset {j}")

    for j, subset in enumerate(inst.members[: inst.num_subsets]):
        if list(subset) != sorted(set(subset)):
            problems.append(f"members of subset {j} not sorted and duplicate-free")
        for k in subset:
            if not 0 <= k < inst.num_elements:
                problems.append(f"subset {j} lists element {k} out of range")

    # Transpose cross-check, both directions.
    member_pairs = {
        (j, k)
        for j, subset in enumerate(inst.members[: inst.num_subsets])
        for k in subset
        if 0 <= k < inst.num_elements
    }
    coverer_pairs = set()
    for k, coverers in enumerate(inst.element_coverers[: inst.num_elements]):
        if list(coverers) != sorted(set(coverers)):
            problems.append(f"coverers of element {k} not sorted and duplicate-free")
        for j in coverers:
            if not 0 <= j < inst.num_subsets:
                problems.append(f"element {k} lists coverer {j} out of range")
            else:
                coverer_pairs.add((j, k))
    for j, k in sorted(member_pairs - coverer_pairs):
        problems.append(f"subset {j} contains element {k} but is missing from its coverers")
    for j, k in sorted(coverer_pairs - member_pairs):
        problems.append(f"element {k} lists coverer {j} but subset {j} lacks it")

    seen_pairs: set[tuple[int, int]] = set()
    for i, j, d in inst.conflicts:
        if not (0 <= i < inst.num_subsets and 0 <= j < inst.num_subsets):
            problems.append(f"conflict ({i}, {j}) references subset id out of range")
            continue
        if i >= j:
            problems.append(f"conflict pair not ordered i<j: ({i}, {j})")
        if d <= 0:
            problems.append(f"conflict ({i}, {j}) has non-positive penalty {d}")
        key = (min(i, j), max(i, j))
        if key in seen_pairs:
            problems.append(f"conflict pair ({i}, {j}) listed more than once")
        seen_pairs.add(key)

    for k in range(inst.num_elements):
        if k < len(inst.element_coverers) and not inst.element_coverers[k]:
            problems.append(f"uncoverable element {k}")
    return problems


def _check_ids(inst: Instance, sol: Solution) -> None:
    for j in sol.selected:
        if not 0 <= j < inst.num_subsets:
            raise InvalidSolutionError(
                f"solution selects subset {j}, instance has {inst.num_subsets}"
            )


def is_cover(inst: Instance, sol: Solution) -> bool:
    """True iff the selected subsets jointly cover every element."""
    _check_ids(inst, sol)
    covered: set[int] = set()
    for j in sol.selected:
        covered.update(inst.members[j])
    return len(covered) == inst.num_elements


def active_conflicts(inst: Instance, sol: Solution) -> list[tuple[int, int, int]]:
    """Conflict entries whose endpoints are both selected, ascending by (i, j)."""
    _check_ids(inst, sol)
    sel = sol.selected
    return sorted((i, j, d) for i, j, d in inst.conflicts if i in sel and j in sel)


def evaluate(inst: Instance, sol: Solution) -> ObjectiveBreakdown:
    """Objective value of any selection: subset costs plus active penalties.

    Defined on partial selections too (the exact solver evaluates
    non-covers); feasibility is :func:`is_cover`.  Arithmetic is arbitrary
    precision, so totals can never silently wrap.
    """
    _check_ids(inst, sol)
    cover_cost = sum(inst.cost[j] for j in sol.selected)
    penalty_cost = sum(d for _, _, d in active_conflicts(inst, sol))
    return ObjectiveBreakdown(
        cover_cost=cover_cost,
        penalty_cost=penalty_cost,
        total=cover_cost + penalty_cost,
    )
