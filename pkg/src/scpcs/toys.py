"""Small hand-built instances and seeded generators for tests and calibration."""

from __future__ import annotations

import random

from .core import Instance


def overlap_toy(set_cost: int = 1, penalty_scale: int = 10) -> Instance:
    """Six elements covered by six overlapping rectangle-like sets.

    Every set costs ``set_cost`` and each pair of sets sharing elements is
    penalised ``penalty_scale`` per shared element, an order of magnitude
    above the set costs.  Three of the sets ({0,3}, {1,5}, {2,4}) are
    pairwise disjoint and cover everything, so the optimum selects exactly
    those at total ``3 * set_cost`` with no penalty.
    """
    members = [
        [0, 3],  # tall left
        [0, 1, 2],  # wide top
        [3, 4],  # wide bottom
        [2, 5],  # tall right
        [1, 5],  # diagonal
        [2, 4],  # diagonal
    ]
    conflicts = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            shared = len(set(members[i]) & set(members[j]))
            if shared:
                conflicts.append((i, j, penalty_scale * shared))
    return Instance.build(
        num_elements=6,
        cost=[set_cost] * len(members),
        members=members,
        conflicts=conflicts,
        name="overlap-toy",
    )


def random_instance(
    rng: random.Random,
    num_elements: int,
    num_subsets: int,
    conflict_prob: float = 0.3,
    max_cost: int = 20,
    max_penalty: int = 15,
    name: str = "",
) -> Instance:
    """Coverable random instance: every element is patched into some subset."""
    members = []
    for _ in range(num_subsets):
        size = rng.randint(1, num_elements)
        members.append(set(rng.sample(range(num_elements), size)))
    for k in range(num_elements):
        if not any(k in s for s in members):
            members[rng.randrange(num_subsets)].add(k)
    conflicts = []
    for i in range(num_subsets):
        for j in range(i + 1, num_subsets):
            if rng.random() < conflict_prob:
                conflicts.append((i, j, rng.randint(1, max_penalty)))
    return Instance.build(
        num_elements=num_elements,
        cost=[rng.randint(1, max_cost) for _ in range(num_subsets)],
        members=[sorted(s) for s in members],
        conflicts=conflicts,
        name=name,
    )


def calibration_corpus(seed: int, count: int) -> list[Instance]:
    """The seeded corpus behind the oracle cross-checks and GRASP calibration.

    Subset counts are tilted toward the cheap end so the full 2^n sweep
    over hundreds of instances stays in CPU-minutes: 70% of instances draw
    n from [4,11], 25% from [12,15], 5% from [16,18].  Elements up to 30,
    conflict density varies from none to dense.
    """
    rng = random.Random(seed)
    buckets = [(4, 11)] * 14 + [(12, 15)] * 5 + [(16, 18)]
    out = []
    for i in range(count):
        lo, hi = buckets[rng.randrange(len(buckets))]
        n = rng.randint(lo, hi)
        m = rng.randint(2, 30)
        prob = rng.choice([0.0, 0.1, 0.3, 0.6])
        out.append(
            random_instance(
                rng, m, n, conflict_prob=prob, name=f"rand-{seed}-{i}"
            )
        )
    return out
