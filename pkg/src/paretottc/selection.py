"""Pick one allocation from an enumerated frontier by a welfare or envy criterion.

All scores are "lower is better" and use one-based ranks (top choice = 1).
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

from .errors import EmptyFrontier
from .model import PreferenceProfile


class Criterion(enum.Enum):
    UTILITARIAN = "utilitarian"
    EGALITARIAN = "egalitarian"
    ENVY_PAIRS = "envy-pairs"
    ENVIOUS_AGENTS = "envious-agents"

    @classmethod
    def names(cls) -> list[str]:
        return [c.value for c in cls]


def _envy_matrix(profile: PreferenceProfile, alloc: Sequence[int]):
    inv = profile.inverse_rank
    n = len(alloc)
    return [[inv[i][alloc[j]] < inv[i][alloc[i]] for j in range(n)] for i in range(n)]


def score(profile: PreferenceProfile, alloc: Sequence[int], criterion: Criterion) -> int:
    profile.check_size(alloc)
    criterion = Criterion(criterion)
    inv = profile.inverse_rank
    if criterion is Criterion.UTILITARIAN:
        return sum(1 + inv[i][r] for i, r in enumerate(alloc))
    if criterion is Criterion.EGALITARIAN:
        return max(1 + inv[i][r] for i, r in enumerate(alloc))
    envy = _envy_matrix(profile, alloc)
    if criterion is Criterion.ENVY_PAIRS:
        return sum(sum(row) for row in envy)
    return sum(any(row) for row in envy)


def select_best(profile: PreferenceProfile, frontier: Iterable[Sequence[int]], criterion: Criterion):
    """Minimum-score member; ties go to the lexicographically smallest allocation.

    ``frontier`` may be a :class:`~paretottc.enumerator.Frontier` or any
    iterable of allocations.
    """
    members = getattr(frontier, "members", frontier)
    best = None
    best_key = None
    for alloc in members:
        key = (score(profile, alloc, criterion), tuple(alloc))
        if best_key is None or key < best_key:
            best, best_key = alloc, key
    if best is None:
        raise EmptyFrontier("cannot select from an empty frontier")
    return best
