"""Forward Top Trading Cycles and two Pareto-optimality checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InstanceTooLarge
from .model import Allocation, PreferenceProfile

BRUTE_PO_CAP = 8


@dataclass(frozen=True)
class TtcTrace:
    """Cycles executed per round; each cycle is a tuple of (agent, room received)."""

    rounds: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]

    @property
    def only_self_cycles(self) -> bool:
        return all(len(c) == 1 for rnd in self.rounds for c in rnd)


def forward_ttc(profile: PreferenceProfile, endowment: Sequence[int]) -> tuple[Allocation, TtcTrace]:
    """Run TTC from ``endowment`` and return the outcome with its round-by-round cycles."""
    profile.check_size(endowment)
    return _ttc(profile.prefs, endowment, trace=True)


def ttc_outcome(profile: PreferenceProfile, endowment: Sequence[int]) -> Allocation:
    """Same as :func:`forward_ttc` without building the trace."""
    profile.check_size(endowment)
    return _ttc(profile.prefs, endowment, trace=False)[0]


def _ttc(prefs, endowment, trace):
    n = len(prefs)
    owner = [0] * n
    for agent, room in enumerate(endowment):
        owner[room] = agent
    cursor = [0] * n
    taken = [False] * n
    out = [-1] * n
    active = list(range(n))
    top = [0] * n
    rounds = []
    stamp = [0] * n
    pass_id = 0
    while active:
        for a in active:
            row = prefs[a]
            k = cursor[a]
            while taken[row[k]]:
                k += 1
            cursor[a] = k
            top[a] = row[k]
        cycles = []
        for s in active:
            if stamp[s] > pass_id:
                continue
            mark = pass_id + s + 1
            a = s
            path = []
            while stamp[a] <= pass_id:
                stamp[a] = mark
                path.append(a)
                a = owner[top[a]]
            # cycle only if the walk closed on itself in this same walk
            if stamp[a] == mark:
                cycles.append(path[path.index(a):])
        pass_id += n + 1
        for cycle in cycles:
            for a in cycle:
                room = top[a]
                out[a] = room
                taken[room] = True
        if trace:
            rounds.append(tuple(tuple((a, top[a]) for a in c) for c in cycles))
        active = [a for a in active if out[a] < 0]
    return Allocation.trusted(out), (TtcTrace(tuple(rounds)) if trace else None)


def is_po_fixedpoint(profile: PreferenceProfile, alloc: Sequence[int]) -> bool:
    """PO test: TTC started from ``alloc`` trades nothing."""
    return ttc_outcome(profile, alloc) == tuple(alloc)


def is_po_bruteforce(profile: PreferenceProfile, alloc: Sequence[int]) -> bool:
    """PO test by scanning all n! allocations for a Pareto improvement."""
    n = profile.n
    profile.check_size(alloc)
    if n > BRUTE_PO_CAP:
        raise InstanceTooLarge(f"n={n} exceeds the brute-force PO limit of {BRUTE_PO_CAP}")
    inv = profile.inverse_rank
    current = [inv[a][alloc[a]] for a in range(n)]
    for other in itertools.permutations(range(n)):
        strictly = False
        for a in range(n):
            r = inv[a][other[a]]
            if r > current[a]:
                break
            if r < current[a]:
                strictly = True
        else:
            if strictly:
                return False
    return True
