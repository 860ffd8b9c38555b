"""Inverse TTC: recover every endowment that TTC maps to a given PO allocation.

The search walks tagged states breadth first. A tag marks a room as unmarked
(not yet active), circle (its owner's top room once the squared rooms are
removed, so it may be traded) or square (fixed). From each state the circled
rooms are permuted among their holders, rooms that moved become squares, and
each circle may also be squared in place. States whose tags are all squares
are the endowments we want.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import AbstractSet, Sequence

from .errors import InconsistentFixedSet, InvalidTagState, NotParetoOptimal, StuckState
from .model import Allocation, PreferenceProfile, Tag, TaggedState
from .ttc import is_po_fixedpoint


@dataclass(frozen=True)
class Preimage:
    """All endowments whose TTC outcome is ``source``.

    ``members`` holds plain room tuples, which compare equal to :class:`Allocation`.
    """

    source: Allocation
    members: frozenset
    states_visited: int

    def __len__(self):
        return len(self.members)


def dressup(
    alloc: Sequence[int],
    tags: Sequence[int],
    profile: PreferenceProfile,
    fixed: AbstractSet[int],
) -> tuple[Tag, ...]:
    """Re-derive tags: squares stay, any other room is circled iff it is its
    holder's favourite among the rooms not in ``fixed``."""
    squared = {r for r, t in zip(alloc, tags) if t == Tag.SQUARE}
    if squared != set(fixed):
        raise InconsistentFixedSet(
            f"fixed rooms {sorted(fixed)} differ from squared rooms {sorted(squared)}"
        )
    out = []
    for agent, (room, tag) in enumerate(zip(alloc, tags)):
        if tag == Tag.SQUARE:
            out.append(Tag.SQUARE)
            continue
        favourite = next(r for r in profile.prefs[agent] if r not in fixed)
        out.append(Tag.CIRCLE if favourite == room else Tag.UNMARKED)
    return tuple(out)


def initial_state(profile: PreferenceProfile, po: Sequence[int]) -> TaggedState:
    """All rooms unmarked, then one ``dressup`` pass with nothing fixed."""
    alloc = Allocation(po)
    profile.check_size(alloc)
    tags = dressup(alloc, [Tag.UNMARKED] * len(alloc), profile, frozenset())
    return TaggedState(alloc, tags)


def successors(state: TaggedState, profile: PreferenceProfile) -> list[TaggedState]:
    """One BFS expansion, written for clarity. :func:`devour` inlines the same rules."""
    circles = state.circles()
    rooms = [state.alloc[i] for i in circles]
    out = []
    for perm in itertools.permutations(rooms):
        assign = list(state.alloc)
        tags = list(state.tags)
        for i, room in zip(circles, perm):
            if room != assign[i]:
                assign[i] = room
                tags[i] = Tag.SQUARE
        fixed = {r for r, t in zip(assign, tags) if t == Tag.SQUARE}
        out.append(TaggedState(Allocation.trusted(assign), dressup(assign, tags, profile, fixed)))
    for i in circles:
        tags = list(state.tags)
        tags[i] = Tag.SQUARE
        fixed = {r for r, t in zip(state.alloc, tags) if t == Tag.SQUARE}
        out.append(TaggedState(state.alloc, dressup(state.alloc, tags, profile, fixed)))
    return out


@lru_cache(maxsize=None)
def _moves(c: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    # every non-identity permutation of c circles, as (slot, source slot) pairs that move
    return tuple(
        tuple((k, j) for k, j in enumerate(perm) if k != j)
        for perm in itertools.permutations(range(c))
    )[1:]


def _search(profile: PreferenceProfile, assign0: tuple, sq0: int):
    """BFS core. Returns (terminal allocations, distinct states seen, states expanded).

    A state is stored as (assign, square position mask, fixed room mask). The
    tags are a function of assign and the square mask (``dressup`` decides the
    rest), so (assign, square mask) is a faithful visited-set key.
    """
    n = len(assign0)
    full = (1 << n) - 1
    fixed0 = 0
    for i in range(n):
        if sq0 >> i & 1:
            fixed0 |= 1 << assign0[i]
    if sq0 == full:
        return [assign0], 1, 0

    # Non-square positions always still hold their start room, so the set of
    # rooms that must be fixed before position i is circled is constant.
    better = profile.better_than
    need = [better[i][assign0[i]] for i in range(n)]
    positions = range(n)
    circle_cache = {}

    def circles_of(sq, fixed):
        cs = [i for i in positions if not sq >> i & 1 and not need[i] & ~fixed]
        if not cs:
            raise StuckState(f"non-terminal state with squares {sq:b} has no circles")
        circle_cache[sq << n | fixed] = cs
        return cs

    seen = {(assign0, sq0)}
    queue = deque([(assign0, sq0, fixed0)])
    pop = queue.popleft
    push = queue.append
    mark = seen.add
    result = []
    found = result.append
    expanded = 0
    get = circle_cache.get
    while queue:
        assign, sq, fixed = pop()
        circles = get(sq << n | fixed) or circles_of(sq, fixed)
        # A single circle has one successor (squaring it), so follow such
        # chains without going through the queue.
        while len(circles) == 1:
            expanded += 1
            i = circles[0]
            sq |= 1 << i
            key = (assign, sq)
            if key in seen:
                break
            mark(key)
            if sq == full:
                found(assign)
                break
            fixed |= 1 << assign[i]
            circles = get(sq << n | fixed) or circles_of(sq, fixed)
        else:
            expanded += 1
            for i in circles:
                nsq = sq | 1 << i
                key = (assign, nsq)
                if key not in seen:
                    mark(key)
                    if nsq == full:
                        found(assign)
                    else:
                        push((assign, nsq, fixed | 1 << assign[i]))
            rooms = [assign[i] for i in circles]
            for moves in _moves(len(circles)):
                new = list(assign)
                nsq = sq
                nfixed = fixed
                for k, j in moves:
                    i = circles[k]
                    r = rooms[j]
                    new[i] = r
                    nsq |= 1 << i
                    nfixed |= 1 << r
                new = tuple(new)
                key = (new, nsq)
                if key not in seen:
                    mark(key)
                    if nsq == full:
                        found(new)
                    else:
                        push((new, nsq, nfixed))
    return result, len(seen), expanded


def _square_mask(state: TaggedState) -> int:
    return sum(1 << i for i, t in enumerate(state.tags) if t is Tag.SQUARE)


def devour(start: TaggedState, profile: PreferenceProfile) -> set[Allocation]:
    """Every all-square allocation reachable from ``start``."""
    profile.check_size(start.alloc)
    if dressup(start.alloc, start.tags, profile, start.fixed_rooms()) != start.tags:
        raise InvalidTagState("start tags are not the dressup tags of the start allocation")
    members, _, _ = _search(profile, tuple(start.alloc), _square_mask(start))
    return {Allocation.trusted(m) for m in members}


def invttc(profile: PreferenceProfile, po: Sequence[int], *, check: bool = True) -> Preimage:
    """Preimage of a Pareto-optimal allocation under TTC.

    ``check=False`` skips the PO precondition; the enumerator uses it for
    allocations it just obtained from TTC.
    """
    alloc = Allocation(po)
    profile.check_size(alloc)
    if check and not is_po_fixedpoint(profile, alloc):
        raise NotParetoOptimal(f"allocation {alloc.one_based()} is not Pareto optimal (one-based)")
    members, visited, _ = _search(profile, tuple(alloc), 0)
    return Preimage(alloc, frozenset(members), visited)


def preimage_rows(profile: PreferenceProfile, po: tuple) -> tuple[list[tuple[int, ...]], int]:
    """Preimage of a known PO allocation as a list of tuples, plus the visited-state count."""
    members, visited, _ = _search(profile, tuple(po), 0)
    return members, visited
