"""Core value types: preference profiles, allocations, tags, and permutation ranks.

Indices are zero-based everywhere inside the package. Files and the CLI use
one-based room numbers; conversion happens in :mod:`paretottc.instances`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateEntry, InstanceTooLarge, OutOfRange, SizeMismatch, WrongLength

#: Largest n for which anything of size n! (scan table, brute force) is built.
SCAN_CAP = 12

FACTORIALS = tuple(math.factorial(i) for i in range(SCAN_CAP + 1))


def check_scan_cap(n: int, cap: int = SCAN_CAP) -> None:
    if n > cap:
        raise InstanceTooLarge(
            f"n={n} exceeds the limit of {cap}: this operation materializes all {n}! allocations"
        )


class Allocation(tuple):
    """Agent-indexed room assignment; ``alloc[i]`` is the room of agent ``i``.

    A tuple subclass, so it compares and hashes like the plain tuple of rooms.
    """

    __slots__ = ()

    def __new__(cls, assign: Iterable[int]):
        rooms = tuple(int(r) for r in assign)
        n = len(rooms)
        seen = [False] * n
        for r in rooms:
            if not 0 <= r < n:
                raise OutOfRange(f"room {r} outside [0, {n})")
            if seen[r]:
                raise DuplicateEntry(f"room {r} assigned twice")
            seen[r] = True
        return tuple.__new__(cls, rooms)

    @classmethod
    def trusted(cls, assign: Iterable[int]) -> "Allocation":
        """Wrap a sequence already known to be a permutation."""
        return tuple.__new__(cls, assign)

    @classmethod
    def identity(cls, n: int) -> "Allocation":
        return tuple.__new__(cls, range(n))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def assign(self) -> tuple[int, ...]:
        return tuple(self)

    def owners(self) -> tuple[int, ...]:
        """Room-indexed view: ``owners()[r]`` is the agent holding room ``r``."""
        out = [0] * len(self)
        for agent, room in enumerate(self):
            out[room] = agent
        return tuple(out)

    def one_based(self) -> list[int]:
        return [r + 1 for r in self]

    def __repr__(self) -> str:
        return f"Allocation({list(self)})"


@dataclass(frozen=True)
class PreferenceProfile:
    """Strict, complete rankings of n rooms by n agents (most preferred first)."""

    prefs: tuple[tuple[int, ...], ...]
    inverse_rank: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    # better_than[a][r]: bitmask of rooms agent a strictly prefers to r
    better_than: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        prefs = tuple(tuple(int(r) for r in row) for row in self.prefs)
        n = len(prefs)
        for a, row in enumerate(prefs):
            if len(row) != n:
                raise WrongLength(f"agent {a} ranks {len(row)} rooms, expected {n}")
            seen = [False] * n
            for r in row:
                if not 0 <= r < n:
                    raise OutOfRange(f"agent {a} ranks room {r} outside [0, {n})")
                if seen[r]:
                    raise DuplicateEntry(f"agent {a} ranks room {r} twice")
                seen[r] = True
        inv = []
        better = []
        for row in prefs:
            pos = [0] * n
            masks = [0] * n
            acc = 0
            for k, r in enumerate(row):
                pos[r] = k
                masks[r] = acc
                acc |= 1 << r
            inv.append(tuple(pos))
            better.append(tuple(masks))
        object.__setattr__(self, "prefs", prefs)
        object.__setattr__(self, "inverse_rank", tuple(inv))
        object.__setattr__(self, "better_than", tuple(better))

    @property
    def n(self) -> int:
        return len(self.prefs)

    def prefers(self, agent: int, room_a: int, room_b: int) -> bool:
        """True if ``agent`` strictly prefers ``room_a`` to ``room_b``."""
        rank = self.inverse_rank[agent]
        return rank[room_a] < rank[room_b]

    def check_size(self, alloc: Sequence[int]) -> None:
        if len(alloc) != self.n:
            raise SizeMismatch(f"allocation has {len(alloc)} agents, profile has {self.n}")


def validate_profile(raw: Sequence[Sequence[int]]) -> PreferenceProfile:
    """Build a profile from zero-based rankings, raising a ProfileError subclass on bad input."""
    return PreferenceProfile(tuple(tuple(row) for row in raw))


def rank_allocation(alloc: Sequence[int]) -> int:
    """Lexicographic rank of a permutation via its Lehmer code."""
    n = len(alloc)
    fact = FACTORIALS if n <= SCAN_CAP else [math.factorial(i) for i in range(n)]
    rank = 0
    used = 0
    for i, x in enumerate(alloc):
        smaller_unused = x - (used & ((1 << x) - 1)).bit_count()
        rank += smaller_unused * fact[n - 1 - i]
        used |= 1 << x
    return rank


def unrank_allocation(rank: int, n: int) -> Allocation:
    if not 0 <= rank < math.factorial(n):
        raise OutOfRange(f"rank {rank} outside [0, {n}!)")
    fact = FACTORIALS if n <= SCAN_CAP else [math.factorial(i) for i in range(n)]
    items = list(range(n))
    out = []
    for i in range(n - 1, -1, -1):
        digit, rank = divmod(rank, fact[i])
        out.append(items.pop(digit))
    return Allocation.trusted(out)


def rank_many(allocs: np.ndarray) -> np.ndarray:
    """Vectorised ``rank_allocation`` over the rows of a (k, n) integer array."""
    allocs = np.asarray(allocs, dtype=np.int64)
    k, n = allocs.shape
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    # earlier[m, i] = #{j < i : allocs[m, j] < allocs[m, i]}
    below = allocs[:, None, :] < allocs[:, :, None]
    earlier = (below & np.tri(n, n, -1, dtype=bool)).sum(axis=2)
    weights = np.array([math.factorial(n - 1 - i) for i in range(n)], dtype=np.int64)
    return (allocs - earlier) @ weights


class Tag(enum.IntEnum):
    UNMARKED = -1
    CIRCLE = 0
    SQUARE = 1


@dataclass(frozen=True)
class TaggedState:
    """An allocation plus one tag per agent position (``tags[i]`` tags room ``alloc[i]``)."""

    alloc: Allocation
    tags: tuple[Tag, ...]

    def __post_init__(self):
        if len(self.tags) != len(self.alloc):
            raise SizeMismatch("tags and allocation differ in length")
        object.__setattr__(self, "tags", tuple(Tag(t) for t in self.tags))

    @property
    def terminal(self) -> bool:
        return all(t is Tag.SQUARE for t in self.tags)

    def fixed_rooms(self) -> frozenset[int]:
        return frozenset(r for r, t in zip(self.alloc, self.tags) if t is Tag.SQUARE)

    def circles(self) -> list[int]:
        return [i for i, t in enumerate(self.tags) if t is Tag.CIRCLE]

    def key(self) -> bytes:
        """Canonical byte encoding; equal states have equal keys."""
        return bytes(self.alloc) + bytes(t + 1 for t in self.tags)
