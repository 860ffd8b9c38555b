"""Pareto frontier enumeration: inverse-TTC driver, brute-force baseline, partition check."""

from __future__ import annotations

import itertools
import math
import re
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import MissingClasses
from .inverse import Preimage, preimage_rows
from .model import Allocation, PreferenceProfile, check_scan_cap, rank_allocation, rank_many, unrank_allocation
from .ttc import _ttc

_NONZERO = re.compile(rb"[^\x00]")
# below this many ranks the numpy call overhead outweighs the loop
_NUMPY_MIN_ROWS = 48


@dataclass
class EnumStats:
    ttc_calls: int = 0
    states_visited: int = 0
    allocations_scanned: int = 0
    wall_time: float = 0.0  # seconds


@dataclass
class Frontier:
    n: int
    members: list[Allocation]
    classes: Optional[list[Preimage]] = None
    stats: EnumStats = field(default_factory=EnumStats)
    # class sizes known without the member lists (e.g. read back from a file)
    sizes: Optional[list[int]] = None

    def __len__(self):
        return len(self.members)

    def class_sizes(self) -> Optional[list[int]]:
        if self.classes is not None:
            return [len(c) for c in self.classes]
        return self.sizes


class ScanTable:
    """One bit per allocation rank, all set initially; ``pop_lowest`` picks deterministically."""

    def __init__(self, n: int):
        check_scan_cap(n)
        self.size = math.factorial(n)
        nbytes = (self.size + 7) // 8
        self._buf = bytearray(b"\xff") * nbytes
        tail = self.size % 8
        if tail:
            self._buf[-1] = (1 << tail) - 1
        self._bits = np.frombuffer(self._buf, dtype=np.uint8)
        self._cursor = 0
        self.remaining = self.size

    def __contains__(self, rank: int) -> bool:
        return bool(self._buf[rank >> 3] >> (rank & 7) & 1)

    def lowest(self) -> Optional[int]:
        m = _NONZERO.search(self._buf, self._cursor)
        if m is None:
            return None
        self._cursor = m.start()
        byte = self._buf[self._cursor]
        return self._cursor * 8 + ((byte & -byte).bit_length() - 1)

    def discard_each(self, allocs) -> int:
        buf = self._buf
        was_set = 0
        for a in allocs:
            r = rank_allocation(a)
            byte = buf[r >> 3]
            bit = 1 << (r & 7)
            if byte & bit:
                was_set += 1
                buf[r >> 3] = byte & ~bit
        self.remaining -= was_set
        return was_set

    def discard_many(self, ranks: np.ndarray) -> int:
        """Clear the given ranks; returns how many were set before."""
        ranks = np.asarray(ranks, dtype=np.int64)
        idx = ranks >> 3
        masks = (np.uint8(1) << (ranks & 7).astype(np.uint8)).astype(np.uint8)
        was_set = int(np.count_nonzero(self._bits[idx] & masks))
        np.bitwise_and.at(self._bits, idx, ~masks)
        self.remaining -= was_set
        return was_set


def _as_array(rows, n):
    return np.fromiter(itertools.chain.from_iterable(rows), dtype=np.int64, count=len(rows) * n).reshape(
        len(rows), n
    )


def itea(profile: PreferenceProfile, *, classes: bool = True) -> Frontier:
    """Enumerate the Pareto frontier with one TTC call per PO allocation.

    Repeatedly take the lowest-ranked endowment still in the scan table, run
    TTC on it, recover that outcome's whole preimage, and clear it from the table.
    """
    n = profile.n
    check_scan_cap(n)
    start = time.perf_counter()
    stats = EnumStats()
    scan = ScanTable(n)
    prefs = profile.prefs
    found = {}
    while True:
        pick = scan.lowest()
        if pick is None:
            break
        outcome, _ = _ttc(prefs, unrank_allocation(pick, n), False)
        stats.ttc_calls += 1
        if outcome in found:
            raise RuntimeError(f"TTC outcome {outcome} found twice; its class was not fully removed")
        rows, visited = preimage_rows(profile, outcome)
        stats.states_visited += visited
        if len(rows) < _NUMPY_MIN_ROWS:
            stats.allocations_scanned += scan.discard_each(rows)
        else:
            stats.allocations_scanned += scan.discard_many(rank_many(_as_array(rows, n)))
        if pick in scan:
            raise RuntimeError(f"endowment of rank {pick} missing from the preimage of its own outcome")
        found[outcome] = (
            Preimage(outcome, frozenset(rows), visited) if classes else None
        )
    members = sorted(found)
    stats.wall_time = time.perf_counter() - start
    return Frontier(n, members, [found[m] for m in members] if classes else None, stats)


def brute_force_frontier(profile: PreferenceProfile, *, classes: bool = True) -> Frontier:
    """Run TTC from every one of the n! endowments and group by outcome."""
    n = profile.n
    check_scan_cap(n)
    start = time.perf_counter()
    stats = EnumStats()
    prefs = profile.prefs
    groups = {}
    for endowment in itertools.permutations(range(n)):
        outcome, _ = _ttc(prefs, endowment, False)
        bucket = groups.get(outcome)
        if bucket is None:
            bucket = groups[outcome] = []
        if classes:
            bucket.append(endowment)
    stats.ttc_calls = stats.allocations_scanned = math.factorial(n)
    members = sorted(groups)
    stats.wall_time = time.perf_counter() - start
    class_list = None
    if classes:
        class_list = [
            Preimage(m, frozenset(groups[m]), 0) for m in members
        ]
    return Frontier(n, members, class_list, stats)


def verify_partition(frontier: Frontier, n: int) -> bool:
    """True iff the classes are pairwise disjoint and together cover all n! allocations."""
    if frontier.classes is None:
        raise MissingClasses("frontier was built without classes")
    total = sum(len(c) for c in frontier.classes)
    if total != math.factorial(n):
        return False
    union = set()
    for c in frontier.classes:
        union.update(c.members)
    return len(union) == total
