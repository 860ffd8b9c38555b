"""Enumerate every Pareto-optimal house allocation by inverting Top Trading Cycles."""

from .enumerator import EnumStats, Frontier, brute_force_frontier, itea, verify_partition
from .errors import ParetoTTCError
from .instances import parse_profile, random_profile, serialize_frontier, serialize_profile
from .inverse import Preimage, devour, dressup, invttc
from .model import (
    Allocation,
    PreferenceProfile,
    Tag,
    TaggedState,
    rank_allocation,
    unrank_allocation,
    validate_profile,
)
from .selection import Criterion, score, select_best
from .ttc import TtcTrace, forward_ttc, is_po_bruteforce, is_po_fixedpoint

__all__ = [
    "Allocation",
    "Criterion",
    "EnumStats",
    "Frontier",
    "ParetoTTCError",
    "PreferenceProfile",
    "Preimage",
    "Tag",
    "TaggedState",
    "TtcTrace",
    "brute_force_frontier",
    "devour",
    "dressup",
    "forward_ttc",
    "invttc",
    "is_po_bruteforce",
    "is_po_fixedpoint",
    "itea",
    "parse_profile",
    "random_profile",
    "rank_allocation",
    "score",
    "select_best",
    "serialize_frontier",
    "serialize_profile",
    "unrank_allocation",
    "validate_profile",
    "verify_partition",
]
