"""Random instances and the on-disk formats for profiles and frontiers.

Files always use one-based room numbers.

Plain profile text (``.prefs``)::

    # seed 42          <- optional
    5
    4 3 2 1 5
    ...

Structured profile (``.json``)::

    {"n": 5, "preferences": [[4, 3, 2, 1, 5], ...], "seed": 42}

Random profiles come from SplitMix64 so that any implementation can reproduce
them bit for bit:

* ``mix64(z)``: ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all arithmetic mod 2**64).
* A generator with state ``s`` returns ``mix64(s += 0x9E3779B97F4A7C15)``.
* Agent ``a`` of a profile with seed ``S`` uses a generator whose initial state
  is ``derive_seed(S, a)``, where ``derive_seed(p0, p1, ...)`` starts at
  ``h = 0`` and folds ``h = mix64(((h ^ p) + 0x9E3779B97F4A7C15) mod 2**64)``.
* ``below(b)`` draws ``x`` until ``x >= 2**64 mod b`` and returns ``x mod b``.
* The ranking is a Fisher-Yates shuffle of ``[0, ..., n-1]``: for ``i`` from
  ``n-1`` down to ``1``, swap positions ``i`` and ``below(i + 1)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .enumerator import EnumStats, Frontier
from .errors import ParseError
from .inverse import Preimage
from .model import Allocation, PreferenceProfile, validate_profile

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    h = 0
    for p in parts:
        h = mix64(((h ^ (p & MASK64)) + GOLDEN) & MASK64)
    return h


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        threshold = (1 << 64) % bound
        while True:
            x = self.next()
            if x >= threshold:
                return x % bound

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def random_profile(n: int, seed: int) -> PreferenceProfile:
    """Independent uniform rankings, one SplitMix64 stream per agent."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return PreferenceProfile(tuple(tuple(SplitMix64(derive_seed(seed, a)).permutation(n)) for a in range(n)))


@dataclass(frozen=True)
class InstanceFile:
    profile: PreferenceProfile
    seed: Optional[int] = None


def _detect(text: str) -> str:
    return "structured" if text.lstrip().startswith("{") else "text"


def parse_instance(text: str, fmt: Optional[str] = None) -> InstanceFile:
    fmt = fmt or _detect(text)
    if fmt == "structured":
        return _parse_profile_json(text)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return _parse_profile_text(text)


def parse_profile(text: str, fmt: Optional[str] = None) -> PreferenceProfile:
    return parse_instance(text, fmt).profile


def _int_token(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line, col) from None


def _parse_profile_text(text: str) -> InstanceFile:
    seed = None
    rows = []  # (line number, [(column, token)])
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            words = stripped[1:].split()
            if len(words) == 2 and words[0] == "seed":
                seed = _int_token(words[1], lineno, line.index(words[1]) + 1)
            continue
        tokens = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            tokens.append((col + 1, tok))
            col += len(tok)
        rows.append((lineno, tokens))
    if not rows:
        raise ParseError("empty profile: expected n on the first line", 1, 1)
    first_line, first = rows[0]
    if len(first) != 1:
        raise ParseError("first line must hold only n", first_line, first[1][0] if len(first) > 1 else 1)
    n = _int_token(first[0][1], first_line, first[0][0])
    if n < 1:
        raise ParseError("n must be at least 1", first_line, first[0][0])
    body = rows[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] + 1 if body else first_line + 1)
        raise ParseError(f"expected {n} preference rows, found {len(body)}", where)
    prefs = []
    for lineno, tokens in body:
        prefs.append([_int_token(tok, lineno, col) - 1 for col, tok in tokens])
    return InstanceFile(validate_profile(prefs), seed)


def _parse_profile_json(text: str) -> InstanceFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "preferences" not in data:
        raise ParseError("structured profile needs a 'preferences' field")
    rows = data["preferences"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("'preferences' must be a list of lists")
    try:
        prefs = [[int(x) - 1 for x in row] for row in rows]
    except (TypeError, ValueError):
        raise ParseError("room ids must be integers") from None
    if "n" in data and data["n"] != len(prefs):
        raise ParseError(f"'n' is {data['n']} but {len(prefs)} preference rows were given")
    seed = data.get("seed")
    return InstanceFile(validate_profile(prefs), None if seed is None else int(seed))


def serialize_profile(profile: PreferenceProfile, fmt: str = "text", seed: Optional[int] = None) -> str:
    rows = [[r + 1 for r in row] for row in profile.prefs]
    if fmt == "structured":
        data = {"n": profile.n, "preferences": rows}
        if seed is not None:
            data["seed"] = seed
        return json.dumps(data) + "\n"
    lines = [] if seed is None else [f"# seed {seed}"]
    lines.append(str(profile.n))
    lines.extend(" ".join(map(str, row)) for row in rows)
    return "\n".join(lines) + "\n"


def format_allocation(alloc) -> str:
    return " ".join(str(r + 1) for r in alloc)


def parse_allocation(text: str, n: Optional[int] = None) -> Allocation:
    """Read a one-based allocation such as ``"4 3 2 1 5"``, ``"4,3,2,1,5"`` or ``"[4,3,2,1,5]"``."""
    cleaned = text.strip().strip("[]()").replace(",", " ")
    tokens = cleaned.split()
    if not tokens:
        raise ParseError("empty allocation")
    rooms = []
    for k, tok in enumerate(tokens, start=1):
        try:
            rooms.append(int(tok) - 1)
        except ValueError:
            raise ParseError(f"allocation entry {k} is not an integer: {tok!r}") from None
    if n is not None and len(rooms) != n:
        raise ParseError(f"allocation has {len(rooms)} entries, expected {n}")
    return Allocation(rooms)


_STAT_FIELDS = ("ttc_calls", "states_visited", "allocations_scanned")


def serialize_frontier(frontier: Frontier, with_classes: bool = False, fmt: str = "text") -> str:
    """Deterministic listing of a frontier. Wall time is left out so reruns are byte-identical."""
    sizes = frontier.class_sizes()
    with_classes = with_classes and frontier.classes is not None
    stats = {k: getattr(frontier.stats, k) for k in _STAT_FIELDS}
    if fmt == "structured":
        data = {
            "n": frontier.n,
            "size": len(frontier.members),
            "members": [[r + 1 for r in m] for m in frontier.members],
        }
        if sizes is not None:
            data["class_sizes"] = sizes
        if with_classes:
            data["classes"] = [
                [[r + 1 for r in e] for e in sorted(c.members)] for c in frontier.classes
            ]
        data["stats"] = stats
        return json.dumps(data) + "\n"
    lines = [f"n {frontier.n}", f"pareto_optimal {len(frontier.members)}"]
    lines += [f"{k} {v}" for k, v in stats.items()]
    lines.append("members")
    for k, member in enumerate(frontier.members):
        line = format_allocation(member)
        if sizes is not None:
            line += f" : {sizes[k]}"
        lines.append(line)
        if with_classes:
            lines.extend("  " + format_allocation(e) for e in sorted(frontier.classes[k].members))
    return "\n".join(lines) + "\n"


def parse_frontier(text: str, fmt: Optional[str] = None) -> Frontier:
    """Inverse of :func:`serialize_frontier`. Class lists come back only if they were written."""
    fmt = fmt or _detect(text)
    if fmt == "structured":
        data = json.loads(text)
        members = [Allocation(r - 1 for r in m) for m in data["members"]]
        classes = None
        if "classes" in data:
            classes = [
                Preimage(m, frozenset(tuple(r - 1 for r in e) for e in cls), 0)
                for m, cls in zip(members, data["classes"])
            ]
        stats = EnumStats(**data["stats"])
        return Frontier(data["n"], members, classes, stats, data.get("class_sizes"))

    lines = text.splitlines()
    header = {}
    idx = 0
    while idx < len(lines) and lines[idx] != "members":
        key, _, value = lines[idx].partition(" ")
        header[key] = int(value)
        idx += 1
    if idx == len(lines):
        raise ParseError("missing 'members' line")
    members, groups, sizes = [], [], []
    for lineno in range(idx + 1, len(lines)):
        line = lines[lineno]
        if line.startswith("  "):
            if not groups:
                raise ParseError("class member before any frontier member", lineno + 1, 1)
            groups[-1].append(tuple(int(x) - 1 for x in line.split()))
        elif line.strip():
            rooms, _, size = line.partition(":")
            members.append(Allocation(int(x) - 1 for x in rooms.split()))
            groups.append([])
            if size.strip():
                sizes.append(int(size))
    classes = None
    if any(groups):
        classes = [Preimage(m, frozenset(g), 0) for m, g in zip(members, groups)]
    stats = EnumStats(**{k: header.get(k, 0) for k in _STAT_FIELDS})
    return Frontier(header["n"], members, classes, stats, sizes if len(sizes) == len(members) else None)
