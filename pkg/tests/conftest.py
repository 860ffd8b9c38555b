import itertools
import random
from pathlib import Path

import pytest

from paretottc.model import PreferenceProfile, validate_profile
from paretottc.ttc import forward_ttc

DATA = Path(__file__).parent / "data"

# Five-agent worked example; rooms are zero-based here (r1 -> 0).
EXAMPLE_PREFS = [
    [3, 2, 1, 0, 4],
    [2, 3, 0, 1, 4],
    [0, 1, 2, 3, 4],
    [0, 4, 2, 1, 3],
    [1, 2, 3, 4, 0],
]
EXAMPLE_PO = (3, 2, 1, 0, 4)


@pytest.fixture
def example_profile() -> PreferenceProfile:
    return validate_profile(EXAMPLE_PREFS)


@pytest.fixture
def opposed() -> PreferenceProfile:
    # agent 0 likes room 0 best, agent 1 likes room 1 best
    return validate_profile([[0, 1], [1, 0]])


def sample_profile(n, rng):
    return validate_profile([rng.sample(range(n), n) for _ in range(n)])


def sample_profiles(n, count, seed):
    rng = random.Random(seed * 1000 + n)
    return [sample_profile(n, rng) for _ in range(count)]


def forward_classes(profile):
    """Oracle: group all n! endowments by their TTC outcome."""
    classes = {}
    for e in itertools.permutations(range(profile.n)):
        classes.setdefault(forward_ttc(profile, e)[0], set()).add(e)
    return classes


def read_allocations(path):
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            rows.append(tuple(int(x) - 1 for x in line.split()))
    return rows
