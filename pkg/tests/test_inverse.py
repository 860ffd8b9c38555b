import itertools
from collections import deque

import pytest

from paretottc.errors import InconsistentFixedSet, InvalidTagState, NotParetoOptimal
from paretottc.inverse import _search, devour, dressup, initial_state, invttc, successors
from paretottc.model import Allocation, Tag, TaggedState, validate_profile
from paretottc.ttc import ttc_outcome

from conftest import DATA, EXAMPLE_PO, forward_classes, read_allocations, sample_profiles

U, C, S = Tag.UNMARKED, Tag.CIRCLE, Tag.SQUARE


def reference_bfs(start, profile):
    """Literal BFS over TaggedState objects using the readable successor rules."""
    seen = {start.key()}
    queue = deque([start])
    terminals = set()
    while queue:
        state = queue.popleft()
        if state.terminal:
            terminals.add(tuple(state.alloc))
            continue
        for nxt in successors(state, profile):
            if nxt.key() not in seen:
                seen.add(nxt.key())
                queue.append(nxt)
    return terminals, len(seen)


def test_dressup_initial_circles(example_profile):
    tags = dressup(EXAMPLE_PO, [U] * 5, example_profile, set())
    assert tags == (C, C, U, C, U)
    assert {EXAMPLE_PO[i] + 1 for i, t in enumerate(tags) if t is C} == {4, 3, 1}


def test_dressup_after_fixing_r1(example_profile):
    tags = dressup(EXAMPLE_PO, [C, C, U, S, U], example_profile, {0})
    assert tags[2] is C  # agent 3 now tops out at r2
    assert tags == (C, C, C, S, U)


def test_dressup_all_square(example_profile):
    assert dressup(EXAMPLE_PO, [S] * 5, example_profile, set(range(5))) == (S,) * 5


def test_dressup_rejects_inconsistent_fixed(example_profile):
    with pytest.raises(InconsistentFixedSet):
        dressup(EXAMPLE_PO, [U, U, U, S, U], example_profile, set())


def test_devour_terminal_start(example_profile):
    start = TaggedState(Allocation([1, 0, 2, 3, 4]), (S,) * 5)
    assert devour(start, example_profile) == {(1, 0, 2, 3, 4)}


def test_devour_worked_example(example_profile):
    members = devour(initial_state(example_profile, EXAMPLE_PO), example_profile)
    assert members == set(read_allocations(DATA / "example5_preimage.txt"))
    assert len(members) == 12
    assert (3, 2, 1, 0, 4) in members and (2, 3, 1, 0, 4) in members
    # fixing r1 circles r2, whose trades with r4 and r3 give four more endowments
    for one_based in ("4 2 3 1 5", "2 3 4 1 5", "3 2 4 1 5", "2 4 3 1 5"):
        assert tuple(int(x) - 1 for x in one_based.split()) in members


def test_devour_opposed(opposed):
    members = devour(initial_state(opposed, (0, 1)), opposed)
    assert members == {(0, 1), (1, 0)}
    assert members == forward_classes(opposed)[(0, 1)]


def test_devour_rejects_hand_made_tags(example_profile):
    with pytest.raises(InvalidTagState):
        devour(TaggedState(Allocation(EXAMPLE_PO), (C,) * 5), example_profile)


def test_invttc_identical_preferences():
    profile = validate_profile([[1, 3, 0, 2]] * 4)
    for alloc in itertools.permutations(range(4)):
        assert invttc(profile, alloc).members == {alloc}


def test_invttc_n1():
    pre = invttc(validate_profile([[0]]), (0,))
    assert pre.members == {(0,)}
    assert pre.states_visited == 2  # the circled start and its squared terminal


def test_invttc_rejects_non_po(opposed):
    with pytest.raises(NotParetoOptimal):
        invttc(opposed, (1, 0))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_soundness_and_completeness(n):
    count = {2: 10, 3: 20, 4: 20, 5: 10, 6: 4}[n]
    for profile in sample_profiles(n, count, seed=3):
        for po, expected in forward_classes(profile).items():
            pre = invttc(profile, po)
            assert all(ttc_outcome(profile, m) == po for m in pre.members)
            assert pre.members == expected


@pytest.mark.parametrize("n", [3, 4, 5])
def test_fast_search_matches_reference_bfs(n):
    for profile in sample_profiles(n, 6, seed=4):
        for po in forward_classes(profile):
            start = initial_state(profile, po)
            terminals, visited = reference_bfs(start, profile)
            members, fast_visited, expanded = _search(profile, tuple(po), 0)
            assert set(members) == terminals
            assert len(members) == len(set(members))
            assert fast_visited == visited
            assert expanded <= fast_visited


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tag_monotonicity_and_circle_condition(n):
    for profile in sample_profiles(n, 5, seed=5):
        for po in forward_classes(profile):
            queue = deque([initial_state(profile, po)])
            seen = set()
            while queue:
                state = queue.popleft()
                if state.key() in seen:
                    continue
                seen.add(state.key())
                fixed = state.fixed_rooms()
                for i in state.circles():
                    top = next(r for r in profile.prefs[i] if r not in fixed)
                    assert state.alloc[i] == top
                if state.terminal:
                    continue
                assert state.circles(), "non-terminal state without circles"
                squares = sum(t is S for t in state.tags)
                for nxt in successors(state, profile):
                    for before, after in zip(state.tags, nxt.tags):
                        assert after >= before
                    if nxt.key() != state.key():
                        assert sum(t is S for t in nxt.tags) > squares
                    queue.append(nxt)
