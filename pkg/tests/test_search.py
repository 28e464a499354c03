import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdrepair.fds import (
    AttrCountWeight,
    DistinctCountWeight,
    canonical,
    empty_extension,
    extension_from_names,
    parse_fds,
)
from fdrepair.relation import VInstance
from fdrepair.search import (
    SearchSpace,
    all_extensions,
    astar_search,
    bestfirst_search,
    children,
    modify_fds_astar,
    parent,
    select_diffset_subset,
)
from oracles import Exhaustive, every_extension, random_fixture
from strategies import fd_sets


def test_d4_astar_results(d4):
    inst, fds = d4
    space = SearchSpace(inst, fds, AttrCountWeight())
    expect = {
        0: (["D"], ["A", "B"]),
        1: (["D"], ["A", "B"]),
        2: (["C"], []),
        3: (["C"], []),
        4: ([], []),
    }
    for tau, ext in expect.items():
        r = astar_search(space, tau)
        assert r.extension == extension_from_names(ext, inst.schema), tau
        assert r.delta_p <= tau


def test_d4_root_is_goal_at_full_budget(d4):
    inst, fds = d4
    r = modify_fds_astar(fds, inst, 4, AttrCountWeight())
    assert r.cost == 0 and r.stats.visited == 1


def test_no_goal_when_budget_unreachable():
    # B differs with A equal, and there is no other attribute to append
    inst = VInstance.from_rows("AB", [("1", "x"), ("1", "y")])
    fds = parse_fds("A -> B", inst.schema)
    space = SearchSpace(inst, fds, AttrCountWeight())
    r = astar_search(space, 0)
    assert not r.found
    assert astar_search(space, 1).found


@given(st.integers(2, 5), st.data())
@settings(max_examples=40)
def test_parent_rule_gives_a_tree(width, data):
    fds = data.draw(fd_sets(width, max_fds=2))
    every = list(all_extensions(fds, width))
    assert {canonical(e) for e in every} == {canonical(e) for e in every_extension(fds, width)}
    root = empty_extension(fds)
    for ext in every:
        kids = children(ext, fds, width)
        assert len({canonical(k) for k in kids}) == len(kids)
        for kid in kids:
            assert parent(kid) == ext
        if ext != root:
            assert ext in children(parent(ext), fds, width)
    assert parent(root) is None


def test_select_diffset_subset_prefers_frequent_non_overlapping():
    a, b, c, d = (frozenset(s) for s in ({0, 1}, {0, 1, 2}, {3, 4}, {5}))
    counts = {a: 5, b: 4, c: 3, d: 1}
    chosen = select_diffset_subset(counts, 3)
    assert chosen[0] == a
    assert c in chosen and len(chosen) == 3


@pytest.mark.parametrize("seed", range(40))
def test_gc_is_admissible_and_astar_optimal(seed):
    inst, fds = random_fixture(seed, max_tuples=8, widths=(3, 4))
    ex = Exhaustive(inst, fds)
    space = SearchSpace(inst, tuple(fds), AttrCountWeight())
    root_dp = ex.table[0][2]
    for tau in range(root_dp + 1):
        best = ex.min_goal_cost(tau)
        r = astar_search(space, tau)
        assert (r.cost if r.found else None) == best
        for ext, cost, dp in ex.table:
            truth = ex.min_goal_cost(tau, below=ext)
            gc = space.compute_gc(ext, tau)
            assert gc >= cost
            if truth is not None:
                assert gc <= truth
            if dp <= tau:
                assert gc == cost


@pytest.mark.parametrize("seed", range(20))
def test_distinct_weight_optimality(seed):
    inst, fds = random_fixture(seed + 1000, max_tuples=8, widths=(3, 4))
    ex = Exhaustive(inst, fds, kind="distinct")
    space = SearchSpace(inst, tuple(fds), DistinctCountWeight(inst))
    for tau in range(ex.table[0][2] + 1):
        r = astar_search(space, tau)
        assert (r.cost if r.found else None) == ex.min_goal_cost(tau)
        b = bestfirst_search(space, tau)
        assert b.cost == r.cost


@pytest.mark.parametrize("k", [1, 2, 5])
def test_heuristic_k_keeps_optimality(k):
    for seed in range(10):
        inst, fds = random_fixture(seed + 50, max_tuples=8, widths=(4,))
        ex = Exhaustive(inst, fds)
        space = SearchSpace(inst, tuple(fds), AttrCountWeight(), k=k)
        for tau in range(ex.table[0][2] + 1):
            r = astar_search(space, tau)
            assert (r.cost if r.found else None) == ex.min_goal_cost(tau)


def test_cost_is_monotone_along_tree():
    inst, fds = random_fixture(7, widths=(5,))
    space = SearchSpace(inst, tuple(fds), DistinctCountWeight(inst))
    for ext in all_extensions(tuple(fds), inst.width):
        for kid in space.children(ext):
            assert space.cost(kid) >= space.cost(ext)


def test_goal_states_prune_with_infinity():
    inst, fds = random_fixture(3, widths=(4,))
    space = SearchSpace(inst, tuple(fds), AttrCountWeight())
    ex = Exhaustive(inst, fds)
    for ext, _, _ in ex.table:
        if ex.min_goal_cost(0, below=ext) is None:
            assert space.compute_gc(ext, 0) == math.inf


@pytest.mark.parametrize("seed", range(30))
def test_greedy_bound_still_returns_goals(seed):
    inst, fds = random_fixture(seed, max_tuples=10, widths=(3, 4))
    ex = Exhaustive(inst, fds)
    space = SearchSpace(inst, tuple(fds), AttrCountWeight(), bound="greedy")
    for tau in range(ex.table[0][2] + 1):
        r = astar_search(space, tau)
        best = ex.min_goal_cost(tau)
        if r.found:
            assert r.delta_p <= tau and r.cost >= best


def test_unknown_bound_is_rejected(d4):
    inst, fds = d4
    with pytest.raises(ValueError):
        SearchSpace(inst, fds, AttrCountWeight(), bound="exact")
