"""Enumerating the distinct FD repairs over a range of data-change budgets."""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from fdrepair.datarepair import RepairResult, materialize, repair_data_fds
from fdrepair.fds import ExtensionVector, FDSet, Weight, apply_extension, canonical, empty_extension
from fdrepair.relation import VInstance
from fdrepair.search import DEFAULT_K, SearchSpace, SearchStats, order_key


@dataclass(frozen=True)
class FrontierPoint:
    extension: ExtensionVector
    fds: FDSet
    delta_p: int
    cost: int


@dataclass
class RangeResult:
    points: list[FrontierPoint]
    stats: SearchStats = field(default_factory=SearchStats)


def find_repairs_fds(
    fds: FDSet,
    instance: VInstance,
    tau_low: int,
    tau_high: int,
    weight: Weight,
    k: int = DEFAULT_K,
    space: Optional[SearchSpace] = None,
) -> RangeResult:
    """One A* sweep that lowers the budget each time a goal is reached.

    After recording a goal with bound ``d``, the budget becomes ``d - 1`` and
    every open state is re-scored. States already popped as non-goals stay
    non-goals under the smaller budget, so they are never revisited.
    """
    if not 0 <= tau_low <= tau_high:
        raise ValueError("expected 0 <= tau_low <= tau_high")
    space = space or SearchSpace(instance, fds, weight, k)
    stats = SearchStats()
    tau = tau_high
    points: list[FrontierPoint] = []

    def push(heap: list, state: ExtensionVector) -> None:
        gc = space.compute_gc(state, tau)
        if gc != math.inf:
            heapq.heappush(heap, (order_key(gc, space.cost(state), state), state))

    heap: list = []
    root = empty_extension(space.fds)
    stats.generated += 1
    push(heap, root)
    while heap and tau >= tau_low:
        _, state = heapq.heappop(heap)
        stats.visited += 1
        dp = space.delta_p(state)
        if dp <= tau:
            points.append(
                FrontierPoint(state, apply_extension(space.fds, state), dp, space.cost(state))
            )
            tau = dp - 1
            if tau < tau_low:
                break
            old, heap = heap, []
            for _, s in old:
                push(heap, s)
            # Descendants of the goal matter only if one can meet the new budget.
            if space.compute_gc(state, tau) == math.inf:
                continue
        stats.expanded += 1
        for child in space.children(state):
            stats.generated += 1
            push(heap, child)
    return RangeResult(points, stats)


def sample_repairs(
    fds: FDSet,
    instance: VInstance,
    taus: Iterable[int],
    weight: Weight,
    k: int = DEFAULT_K,
    seed: int = 0,
    workers: int = 1,
) -> list[RepairResult]:
    """Independent single-budget repairs, deduplicated by FD repair.

    Results keep the order of the first budget producing each distinct FD
    set. Budgets without any repair are dropped.
    """
    taus = list(taus)
    if any(t < 0 for t in taus):
        raise ValueError("budgets must be non-negative")

    def run(tau: int):
        return repair_data_fds(fds, instance, tau, weight, k, seed)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, taus))
    else:
        results = [run(t) for t in taus]

    seen = set()
    out = []
    for r in results:
        if isinstance(r, RepairResult):
            key = canonical(r.extension)
            if key not in seen:
                seen.add(key)
                out.append(r)
    return out


def sampling_stats(results: Sequence) -> SearchStats:
    total = SearchStats()
    for r in results:
        total.visited += r.stats.visited
        total.expanded += r.stats.expanded
        total.generated += r.stats.generated
    return total


@dataclass
class FrontierEntry:
    repair: RepairResult
    tau_low: int
    tau_high: int


@dataclass
class RepairFrontier:
    entries: list[FrontierEntry]
    stats: SearchStats
    tau_low: int
    tau_high: int


def materialize_frontier(
    points: Sequence[FrontierPoint],
    fds: FDSet,
    instance: VInstance,
    tau_high: int,
    weight: Weight,
    seed: int = 0,
    stats: Optional[SearchStats] = None,
    tau_low: int = 0,
    k: int = DEFAULT_K,
    space: Optional[SearchSpace] = None,
) -> RepairFrontier:
    """Run the data repair for every FD repair and attach its budget band.

    Entry ``i`` covers budgets ``[delta_p_i, delta_p_{i-1} - 1]``, clipped
    to ``[tau_low, tau_high]``.
    """
    space = space or SearchSpace(instance, fds, weight, k)
    stats = stats or SearchStats()
    entries = []
    hi = tau_high
    for p in points:
        repair = materialize(space, p.extension, hi, seed, stats)
        entries.append(FrontierEntry(repair, max(p.delta_p, tau_low), hi))
        hi = p.delta_p - 1
    return RepairFrontier(entries, stats, tau_low, tau_high)
