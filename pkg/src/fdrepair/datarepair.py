"""Tuple-by-tuple data repair against a fixed (possibly relaxed) FD set."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from fdrepair.conflicts import build_conflict_graph, greedy_vertex_cover
from fdrepair.fds import FD, ExtensionVector, FDSet, Weight, dedupe
from fdrepair.relation import Cell, CellEdit, Variable, VInstance, diff_cells
from fdrepair.search import DEFAULT_K, SearchSpace, SearchStats, astar_search

NO_GOAL_REASON = "no FD relaxation satisfies the data-change budget"


class CleanIndex:
    """Per-FD map from LHS projection to RHS value over the clean tuples.

    The clean tuples satisfy the FDs, so each LHS projection determines at
    most one RHS value.
    """

    def __init__(self, fds: FDSet):
        self.fds: list[FD] = list(dedupe(fds))
        self._lhs = [sorted(fd.lhs) for fd in self.fds]
        self._maps: list[dict[tuple, Cell]] = [{} for _ in self.fds]

    def add(self, row: Sequence[Cell]) -> None:
        for f, fd in enumerate(self.fds):
            key = tuple(row[a] for a in self._lhs[f])
            self._maps[f].setdefault(key, row[fd.rhs])

    def conflict(self, row: Sequence[Cell]) -> Optional[tuple[int, Cell]]:
        """First ``(rhs attribute, clean value)`` that ``row`` contradicts, if any."""
        for f, fd in enumerate(self.fds):
            key = tuple(row[a] for a in self._lhs[f])
            value = self._maps[f].get(key, _MISSING)
            if value is not _MISSING and value != row[fd.rhs]:
                return fd.rhs, value
        return None


_MISSING = object()


class VariableAllocator:
    """Hands out fresh variables per attribute, above any index already in use."""

    def __init__(self, instance: VInstance):
        self._next = [i + 1 for i in instance.max_variable_index()]

    def fresh(self, attr: int) -> Variable:
        v = Variable(attr, self._next[attr])
        self._next[attr] += 1
        return v


def _find_assignment(
    row: Sequence[Cell], fixed: Iterable[int], index: CleanIndex, alloc: VariableAllocator
) -> Optional[list[Cell]]:
    fixed = set(fixed)
    cand = [row[a] if a in fixed else alloc.fresh(a) for a in range(len(row))]
    while True:
        hit = index.conflict(cand)
        if hit is None:
            return cand
        attr, value = hit
        if attr in fixed:
            return None
        cand[attr] = value
        fixed.add(attr)


def find_assignment(
    row: Sequence[Cell],
    fixed: Iterable[int],
    instance: VInstance,
    fds: FDSet,
    cover: Iterable[int],
    alloc: Optional[VariableAllocator] = None,
) -> Optional[tuple[Cell, ...]]:
    """A tuple agreeing with ``row`` on ``fixed`` that violates no FD against
    the tuples of ``instance`` outside ``cover``, or None if none exists."""
    cover = set(cover)
    index = CleanIndex(fds)
    for tid, r in enumerate(instance.rows):
        if tid not in cover:
            index.add(r)
    found = _find_assignment(row, fixed, index, alloc or VariableAllocator(instance))
    return None if found is None else tuple(found)


@dataclass
class DataRepair:
    instance: VInstance
    cover: frozenset[int]
    edits: list[CellEdit]


def repair_data(fds: FDSet, instance: VInstance, seed: int = 0) -> DataRepair:
    """Make ``instance`` satisfy ``fds`` by rewriting only vertex-cover tuples.

    Cover tuples are processed in a seeded random order. For each one, its
    attributes are fixed one at a time in random order; an attribute keeps
    its value while some valid completion of the tuple still exists, and is
    otherwise overwritten by the previous valid completion.
    """
    rng = random.Random(seed)
    graph = build_conflict_graph(instance, fds)
    cover = greedy_vertex_cover(graph).cover
    rows = [list(r) for r in instance.rows]
    index = CleanIndex(fds)
    for tid, r in enumerate(rows):
        if tid not in cover:
            index.add(r)
    alloc = VariableAllocator(instance)
    width = instance.width

    pending = sorted(cover)
    rng.shuffle(pending)
    for tid in pending:
        row = rows[tid]
        attrs = list(range(width))
        rng.shuffle(attrs)
        fixed = {attrs[0]}
        current = _find_assignment(row, fixed, index, alloc)
        assert current is not None, "a single fixed attribute always admits a completion"
        for a in attrs[1:]:
            fixed.add(a)
            nxt = _find_assignment(row, fixed, index, alloc)
            if nxt is None:
                row[a] = current[a]
            else:
                current = nxt
        index.add(row)

    repaired = VInstance(instance.schema, tuple(tuple(r) for r in rows))
    return DataRepair(repaired, cover, diff_cells(instance, repaired))


# ------------------------------------------------------------ orchestrator


@dataclass
class RepairResult:
    sigma_prime: FDSet
    extension: ExtensionVector
    instance_prime: VInstance
    dist_c: int
    dist_d: int
    delta_p: int
    cover_size: int
    edits: list[CellEdit]
    stats: SearchStats
    seed: int
    tau: int


@dataclass
class EmptyRepair:
    """No FD relaxation meets the budget; carries the reason for reporting."""

    tau: int
    stats: SearchStats
    reason: str = NO_GOAL_REASON


def materialize(
    space: SearchSpace, extension: ExtensionVector, tau: int, seed: int, stats: SearchStats
) -> RepairResult:
    sigma = tuple(FD(fd.lhs | ys, fd.rhs) for fd, ys in zip(space.fds, extension))
    data = repair_data(sigma, space.instance, seed)
    return RepairResult(
        sigma_prime=sigma,
        extension=extension,
        instance_prime=data.instance,
        dist_c=space.cost(extension),
        dist_d=len(data.edits),
        delta_p=space.alpha * len(data.cover),
        cover_size=len(data.cover),
        edits=data.edits,
        stats=stats,
        seed=seed,
        tau=tau,
    )


def repair_data_fds(
    fds: FDSet,
    instance: VInstance,
    tau: int,
    weight: Weight,
    k: int = DEFAULT_K,
    seed: int = 0,
    space: Optional[SearchSpace] = None,
) -> RepairResult | EmptyRepair:
    """Cheapest FD relaxation within budget ``tau``, plus a data repair for it."""
    space = space or SearchSpace(instance, fds, weight, k)
    found = astar_search(space, tau)
    if not found.found:
        return EmptyRepair(tau, found.stats)
    return materialize(space, found.extension, tau, seed, found.stats)
