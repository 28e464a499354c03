"""Searching the space of LHS extensions for the cheapest goal state.

A state is an extension vector: one set of appended attributes per FD. A
state is a goal for budget ``tau`` when ``alpha * |cover|`` of the conflict
graph under the extended FDs is at most ``tau``. States form a tree through
the unique-parent rule, so no closed list is needed.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from fdrepair.conflicts import (
    DifferenceCatalog,
    Edge,
    alpha,
    build_conflict_graph,
    difference_sets,
    diffset_key,
    diffset_violates,
    greedy_matching,
    greedy_vertex_cover,
    max_matching_size,
)
from fdrepair.fds import (
    FD,
    ExtensionVector,
    FDSet,
    Weight,
    apply_extension,
    canonical,
    check_fds,
    dist_c,
    empty_extension,
    extends,
    extension_size,
)
from fdrepair.relation import VInstance

logger = logging.getLogger(__name__)

DEFAULT_K = 3
BOUNDS = ("matching", "greedy")

Diffset = frozenset[int]


@dataclass
class SearchStats:
    visited: int = 0
    expanded: int = 0
    generated: int = 0

    def to_json(self) -> dict:
        return {"visited": self.visited, "expanded": self.expanded, "generated": self.generated}


@dataclass
class SearchResult:
    extension: Optional[ExtensionVector]
    fds: Optional[FDSet]
    cost: Optional[int]
    delta_p: Optional[int]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.extension is not None


# ------------------------------------------------------------- tree shape


def _top(extension: ExtensionVector) -> tuple[int, int]:
    """Greatest appended attribute and the last FD index holding it."""
    best, where = -1, -1
    for j, ys in enumerate(extension):
        if ys:
            m = max(ys)
            if m >= best:
                best, where = m, j
    return best, where


def parent(extension: ExtensionVector) -> Optional[ExtensionVector]:
    top, j = _top(extension)
    if j < 0:
        return None
    return extension[:j] + (extension[j] - {top},) + extension[j + 1 :]


def children(extension: ExtensionVector, fds: FDSet, width: int) -> list[ExtensionVector]:
    """States whose unique parent is ``extension``, in deterministic order."""
    top, last = _top(extension)
    out = []
    for b in range(max(top, 0), width):
        for j, fd in enumerate(fds):
            if b == top and j <= last:
                continue
            if b == fd.rhs or b in fd.lhs or b in extension[j]:
                continue
            out.append(extension[:j] + (extension[j] | {b},) + extension[j + 1 :])
    return out


def all_extensions(fds: FDSet, width: int) -> Iterable[ExtensionVector]:
    """Every valid extension vector (exponential; meant for small oracles)."""
    per_fd = []
    for fd in fds:
        free = [a for a in range(width) if a != fd.rhs and a not in fd.lhs]
        subsets = [
            frozenset(c) for r in range(len(free) + 1) for c in itertools.combinations(free, r)
        ]
        per_fd.append(subsets)
    return itertools.product(*per_fd)


# ------------------------------------------------------ diffset heuristics


def select_diffset_subset(
    counts: Union[Mapping[Diffset, int], DifferenceCatalog], k: int
) -> list[Diffset]:
    """Pick up to ``k`` frequent difference sets with small mutual overlap."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if isinstance(counts, DifferenceCatalog):
        counts = {d: len(edges) for d, edges in counts.entries.items()}
    ranked = sorted(counts, key=lambda d: (-counts[d], diffset_key(d)))
    chosen: list[Diffset] = []
    for d in ranked:
        if len(chosen) == k:
            break
        if all(2 * len(d & c) <= min(len(d), len(c)) for c in chosen):
            chosen.append(d)
    for d in ranked:
        if len(chosen) == k:
            break
        if d not in chosen:
            chosen.append(d)
    return chosen


def _minimal(states: set[ExtensionVector]) -> set[ExtensionVector]:
    return {
        s for s in states if not any(o != s and extends(s, o) for o in states)
    }


# ------------------------------------------------------------ search space


class SearchSpace:
    """Shared, cached machinery for searching one ``(instance, fds)`` pair.

    The difference catalog of the unextended FDs is built once. Every pair
    violating an extended FD set also violates the original set, so the
    conflict graph of any state is the union of the catalog entries whose
    difference sets the state still violates.

    ``bound`` selects how the goal-descendant enumeration decides whether a
    group of difference sets may stay unresolved. ``"matching"`` compares ``alpha`` times a
    maximum-matching size against ``tau`` with ``<=``; the matching size
    lower-bounds the cover of every graph containing those edges, so the
    resulting estimate never overshoots. ``"greedy"`` uses the greedy cover
    size with a strict ``<``; it is cheaper but can overestimate, so A* may
    then return a more expensive relaxation than necessary.
    """

    def __init__(
        self,
        instance: VInstance,
        fds: FDSet,
        weight: Weight,
        k: int = DEFAULT_K,
        bound: str = "matching",
    ):
        check_fds(fds, instance.schema)
        if bound not in BOUNDS:
            raise ValueError(f"unknown bound {bound!r}")
        self.instance = instance
        self.fds = tuple(fds)
        self.weight = weight
        self.k = k
        self.bound = bound
        self.width = instance.width
        self.alpha = alpha(self.width, len(self.fds))
        graph = build_conflict_graph(instance, self.fds)
        self.catalog = difference_sets(instance, graph)
        self.diffsets = sorted(self.catalog.entries, key=diffset_key)
        self._cover_cache: dict[frozenset[Diffset], int] = {}
        self._matching_cache: dict[frozenset[Diffset], int] = {}

    # -- per-state quantities

    def lhs(self, extension: ExtensionVector) -> list[FD]:
        return [FD(fd.lhs | ys, fd.rhs) for fd, ys in zip(self.fds, extension)]

    def cost(self, extension: ExtensionVector) -> int:
        return dist_c(extension, self.weight)

    def violated(self, extension: ExtensionVector, among: Optional[Iterable[Diffset]] = None) -> list[Diffset]:
        fds = self.lhs(extension)
        pool = self.diffsets if among is None else among
        return [d for d in pool if any(diffset_violates(d, fd) for fd in fds)]

    def _edges(self, diffsets: Iterable[Diffset]) -> list[Edge]:
        edges: list[Edge] = []
        for d in diffsets:
            edges.extend(self.catalog.entries[d])
        return edges

    def cover_size(self, diffsets: Iterable[Diffset]) -> int:
        key = frozenset(diffsets)
        size = self._cover_cache.get(key)
        if size is None:
            size = greedy_vertex_cover(self._edges(key)).size
            self._cover_cache[key] = size
        return size

    def delta_p(self, extension: ExtensionVector) -> int:
        return self.alpha * self.cover_size(self.violated(extension))

    def is_goal(self, extension: ExtensionVector, tau: int) -> bool:
        return self.delta_p(extension) <= tau

    def children(self, extension: ExtensionVector) -> list[ExtensionVector]:
        return children(extension, self.fds, self.width)

    # -- the lower bound

    def _may_stay_unresolved(self, unresolved: frozenset[Diffset], tau: int) -> bool:
        if self.bound == "greedy":
            return self.alpha * self.cover_size(unresolved) < tau
        cached = self._matching_cache.get(unresolved)
        if cached is None:
            edges = self._edges(unresolved)
            greedy = len(greedy_matching(edges))
            # greedy <= maximum <= 2 * greedy
            if self.alpha * greedy > tau:
                return False
            if self.alpha * 2 * greedy <= tau:
                return True
            cached = max_matching_size(edges)
            self._matching_cache[unresolved] = cached
        return self.alpha * cached <= tau

    def desc_goal_states(
        self,
        start: ExtensionVector,
        current: ExtensionVector,
        unresolved: frozenset[Diffset],
        pending: list[Diffset],
        tau: int,
    ) -> set[ExtensionVector]:
        """Minimal extensions of ``current`` that deal with every pending difference set.

        Each pending set is either left unresolved, when the budget admits the
        accumulated unresolved edges, or resolved by appending one of its
        attributes to every FD it still violates.
        """
        if not pending:
            return {current}
        d, rest = pending[0], pending[1:]
        states: set[ExtensionVector] = set()

        grown = unresolved | {d}
        if self._may_stay_unresolved(grown, tau):
            states |= self.desc_goal_states(start, current, grown, rest, tau)

        fds = self.lhs(current)
        hit = [i for i, fd in enumerate(fds) if diffset_violates(d, fd)]
        options = [sorted(d - {fds[i].rhs}) for i in hit]
        for picks in itertools.product(*options):
            nxt = list(current)
            for i, b in zip(hit, picks):
                nxt[i] = nxt[i] | {b}
            nxt_t = tuple(nxt)
            still = self.violated(nxt_t, rest)
            states |= self.desc_goal_states(start, nxt_t, unresolved, still, tau)

        return _minimal(states)

    def compute_gc(self, extension: ExtensionVector, tau: int) -> float:
        violated = self.violated(extension)
        subset = select_diffset_subset({d: self.catalog.count(d) for d in violated}, self.k) if violated else []
        states = self.desc_goal_states(extension, extension, frozenset(), subset, tau)
        if not states:
            return math.inf
        return min(self.cost(s) for s in states)

    def result(self, extension: Optional[ExtensionVector], stats: SearchStats) -> SearchResult:
        if extension is None:
            return SearchResult(None, None, None, None, stats)
        return SearchResult(
            extension,
            apply_extension(self.fds, extension),
            self.cost(extension),
            self.delta_p(extension),
            stats,
        )


def order_key(gc: float, cost: int, extension: ExtensionVector) -> tuple:
    return (gc, cost, extension_size(extension), canonical(extension))


# ----------------------------------------------------------------- drivers


def astar_search(space: SearchSpace, tau: int) -> SearchResult:
    if tau < 0:
        raise ValueError("tau must be non-negative")
    stats = SearchStats()
    root = empty_extension(space.fds)
    heap: list[tuple] = []
    gc = space.compute_gc(root, tau)
    stats.generated += 1
    if gc != math.inf:
        heapq.heappush(heap, (order_key(gc, 0, root), root))
    while heap:
        key, state = heapq.heappop(heap)
        stats.visited += 1
        logger.debug("pop %s key=%s", canonical(state), key[:3])
        if space.is_goal(state, tau):
            return space.result(state, stats)
        stats.expanded += 1
        for child in space.children(state):
            stats.generated += 1
            gc = space.compute_gc(child, tau)
            if gc != math.inf:
                heapq.heappush(heap, (order_key(gc, space.cost(child), child), child))
    return space.result(None, stats)


def bestfirst_search(space: SearchSpace, tau: int) -> SearchResult:
    if tau < 0:
        raise ValueError("tau must be non-negative")
    stats = SearchStats()
    root = empty_extension(space.fds)
    heap = [(order_key(0, 0, root)[1:], root)]
    stats.generated += 1
    while heap:
        _, state = heapq.heappop(heap)
        stats.visited += 1
        if space.is_goal(state, tau):
            return space.result(state, stats)
        stats.expanded += 1
        for child in space.children(state):
            stats.generated += 1
            cost = space.cost(child)
            heapq.heappush(heap, (order_key(0, cost, child)[1:], child))
    return space.result(None, stats)


def modify_fds_astar(
    fds: FDSet,
    instance: VInstance,
    tau: int,
    weight: Weight,
    k: int = DEFAULT_K,
    bound: str = "matching",
) -> SearchResult:
    return astar_search(SearchSpace(instance, fds, weight, k, bound), tau)


def modify_fds_bestfirst(fds: FDSet, instance: VInstance, tau: int, weight: Weight) -> SearchResult:
    return bestfirst_search(SearchSpace(instance, fds, weight), tau)


def get_desc_goal_states(
    space: SearchSpace,
    start: ExtensionVector,
    current: ExtensionVector,
    unresolved: Iterable[Diffset],
    pending: list[Diffset],
    tau: int,
) -> set[ExtensionVector]:
    return space.desc_goal_states(start, current, frozenset(unresolved), list(pending), tau)


def compute_gc(space: SearchSpace, extension: ExtensionVector, tau: int) -> float:
    return space.compute_gc(extension, tau)
