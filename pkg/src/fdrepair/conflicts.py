"""Conflict graphs, difference sets, vertex covers and the data-change bound."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

from fdrepair.fds import FD, FDSet, check_fds
from fdrepair.relation import Schema, VInstance

Edge = tuple[int, int]


class Violation(NamedTuple):
    left: int
    right: int
    fd: int


class Satisfaction(NamedTuple):
    satisfied: bool
    violations: list[Violation]


@dataclass(frozen=True)
class ConflictGraph:
    """Tuples as vertices; an edge per violating pair, labelled with FD indices."""

    n_vertices: int
    labels: dict[Edge, frozenset[int]]

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        return {
            "vertices": list(range(self.n_vertices)),
            "edges": [
                {"pair": list(e), "fds": sorted(self.labels[e])} for e in self.edges
            ],
        }


def _violation_labels(instance: VInstance, fds: FDSet) -> dict[Edge, set[int]]:
    # Partition on the LHS, sub-partition on the RHS, pair across sub-partitions.
    labels: dict[Edge, set[int]] = defaultdict(set)
    rows = instance.rows
    for f, fd in enumerate(fds):
        lhs = sorted(fd.lhs)
        groups: dict[tuple, dict] = {}
        for tid, row in enumerate(rows):
            key = tuple(row[a] for a in lhs)
            groups.setdefault(key, {}).setdefault(row[fd.rhs], []).append(tid)
        for sub in groups.values():
            if len(sub) < 2:
                continue
            parts = list(sub.values())
            for p in range(len(parts)):
                for q in range(p + 1, len(parts)):
                    for i in parts[p]:
                        for j in parts[q]:
                            labels[(i, j) if i < j else (j, i)].add(f)
    return labels


def build_conflict_graph(instance: VInstance, fds: FDSet) -> ConflictGraph:
    check_fds(fds, instance.schema)
    labels = _violation_labels(instance, fds)
    return ConflictGraph(len(instance), {e: frozenset(s) for e, s in labels.items()})


def check_satisfies(instance: VInstance, fds: FDSet) -> Satisfaction:
    check_fds(fds, instance.schema)
    labels = _violation_labels(instance, fds)
    violations = [Violation(i, j, f) for (i, j) in sorted(labels) for f in sorted(labels[(i, j)])]
    return Satisfaction(not violations, violations)


# ---------------------------------------------------------- difference sets


def difference_set(instance: VInstance, i: int, j: int) -> frozenset[int]:
    ri, rj = instance.rows[i], instance.rows[j]
    return frozenset(a for a in range(instance.width) if ri[a] != rj[a])


def diffset_violates(diffset: frozenset[int], fd: FD) -> bool:
    """Whether a pair differing exactly on ``diffset`` violates ``fd``."""
    return fd.rhs in diffset and not (fd.lhs & diffset)


def diffset_key(diffset: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(diffset))


@dataclass
class DifferenceCatalog:
    """Edges of a conflict graph grouped by their difference set."""

    entries: dict[frozenset[int], list[Edge]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def count(self, diffset: frozenset[int]) -> int:
        return len(self.entries[diffset])

    def violated_by(self, fds: FDSet) -> list[frozenset[int]]:
        """Difference sets whose edges violate at least one FD of ``fds``."""
        return [
            d
            for d in sorted(self.entries, key=diffset_key)
            if any(diffset_violates(d, fd) for fd in fds)
        ]

    def to_json(self, schema: Schema) -> list[dict]:
        return [
            {"diffset": schema.names(d), "edges": len(self.entries[d])}
            for d in sorted(self.entries, key=diffset_key)
        ]


def difference_sets(instance: VInstance, graph: ConflictGraph) -> DifferenceCatalog:
    entries: dict[frozenset[int], list[Edge]] = defaultdict(list)
    for i, j in graph.edges:
        entries[difference_set(instance, i, j)].append((i, j))
    return DifferenceCatalog(dict(entries))


def debug_dump(instance: VInstance, fds: FDSet) -> dict:
    graph = build_conflict_graph(instance, fds)
    return {
        "graph": graph.to_json(),
        "difference_sets": difference_sets(instance, graph).to_json(instance.schema),
    }


# ------------------------------------------------------------ vertex cover


@dataclass(frozen=True)
class VertexCover:
    cover: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.cover)


def greedy_matching(edges: Iterable[Edge]) -> list[Edge]:
    """Maximal matching built by scanning edges in lexicographic order."""
    matched: set[int] = set()
    out = []
    for i, j in sorted(edges):
        if i not in matched and j not in matched:
            matched.add(i)
            matched.add(j)
            out.append((i, j))
    return out


def greedy_vertex_cover(edges: Iterable[Edge] | ConflictGraph) -> VertexCover:
    """2-approximate vertex cover.

    Takes both endpoints of a lexicographic maximal matching, then drops, in
    ascending id order, every cover vertex whose neighbours are all still in
    the cover. The second pass keeps the result a cover no larger than the
    matching cover, so the factor-2 guarantee is preserved.
    """
    if isinstance(edges, ConflictGraph):
        edges = edges.labels.keys()
    edges = sorted(edges)
    cover: set[int] = set()
    for i, j in greedy_matching(edges):
        cover.add(i)
        cover.add(j)
    adjacency: dict[int, list[int]] = defaultdict(list)
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    for v in sorted(cover):
        if all(u in cover for u in adjacency[v]):
            cover.discard(v)
    return VertexCover(frozenset(cover))


def is_vertex_cover(cover: Iterable[int], edges: Iterable[Edge]) -> bool:
    c = set(cover)
    return all(i in c or j in c for i, j in edges)


def max_matching_size(edges: Sequence[Edge]) -> int:
    """Size of a maximum matching; a lower bound on every vertex cover."""
    if not edges:
        return 0
    graph = nx.Graph()
    graph.add_edges_from(edges)
    return len(nx.max_weight_matching(graph, maxcardinality=True))


# -------------------------------------------------------------- delta_P


def alpha(schema_width: int, n_fds: int) -> int:
    """Per-tuple cap on changed cells: ``min(|R| - 1, |Sigma|)``."""
    return min(schema_width - 1, n_fds)


def delta_p(fds: FDSet, instance: VInstance) -> int:
    """``alpha * |cover|`` for the conflict graph of ``fds`` over ``instance``.

    ``fds`` keeps one entry per original FD, so its length is the original
    FD count used in ``alpha``.
    """
    graph = build_conflict_graph(instance, fds)
    return alpha(instance.width, len(fds)) * greedy_vertex_cover(graph).size
