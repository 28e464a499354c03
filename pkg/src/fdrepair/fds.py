"""Functional dependencies, LHS extension vectors and the FD-change distance."""

from __future__ import annotations

import threading
from typing import Iterable, Mapping, NamedTuple, Sequence

from fdrepair.errors import ExtensionError, ParseError, SchemaError
from fdrepair.relation import Schema, VInstance, distinct_count


class FD(NamedTuple):
    """``lhs -> rhs`` over attribute indices of some schema."""

    lhs: frozenset[int]
    rhs: int

    def format(self, schema: Schema) -> str:
        return f"{','.join(schema.names(self.lhs))} -> {schema.attributes[self.rhs]}"


# Position i of an FD set permanently identifies the i-th input FD, so
# extended sets keep duplicates.
FDSet = tuple[FD, ...]
# One appended attribute set per FD, aligned with the FD set.
ExtensionVector = tuple[frozenset[int], ...]


def make_fd(schema: Schema, lhs: Iterable[str], rhs: str) -> FD:
    fd = FD(schema.attr_set(lhs), schema.index(rhs))
    if fd.rhs in fd.lhs:
        raise SchemaError(f"trivial FD: {rhs} appears on both sides")
    return fd


def parse_fds(text: str, schema: Schema) -> FDSet:
    """Parse one ``A,B -> C`` FD per line. Blank lines and ``#`` comments are skipped."""
    fds = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("->") != 1:
            raise ParseError(f"line {lineno}: expected 'LHS -> RHS', got {raw!r}", line=lineno)
        left, right = (part.strip() for part in line.split("->"))
        lhs = [name.strip() for name in left.split(",") if name.strip()]
        rhs = right.strip()
        if not rhs or "," in rhs:
            raise ParseError(f"line {lineno}: right-hand side must be one attribute", line=lineno)
        try:
            fds.append(make_fd(schema, lhs, rhs))
        except SchemaError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from None
    return tuple(fds)


def format_fds(fds: FDSet, schema: Schema) -> str:
    return "".join(fd.format(schema) + "\n" for fd in fds)


def check_fds(fds: FDSet, schema: Schema) -> None:
    width = len(schema)
    for i, fd in enumerate(fds):
        if not all(0 <= a < width for a in fd.lhs) or not 0 <= fd.rhs < width:
            raise SchemaError(f"FD {i} references an attribute outside the schema")


def empty_extension(fds: FDSet) -> ExtensionVector:
    return tuple(frozenset() for _ in fds)


def apply_extension(fds: FDSet, extension: ExtensionVector) -> FDSet:
    if len(extension) != len(fds):
        raise ExtensionError(f"extension has {len(extension)} entries for {len(fds)} FDs")
    out = []
    for i, (fd, ys) in enumerate(zip(fds, extension)):
        if fd.rhs in ys or ys & fd.lhs:
            raise ExtensionError(f"extension {sorted(ys)} of FD {i} overlaps its own attributes")
        out.append(FD(fd.lhs | ys, fd.rhs))
    return tuple(out)


def extends(big: ExtensionVector, small: ExtensionVector) -> bool:
    """True iff ``big`` extends ``small`` componentwise (equality included)."""
    return all(s <= b for b, s in zip(big, small))


def canonical(extension: ExtensionVector) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(ys)) for ys in extension)


def extension_size(extension: ExtensionVector) -> int:
    return sum(len(ys) for ys in extension)


def format_extension(extension: ExtensionVector, schema: Schema) -> list[list[str]]:
    return [schema.names(ys) for ys in extension]


def extension_from_names(
    names: Sequence[Iterable[str]], schema: Schema
) -> ExtensionVector:
    return tuple(schema.attr_set(ns) for ns in names)


# ------------------------------------------------------------------ weights


class Weight:
    """Monotone, non-negative penalty ``w(Y)`` for appending attribute set ``Y``."""

    kind = "abstract"

    def __call__(self, attrs: frozenset[int]) -> int:
        raise NotImplementedError


class AttrCountWeight(Weight):
    kind = "count"

    def __call__(self, attrs: frozenset[int]) -> int:
        return len(attrs)


class DistinctCountWeight(Weight):
    """Number of distinct values of ``Y`` in the input instance.

    Weights are frozen against the instance given at construction; repairs
    made later never change them. Values are cached per attribute set.
    """

    kind = "distinct"

    def __init__(self, instance: VInstance):
        self.instance = instance
        self._cache: dict[frozenset[int], int] = {}
        self._lock = threading.Lock()

    def __call__(self, attrs: frozenset[int]) -> int:
        if not attrs:
            return 0
        key = frozenset(attrs)
        value = self._cache.get(key)
        if value is None:
            with self._lock:
                value = self._cache.get(key)
                if value is None:
                    value = distinct_count(self.instance, key)
                    self._cache[key] = value
        return value


WEIGHT_KINDS = ("count", "distinct")


def make_weight(kind: str, instance: VInstance) -> Weight:
    if kind == "count":
        return AttrCountWeight()
    if kind == "distinct":
        return DistinctCountWeight(instance)
    raise ValueError(f"unknown weight kind {kind!r}; expected one of {WEIGHT_KINDS}")


def weight(attrs: frozenset[int], w: Weight) -> int:
    return w(frozenset(attrs))


def dist_c(extension: ExtensionVector, w: Weight) -> int:
    return sum(w(ys) for ys in extension)


def appended_attributes(original: FDSet, relaxed: FDSet) -> ExtensionVector:
    """Recover the extension vector that turns ``original`` into ``relaxed``."""
    if len(original) != len(relaxed):
        raise ExtensionError("FD sets are not aligned")
    out = []
    for i, (f0, f1) in enumerate(zip(original, relaxed)):
        if f0.rhs != f1.rhs or not f0.lhs <= f1.lhs:
            raise ExtensionError(f"FD {i} is not an LHS extension of the original")
        out.append(f1.lhs - f0.lhs)
    return tuple(out)


def dedupe(fds: FDSet) -> FDSet:
    seen: Mapping[FD, None] = dict.fromkeys(fds)
    return tuple(seen)
