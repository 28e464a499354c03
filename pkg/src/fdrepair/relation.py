"""Relation instances whose cells hold constants or per-attribute variables.

Constants are plain ``str`` values compared as exact text. A variable stands
for some fresh value of its column: two variables are equal only when they are
the same variable, and a variable never equals a constant. Both cell kinds are
hashable and ``==`` already implements that equality, so cells can be used
directly as dict keys when grouping tuples.
"""

from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, TextIO, Union

from fdrepair.errors import ParseError, SchemaError


@dataclass(frozen=True, order=True)
class Variable:
    """A placeholder cell value ``v_index`` of attribute ``attr``."""

    attr: int
    index: int


Cell = Union[str, Variable]

_VARIABLE_RE = re.compile(r"^\?(?P<name>.+):(?P<index>\d+)$")


def cells_equal(u: Cell, v: Cell) -> bool:
    return u == v


def is_variable(cell: Cell) -> bool:
    return isinstance(cell, Variable)


@dataclass(frozen=True)
class Schema:
    """Ordered attribute names; column order is also the total attribute order."""

    attributes: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if len(set(self.attributes)) != len(self.attributes):
            raise SchemaError(f"duplicate attribute names in {self.attributes}")

    def __len__(self) -> int:
        return len(self.attributes)

    def index(self, name: str) -> int:
        try:
            return self.attributes.index(name)
        except ValueError:
            raise SchemaError(f"unknown attribute {name!r}") from None

    def attr_set(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(n) for n in names)

    def names(self, attrs: Iterable[int]) -> list[str]:
        return [self.attributes[a] for a in sorted(attrs)]


class CellEdit(NamedTuple):
    tuple_id: int
    attr: int
    old: Cell
    new: Cell


@dataclass(frozen=True)
class VInstance:
    """An immutable relation instance. Tuple ids are row positions."""

    schema: Schema
    rows: tuple[tuple[Cell, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.rows)
        width = len(self.schema)
        for tid, row in enumerate(rows):
            if len(row) != width:
                raise SchemaError(f"tuple {tid} has {len(row)} cells, expected {width}")
            for a, cell in enumerate(row):
                if isinstance(cell, Variable):
                    if cell.attr != a:
                        raise SchemaError(
                            f"variable of attribute {cell.attr} stored in column {a} of tuple {tid}"
                        )
                elif not isinstance(cell, str):
                    raise SchemaError(f"cell ({tid}, {a}) is neither text nor a variable")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, attributes: Sequence[str], rows: Iterable[Sequence[Cell]]) -> "VInstance":
        return cls(Schema(tuple(attributes)), tuple(tuple(r) for r in rows))

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.schema)

    def project(self, tid: int, attrs: Sequence[int]) -> tuple[Cell, ...]:
        row = self.rows[tid]
        return tuple(row[a] for a in attrs)

    def with_edits(self, edits: Iterable[tuple[int, int, Cell]]) -> "VInstance":
        """Copy of this instance with ``(tuple_id, attr, value)`` cells overwritten."""
        rows = [list(r) for r in self.rows]
        for tid, a, value in edits:
            rows[tid][a] = value
        return VInstance(self.schema, tuple(tuple(r) for r in rows))

    def max_variable_index(self) -> list[int]:
        """Largest variable index per attribute, -1 where a column has none."""
        top = [-1] * self.width
        for row in self.rows:
            for a, cell in enumerate(row):
                if isinstance(cell, Variable) and cell.index > top[a]:
                    top[a] = cell.index
        return top

    def render_cell(self, cell: Cell) -> str:
        if isinstance(cell, Variable):
            return f"?{self.schema.attributes[cell.attr]}:{cell.index}"
        return cell


# ---------------------------------------------------------------- CSV I/O


def load_csv(
    source: Union[str, os.PathLike, TextIO, bytes],
    *,
    header: bool = True,
    delimiter: str = ",",
    parse_variables: bool = False,
) -> VInstance:
    """Read a delimited file into a V-instance.

    Every field becomes a constant holding its verbatim text, including empty
    fields. With ``parse_variables`` set, fields of the form ``?<attr>:<n>``
    naming their own column are read back as variables, which is how repaired
    instances are written out.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
        fh: TextIO = io.StringIO(text)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as f:
            fh = io.StringIO(f.read())
    else:
        fh = source

    reader = csv.reader(fh, delimiter=delimiter)
    records = [(reader.line_num, rec) for rec in reader]
    if not records:
        raise ParseError("empty input: no header or rows")

    if header:
        _, names = records[0]
        body = records[1:]
    else:
        names = [f"col{i}" for i in range(len(records[0][1]))]
        body = records
    schema = Schema(tuple(names))

    rows = []
    for line, rec in body:
        if len(rec) != len(schema):
            raise ParseError(
                f"line {line}: expected {len(schema)} fields, found {len(rec)}", line=line
            )
        if parse_variables:
            rows.append(tuple(_parse_cell(schema, a, v) for a, v in enumerate(rec)))
        else:
            rows.append(tuple(rec))
    return VInstance(schema, tuple(rows))


def _parse_cell(schema: Schema, attr: int, text: str) -> Cell:
    m = _VARIABLE_RE.match(text)
    if m and m.group("name") == schema.attributes[attr]:
        return Variable(attr, int(m.group("index")))
    return text


def dump_csv(instance: VInstance, fh: TextIO, *, delimiter: str = ",") -> None:
    writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
    writer.writerow(instance.schema.attributes)
    for row in instance.rows:
        writer.writerow([instance.render_cell(c) for c in row])


def to_csv_text(instance: VInstance, *, delimiter: str = ",") -> str:
    buf = io.StringIO()
    dump_csv(instance, buf, delimiter=delimiter)
    return buf.getvalue()


# ------------------------------------------------------------ comparisons


def _check_aligned(a: VInstance, b: VInstance) -> None:
    if a.schema != b.schema:
        raise SchemaError("instances have different schemas")
    if len(a) != len(b):
        raise SchemaError(f"instances have {len(a)} and {len(b)} tuples")


def diff_cells(before: VInstance, after: VInstance) -> list[CellEdit]:
    """Cells whose values differ between two aligned instances."""
    _check_aligned(before, after)
    out = []
    for tid, (r0, r1) in enumerate(zip(before.rows, after.rows)):
        for a, (u, v) in enumerate(zip(r0, r1)):
            if u != v:
                out.append(CellEdit(tid, a, u, v))
    return out


def dist_d(before: VInstance, after: VInstance) -> int:
    return len(diff_cells(before, after))


def distinct_count(instance: VInstance, attrs: Iterable[int]) -> int:
    """Number of distinct projections of ``instance`` onto ``attrs``."""
    cols = sorted(set(attrs))
    if not cols:
        raise ValueError("distinct_count needs a non-empty attribute set")
    return len({tuple(row[a] for a in cols) for row in instance.rows})


def ground(instance: VInstance) -> VInstance:
    """Replace every variable by a fresh constant unused in its column.

    Distinct variables receive distinct constants, so any FD satisfied under
    variable semantics is satisfied by the grounded instance too.
    """
    used = [set() for _ in range(instance.width)]
    for row in instance.rows:
        for a, cell in enumerate(row):
            if isinstance(cell, str):
                used[a].add(cell)
    mapping: dict[Variable, str] = {}
    rows = []
    for row in instance.rows:
        new = []
        for a, cell in enumerate(row):
            if isinstance(cell, Variable):
                if cell not in mapping:
                    value = f"#g{cell.index}"
                    while value in used[a]:
                        value += "_"
                    used[a].add(value)
                    mapping[cell] = value
                new.append(mapping[cell])
            else:
                new.append(cell)
        rows.append(tuple(new))
    return VInstance(instance.schema, tuple(rows))
