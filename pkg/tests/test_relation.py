import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdrepair.conflicts import check_satisfies
from fdrepair.errors import ParseError, SchemaError
from fdrepair.relation import (
    Schema,
    Variable,
    VInstance,
    cells_equal,
    diff_cells,
    dist_d,
    distinct_count,
    ground,
    load_csv,
    to_csv_text,
)
from strategies import instance_and_fds, instances

cells = st.one_of(
    st.sampled_from(["a", "b", "", "1"]),
    st.builds(Variable, st.just(0), st.integers(0, 3)),
)


def test_variable_equality_is_identity():
    assert cells_equal(Variable(0, 1), Variable(0, 1))
    assert not cells_equal(Variable(0, 1), Variable(0, 2))
    assert not cells_equal(Variable(0, 1), "1")
    assert not cells_equal("1", "01")


@given(cells, cells)
def test_cells_equal_matches_definition(u, v):
    same_constant = isinstance(u, str) and isinstance(v, str) and u == v
    same_variable = isinstance(u, Variable) and isinstance(v, Variable) and u == v
    assert cells_equal(u, v) == (same_constant or same_variable)
    assert cells_equal(u, v) == cells_equal(v, u)


def test_schema_rejects_duplicates():
    with pytest.raises(SchemaError):
        Schema(("A", "A"))


def test_variable_must_live_in_its_column():
    with pytest.raises(SchemaError):
        VInstance.from_rows("AB", [(Variable(1, 0), "x")])


def test_load_csv_keeps_text_verbatim():
    inst = load_csv(b"A,B\n01, x\n,\n")
    assert inst.rows == (("01", " x"), ("", ""))


def test_load_csv_reports_the_bad_line():
    with pytest.raises(ParseError) as err:
        load_csv(io.StringIO("A,B\n1,2\n3\n"))
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_load_csv_without_header():
    inst = load_csv(b"1;2\n3;4\n", header=False, delimiter=";")
    assert inst.schema.attributes == ("col0", "col1")
    assert len(inst) == 2


def test_empty_input_is_rejected():
    with pytest.raises(ParseError):
        load_csv(b"")


def test_variables_round_trip_through_csv():
    inst = VInstance.from_rows("AB", [("x", Variable(1, 4)), (Variable(0, 2), "?A:1")])
    text = to_csv_text(inst)
    assert "?B:4" in text
    back = load_csv(text.encode(), parse_variables=True)
    # "?A:1" in column B names another attribute, so it stays a constant
    assert back.rows == inst.rows
    assert load_csv(text.encode()).rows[0][1] == "?B:4"


def test_dist_d_and_diff_cells():
    a = VInstance.from_rows("AB", [("1", "2"), ("3", "4")])
    b = a.with_edits([(0, 1, "9"), (1, 0, Variable(0, 0))])
    assert dist_d(a, b) == 2
    assert [(e.tuple_id, e.attr) for e in diff_cells(a, b)] == [(0, 1), (1, 0)]
    with pytest.raises(SchemaError):
        dist_d(a, VInstance.from_rows("AB", [("1", "2")]))


@given(instances(), st.data())
def test_dist_d_is_a_symmetric_count(inst, data):
    edits = data.draw(
        st.lists(
            st.tuples(st.integers(0, max(len(inst) - 1, 0)), st.integers(0, inst.width - 1)),
            max_size=6,
        )
    ) if len(inst) else []
    other = inst.with_edits([(t, a, "new") for t, a in edits])
    changed = {(t, a) for t, a in edits if inst.rows[t][a] != "new"}
    assert dist_d(inst, other) == dist_d(other, inst) == len(changed)
    assert dist_d(inst, inst) == 0


def test_distinct_count():
    inst = VInstance.from_rows("AB", [("1", "x"), ("1", "y"), ("1", "x")])
    assert distinct_count(inst, [0]) == 1
    assert distinct_count(inst, [1]) == 2
    assert distinct_count(inst, [0, 1]) == 2
    with pytest.raises(ValueError):
        distinct_count(inst, [])


@given(instances(min_width=3), st.data())
def test_distinct_count_is_monotone(inst, data):
    small = data.draw(st.sets(st.integers(0, inst.width - 1), min_size=1))
    big = small | data.draw(st.sets(st.integers(0, inst.width - 1)))
    assert distinct_count(inst, small) <= distinct_count(inst, big)


def test_ground_uses_fresh_distinct_constants():
    inst = VInstance.from_rows("A", [("#g0",), (Variable(0, 0),), (Variable(0, 1),), (Variable(0, 0),)])
    g = ground(inst)
    values = [r[0] for r in g.rows]
    assert values[1] == values[3]
    assert len({values[0], values[1], values[2]}) == 3
    assert all(isinstance(v, str) for v in values)


@given(instance_and_fds(max_tuples=8), st.data())
def test_grounding_preserves_satisfaction(pair, data):
    inst, fds = pair
    if not len(inst):
        return
    cells = data.draw(
        st.lists(st.tuples(st.integers(0, len(inst) - 1), st.integers(0, inst.width - 1)), max_size=5)
    )
    with_vars = inst.with_edits([(t, a, Variable(a, n)) for n, (t, a) in enumerate(cells)])
    assert check_satisfies(with_vars, fds).satisfied == check_satisfies(ground(with_vars), fds).satisfied
