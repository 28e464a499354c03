import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdrepair.conflicts import check_satisfies
from fdrepair.errors import ExtensionError, ParseError, SchemaError
from fdrepair.fds import (
    FD,
    AttrCountWeight,
    DistinctCountWeight,
    appended_attributes,
    apply_extension,
    dedupe,
    dist_c,
    empty_extension,
    extends,
    extension_from_names,
    format_fds,
    make_weight,
    parse_fds,
)
from fdrepair.relation import Schema, VInstance
from strategies import instance_and_fds

SCHEMA = Schema(tuple("ABCD"))


def test_parse_and_format_round_trip():
    fds = parse_fds("# comment\nA,B -> C\n\n  D->A  # trailing\n", SCHEMA)
    assert fds == (FD(frozenset({0, 1}), 2), FD(frozenset({3}), 0))
    assert format_fds(fds, SCHEMA) == "A,B -> C\nD -> A\n"
    assert parse_fds(format_fds(fds, SCHEMA), SCHEMA) == fds


def test_empty_lhs_is_allowed():
    (fd,) = parse_fds(" -> B", SCHEMA)
    assert fd.lhs == frozenset() and fd.rhs == 1


@pytest.mark.parametrize(
    "text, exc",
    [
        ("A B C", ParseError),
        ("A -> B,C", ParseError),
        ("A -> Z", SchemaError),
        ("A -> A", SchemaError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc) as err:
        parse_fds("A -> B\n" + text, SCHEMA)
    assert "line 2" in str(err.value)


def test_apply_extension_rejects_overlap():
    fds = parse_fds("A -> B", SCHEMA)
    assert apply_extension(fds, ({2},)) == (FD(frozenset({0, 2}), 1),)
    with pytest.raises(ExtensionError):
        apply_extension(fds, (frozenset({1}),))
    with pytest.raises(ExtensionError):
        apply_extension(fds, (frozenset(), frozenset()))


def test_duplicates_are_kept_positionally():
    fds = parse_fds("A -> B\nC -> B", SCHEMA)
    ext = extension_from_names([["C"], ["A"]], SCHEMA)
    relaxed = apply_extension(fds, ext)
    assert relaxed[0] == relaxed[1]
    assert len(dedupe(relaxed)) == 1
    assert appended_attributes(fds, relaxed) == ext


def test_weights():
    inst = VInstance.from_rows("ABC", [("1", "x", "p"), ("2", "x", "p"), ("3", "y", "p")])
    ext = (frozenset({0}), frozenset({1, 2}))
    assert dist_c(ext, AttrCountWeight()) == 3
    assert dist_c(ext, DistinctCountWeight(inst)) == 3 + 2
    assert dist_c(empty_extension(ext), make_weight("distinct", inst)) == 0
    with pytest.raises(ValueError):
        make_weight("entropy", inst)


@given(instance_and_fds(max_tuples=8), st.data())
def test_relaxation_preserves_satisfaction(pair, data):
    inst, fds = pair
    ext = tuple(
        frozenset(data.draw(st.sets(st.sampled_from([a for a in range(inst.width) if a != fd.rhs and a not in fd.lhs] or [None]))) - {None})
        for fd in fds
    )
    relaxed = apply_extension(fds, ext)
    assert extends(ext, empty_extension(fds))
    if check_satisfies(inst, fds).satisfied:
        assert check_satisfies(inst, relaxed).satisfied
    for w in (AttrCountWeight(), DistinctCountWeight(inst)):
        assert dist_c(ext, w) >= 0
